import json
import subprocess
import sys

import pytest

from champion_opt.errors import ConfigError
from champion_opt.experiments import (
    ExperimentConfig,
    comparison_csv,
    comparison_summary,
    config_from_dict,
    config_from_file,
    convergence_csv,
    convergence_report,
    omega_cdf_csv,
    omega_cdf_report,
    run_comparison,
)
from champion_opt.sampling import (
    STREAM_DEMAND,
    DemandModel,
    path_digest,
    sample_path,
    seed_sequence,
)

SMOKE = dict(regime="stationary", instances=1, periods=5, sample_paths=10, seed=11, mu=20.0)


def smoke_config(**overrides):
    return ExperimentConfig(**{**SMOKE, **overrides})


# ---------------------------------------------------------------------------
# configuration
# ---------------------------------------------------------------------------


def test_config_requires_named_fields():
    for missing in ("regime", "instances", "periods", "sample_paths", "seed"):
        data = {k: v for k, v in SMOKE.items() if k != missing}
        with pytest.raises(ConfigError, match=missing):
            config_from_dict(data)


def test_config_rejects_unknown_fields():
    with pytest.raises(ConfigError, match="mystery"):
        config_from_dict({**SMOKE, "mystery": 1})


@pytest.mark.parametrize(
    "overrides, field",
    [
        ({"regime": "weird"}, "regime"),
        ({"instances": 0}, "instances"),
        ({"periods": 0}, "periods"),
        ({"sample_paths": 0}, "sample_paths"),
        ({"seed": -4}, "seed"),
        ({"mu": None}, "mu"),
        ({"question2": "nope"}, "question2"),
        ({"workers": 0}, "workers"),
        ({"trials": 0}, "trials"),
        ({"sample_grid": ()}, "sample_grid"),
        ({"lookahead": 0}, "lookahead"),
        ({"reference_sample_paths": 10}, "reference_sample_paths"),
    ],
)
def test_config_validation_names_fields(overrides, field):
    with pytest.raises(ConfigError, match=field):
        config_from_dict({**SMOKE, **overrides})


def test_config_from_toml_and_json(tmp_path):
    toml_file = tmp_path / "cfg.toml"
    toml_file.write_text(
        'regime = "stationary"\ninstances = 1\nperiods = 5\nsample_paths = 10\nseed = 11\nmu = 20.0\n'
    )
    json_file = tmp_path / "cfg.json"
    json_file.write_text(json.dumps(SMOKE))
    assert config_from_file(toml_file) == config_from_file(json_file) == smoke_config()
    bad = tmp_path / "cfg.yaml"
    bad.write_text("regime: stationary\n")
    with pytest.raises(ConfigError):
        config_from_file(bad)


# ---------------------------------------------------------------------------
# comparison runs
# ---------------------------------------------------------------------------


def test_smoke_comparison_row_invariants():
    result = run_comparison(smoke_config())
    assert len(result.rows) == 1
    row = result.rows[0]
    assert row.index == 1
    assert row.difference == row.benchmark_cost - row.champion_cost
    assert result.mean_benchmark == row.benchmark_cost
    assert result.champion_wins + result.benchmark_wins + result.ties == 1


def test_both_methods_consume_the_same_realization():
    config = smoke_config(instances=3)
    result = run_comparison(config)
    for k, row in enumerate(result.rows):
        model = DemandModel((config.mu,) * config.periods)
        expected = sample_path(model, config.periods, seed_sequence(config.seed, k, STREAM_DEMAND))
        assert row.realization_digest == path_digest(expected.demands)


def test_comparison_deterministic_and_worker_invariant():
    base = smoke_config(instances=4, periods=6, sample_paths=12)
    serial = run_comparison(base)
    again = run_comparison(base)
    threaded = run_comparison(smoke_config(instances=4, periods=6, sample_paths=12, workers=3))
    assert comparison_csv(serial) == comparison_csv(again) == comparison_csv(threaded)


def test_comparison_csv_schema_and_mean_row():
    result = run_comparison(smoke_config(instances=2))
    text = comparison_csv(result)
    lines = text.strip().splitlines()
    assert lines[0] == "instance,c_ss,c_cs,diff,improvement"
    assert len(lines) == 4  # header + 2 instances + mean
    assert lines[-1].startswith("mean,")
    # aggregate row recomputes from the instance rows
    c_ss = [float(line.split(",")[1]) for line in lines[1:3]]
    c_cs = [float(line.split(",")[2]) for line in lines[1:3]]
    mean_fields = lines[-1].split(",")
    assert float(mean_fields[1]) == sum(c_ss) / 2
    assert float(mean_fields[2]) == sum(c_cs) / 2
    assert float(mean_fields[3]) == (sum(c_ss) - sum(c_cs)) / 2


def test_improvement_sign_conventions():
    stationary = run_comparison(smoke_config(instances=2))
    expected = (stationary.mean_champion - stationary.mean_benchmark) / stationary.mean_benchmark
    assert stationary.improvement_fraction() == expected
    nonstat = run_comparison(
        ExperimentConfig(
            regime="nonstationary", instances=2, periods=5, sample_paths=10,
            seed=5, mean_set=(10.0, 20.0),
        )
    )
    expected = (nonstat.mean_benchmark - nonstat.mean_champion) / nonstat.mean_benchmark
    assert nonstat.improvement_fraction() == expected
    assert "(c_cs - c_ss)/c_ss" in comparison_summary(nonstat)
    assert "(c_ss - c_cs)/c_ss" in comparison_summary(nonstat)


def test_nonstationary_means_are_reproducible_per_instance():
    config = ExperimentConfig(
        regime="nonstationary", instances=2, periods=4, sample_paths=8, seed=9,
        mean_set=(10.0, 15.0, 20.0),
    )
    a = run_comparison(config)
    b = run_comparison(config)
    assert comparison_csv(a) == comparison_csv(b)


# ---------------------------------------------------------------------------
# reports
# ---------------------------------------------------------------------------


def test_convergence_report_single_grid_entry():
    config = smoke_config(sample_grid=(3,), trials=4, reference_sample_paths=300)
    study = convergence_report(config)
    text = convergence_csv(study)
    lines = text.strip().splitlines()
    assert lines[0] == "sample_paths,agreement"
    assert len(lines) == 2
    assert lines[1].startswith("3,")


def test_omega_cdf_report_is_a_cdf():
    report = omega_cdf_report(smoke_config(sample_paths=40))
    values = [v for v, _ in report.points]
    cdf = [c for _, c in report.points]
    assert values == sorted(values)
    assert all(b >= a for a, b in zip(cdf, cdf[1:]))
    assert cdf[-1] == 1.0
    text = omega_cdf_csv(report)
    assert text.splitlines()[0] == "value,cdf"
    assert omega_cdf_report(smoke_config(sample_paths=40)) == report


def test_omega_cdf_respects_lookahead():
    wide = omega_cdf_report(smoke_config(sample_paths=30))
    narrow = omega_cdf_report(smoke_config(sample_paths=30, lookahead=1))
    assert narrow != wide  # one-period problems order exactly the shortfall


# ---------------------------------------------------------------------------
# command line
# ---------------------------------------------------------------------------


def run_cli(*args, env=None):
    import os

    full_env = dict(os.environ)
    if env:
        full_env.update(env)
    return subprocess.run(
        [sys.executable, "-m", "champion_opt", *args],
        capture_output=True, text=True, env=full_env,
    )


def write_smoke_toml(path, **overrides):
    data = {**SMOKE, **overrides}
    lines = []
    for key, value in data.items():
        if isinstance(value, str):
            lines.append(f'{key} = "{value}"')
        elif isinstance(value, tuple):
            lines.append(f"{key} = [{', '.join(map(str, value))}]")
        else:
            lines.append(f"{key} = {value}")
    path.write_text("\n".join(lines) + "\n")


def test_cli_run_comparison_writes_csv(tmp_path):
    cfg = tmp_path / "cfg.toml"
    write_smoke_toml(cfg, output_dir=str(tmp_path / "out"))
    proc = run_cli("run-comparison", "--config", str(cfg))
    assert proc.returncode == 0, proc.stderr
    assert (tmp_path / "out" / "comparison.csv").exists()
    assert "mean cost, benchmark" in proc.stdout


def test_cli_output_dir_env_override(tmp_path):
    cfg = tmp_path / "cfg.toml"
    write_smoke_toml(cfg, output_dir=str(tmp_path / "ignored"))
    proc = run_cli(
        "run-comparison", "--config", str(cfg),
        env={"CHAMPION_OPT_OUTPUT_DIR": str(tmp_path / "env_out")},
    )
    assert proc.returncode == 0, proc.stderr
    assert (tmp_path / "env_out" / "comparison.csv").exists()
    assert not (tmp_path / "ignored").exists()


def test_cli_bad_config_exits_2(tmp_path):
    cfg = tmp_path / "cfg.toml"
    write_smoke_toml(cfg, regime="weird")
    proc = run_cli("run-comparison", "--config", str(cfg))
    assert proc.returncode == 2
    assert "config error" in proc.stderr
    missing = run_cli("run-comparison", "--config", str(tmp_path / "nope.toml"))
    assert missing.returncode == 2


def test_cli_optimal_ss():
    proc = run_cli("optimal-ss", "--mu", "20", "--K", "64", "--h", "1", "--p", "9")
    assert proc.returncode == 0
    assert "s=14 S=62" in proc.stdout


def test_cli_solve_lot_sizing(tmp_path):
    record = tmp_path / "instance.txt"
    record.write_text("2 0 64 1 9\n10 10\n")
    proc = run_cli("solve-lot-sizing", str(record))
    assert proc.returncode == 0
    assert "orders: 20 0" in proc.stdout
    piped = subprocess.run(
        [sys.executable, "-m", "champion_opt", "solve-lot-sizing", "-"],
        input="2 0 64 1 9\n10 10\n", capture_output=True, text=True,
    )
    assert piped.stdout == proc.stdout


def test_cli_solve_lot_sizing_infeasible_exit_3(tmp_path):
    record = tmp_path / "instance.txt"
    record.write_text("2 9 64 1 9\n2 1\n")
    proc = run_cli("solve-lot-sizing", str(record))
    assert proc.returncode == 3
    assert "no (stock exceeds demand" in proc.stdout
