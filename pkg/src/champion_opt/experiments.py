"""Configuration-driven experiment harness.

Three studies, all reproducible from a config file plus its seed:

* ``run_comparison`` — per-instance episode costs of the benchmark
  (s,S)-style method against the rolling-horizon median method, on identical
  demand realizations, in a stationary or nonstationary regime.
* ``convergence_report`` — agreement frequency of the estimated median with
  a large-sample reference as the per-decision path budget grows.
* ``omega_cdf_report`` — the empirical cdf of first-order solutions at one
  decision epoch, with the median estimate.

Per-instance randomness is keyed by instance index under the master seed, so
instances can be computed in any order (or in parallel) with identical
results; CSV output is byte-stable for a fixed (config, seed).
"""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, fields, replace
from pathlib import Path
from typing import Sequence

from .errors import ConfigError, InvalidInputError
from .inventory import (
    QUESTION2_MODES,
    ChampionPolicy,
    PolicySchedule,
    SsPolicy,
    heuristic_schedule,
    simulate_policy,
    stationary_policy_for_mean,
)
from .lot_sizing import FirstOrderSolver
from .oma import ConvergenceStudy, convergence_study, distribution_summary, run_oma
from .sampling import (
    STREAM_DEMAND,
    STREAM_MEANS,
    DemandModel,
    path_digest,
    sample_path,
    seed_sequence,
    stream,
)

STATIONARY = "stationary"
NONSTATIONARY = "nonstationary"
DEFAULT_MEAN_SET = tuple(float(v) for v in range(10, 80, 5))


@dataclass(frozen=True)
class ExperimentConfig:
    regime: str
    instances: int
    periods: int
    sample_paths: int
    seed: int
    setup_cost: float = 64.0
    holding_rate: float = 1.0
    penalty_rate: float = 9.0
    initial_inventory: int = 0
    output_dir: str = "."
    mu: float | None = None
    mean_set: tuple[float, ...] = DEFAULT_MEAN_SET
    lookahead: int | None = None
    question2: str = "forced"
    workers: int = 1
    sample_grid: tuple[int, ...] = (10, 50, 100, 500, 1000)
    trials: int = 50
    reference_sample_paths: int | None = None

    def __post_init__(self) -> None:
        if self.regime not in (STATIONARY, NONSTATIONARY):
            raise ConfigError(f"regime: must be '{STATIONARY}' or '{NONSTATIONARY}'")
        if self.instances < 1:
            raise ConfigError("instances: must be at least 1")
        if self.periods < 1:
            raise ConfigError("periods: must be at least 1")
        if self.sample_paths < 1:
            raise ConfigError("sample_paths: must be at least 1")
        if self.seed < 0:
            raise ConfigError("seed: must be a non-negative integer (no wall-clock seeding)")
        if self.regime == STATIONARY and (self.mu is None or not self.mu > 0):
            raise ConfigError("mu: stationary regime needs a positive mean")
        if self.regime == NONSTATIONARY and len(self.mean_set) == 0:
            raise ConfigError("mean_set: nonstationary regime needs a non-empty mean set")
        if any(not float(m) > 0 for m in self.mean_set):
            raise ConfigError("mean_set: entries must be positive")
        if self.setup_cost < 0 or self.holding_rate < 0 or self.penalty_rate < 0:
            raise ConfigError("setup_cost/holding_rate/penalty_rate: must be non-negative")
        if self.lookahead is not None and self.lookahead < 1:
            raise ConfigError("lookahead: must be at least 1 when given")
        if self.question2 not in QUESTION2_MODES:
            raise ConfigError(f"question2: must be one of {QUESTION2_MODES}")
        if self.workers < 1:
            raise ConfigError("workers: must be at least 1")
        if len(self.sample_grid) == 0 or any(m < 1 for m in self.sample_grid):
            raise ConfigError("sample_grid: entries must be at least 1")
        if self.trials < 1:
            raise ConfigError("trials: must be at least 1")
        if self.reference_sample_paths is not None and self.reference_sample_paths < 100 * max(self.sample_grid):
            raise ConfigError("reference_sample_paths: must be at least 100x the largest grid entry")
        object.__setattr__(self, "mean_set", tuple(float(m) for m in self.mean_set))
        object.__setattr__(self, "sample_grid", tuple(int(m) for m in self.sample_grid))


_CONFIG_FIELDS = {f.name for f in fields(ExperimentConfig)}


def config_from_dict(data: dict) -> ExperimentConfig:
    unknown = sorted(set(data) - _CONFIG_FIELDS)
    if unknown:
        raise ConfigError(f"unknown config fields: {', '.join(unknown)}")
    for req in ("regime", "instances", "periods", "sample_paths", "seed"):
        if req not in data:
            raise ConfigError(f"{req}: required field is missing")
    kwargs = dict(data)
    for key in ("mean_set", "sample_grid"):
        if key in kwargs:
            kwargs[key] = tuple(kwargs[key])
    try:
        return ExperimentConfig(**kwargs)
    except TypeError as exc:
        raise ConfigError(str(exc)) from exc


def config_from_file(path: str | Path) -> ExperimentConfig:
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    if path.suffix.lower() == ".json":
        data = json.loads(text)
    elif path.suffix.lower() == ".toml":
        try:
            import tomllib  # Python >= 3.11
        except ModuleNotFoundError:  # pragma: no cover - depends on interpreter
            import tomli as tomllib
        data = tomllib.loads(text)
    else:
        raise ConfigError(f"config file must be .toml or .json, got {path.suffix!r}")
    if not isinstance(data, dict):
        raise ConfigError("config file must hold a single table/object")
    return config_from_dict(data)


# ---------------------------------------------------------------------------
# Method comparison (benchmark policy vs rolling-horizon median policy)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class InstanceComparison:
    index: int  # 1-based, mirrors the result tables
    benchmark_cost: float
    champion_cost: float
    realization_digest: str

    @property
    def difference(self) -> float:
        return self.benchmark_cost - self.champion_cost


@dataclass(frozen=True)
class ComparisonResult:
    regime: str
    rows: tuple[InstanceComparison, ...]
    mean_benchmark: float
    mean_champion: float
    mean_difference: float
    champion_wins: int
    benchmark_wins: int
    ties: int

    def __post_init__(self) -> None:
        n = len(self.rows)
        if n == 0:
            raise InvalidInputError("comparison needs at least one instance")
        if self.mean_benchmark != sum(r.benchmark_cost for r in self.rows) / n:
            raise InvalidInputError("mean benchmark cost does not recompute from rows")
        if self.mean_champion != sum(r.champion_cost for r in self.rows) / n:
            raise InvalidInputError("mean champion cost does not recompute from rows")
        if self.mean_difference != sum(r.difference for r in self.rows) / n:
            raise InvalidInputError("mean difference does not recompute from rows")
        wins_c = sum(1 for r in self.rows if r.champion_cost < r.benchmark_cost)
        wins_b = sum(1 for r in self.rows if r.benchmark_cost < r.champion_cost)
        if (wins_c, wins_b, n - wins_c - wins_b) != (self.champion_wins, self.benchmark_wins, self.ties):
            raise InvalidInputError("win counts do not recompute from rows")

    def improvement_fraction(self) -> float:
        """Mean improvement under this regime's reporting convention.

        Stationary tables report (champion - benchmark)/benchmark; the
        nonstationary tables report (benchmark - champion)/benchmark.
        """
        if self.regime == STATIONARY:
            return (self.mean_champion - self.mean_benchmark) / self.mean_benchmark
        return (self.mean_benchmark - self.mean_champion) / self.mean_benchmark


def _instance_means(config: ExperimentConfig, index: int) -> tuple[float, ...]:
    if config.regime == STATIONARY:
        assert config.mu is not None
        return (float(config.mu),) * config.periods
    picks = stream(config.seed, index, STREAM_MEANS).integers(0, len(config.mean_set), config.periods)
    return tuple(config.mean_set[int(i)] for i in picks)


def _benchmark_policy(config: ExperimentConfig, means: Sequence[float]) -> SsPolicy | PolicySchedule:
    if config.regime == STATIONARY:
        return stationary_policy_for_mean(
            float(means[0]), config.setup_cost, config.holding_rate, config.penalty_rate
        )
    return heuristic_schedule(means, config.setup_cost, config.holding_rate, config.penalty_rate)


def _run_instance(config: ExperimentConfig, index: int) -> InstanceComparison:
    means = _instance_means(config, index)
    model = DemandModel(means)
    realization = sample_path(model, config.periods, seed_sequence(config.seed, index, STREAM_DEMAND))
    benchmark = _benchmark_policy(config, means)
    record_benchmark = simulate_policy(
        benchmark, realization, config.initial_inventory,
        config.setup_cost, config.holding_rate, config.penalty_rate,
    )
    champion = ChampionPolicy(
        model,
        config.sample_paths,
        config.setup_cost,
        config.holding_rate,
        config.penalty_rate,
        seed=config.seed,
        seed_key=(index,),
        lookahead=config.lookahead,
        question2=config.question2,
    )
    record_champion = simulate_policy(
        champion, realization, config.initial_inventory,
        config.setup_cost, config.holding_rate, config.penalty_rate,
    )
    return InstanceComparison(
        index + 1,
        record_benchmark.total_cost,
        record_champion.total_cost,
        path_digest(realization.demands),
    )


def run_comparison(config: ExperimentConfig) -> ComparisonResult:
    """Run both methods on every instance's identical demand realization."""
    if config.regime == NONSTATIONARY:
        # warm the per-mean policy cache serially so workers only read it
        for m in config.mean_set:
            stationary_policy_for_mean(float(m), config.setup_cost, config.holding_rate, config.penalty_rate)
    indices = range(config.instances)
    if config.workers > 1:
        with ThreadPoolExecutor(max_workers=config.workers) as pool:
            rows = tuple(pool.map(lambda k: _run_instance(config, k), indices))
    else:
        rows = tuple(_run_instance(config, k) for k in indices)
    n = len(rows)
    return ComparisonResult(
        regime=config.regime,
        rows=rows,
        mean_benchmark=sum(r.benchmark_cost for r in rows) / n,
        mean_champion=sum(r.champion_cost for r in rows) / n,
        mean_difference=sum(r.difference for r in rows) / n,
        champion_wins=sum(1 for r in rows if r.champion_cost < r.benchmark_cost),
        benchmark_wins=sum(1 for r in rows if r.benchmark_cost < r.champion_cost),
        ties=sum(1 for r in rows if r.benchmark_cost == r.champion_cost),
    )


def _fmt_cost(x: float) -> str:
    return str(int(x)) if float(x).is_integer() else repr(float(x))


def comparison_csv(result: ComparisonResult) -> str:
    """Fixed schema: instance,c_ss,c_cs,diff,improvement plus a mean row.

    The improvement column follows the regime's reporting convention (see
    ``ComparisonResult.improvement_fraction``); both conventions appear in
    the human-readable summary.
    """
    lines = ["instance,c_ss,c_cs,diff,improvement"]
    n = len(result.rows)
    for r in result.rows:
        if result.regime == STATIONARY:
            improvement = (r.champion_cost - r.benchmark_cost) / r.benchmark_cost
        else:
            improvement = (r.benchmark_cost - r.champion_cost) / r.benchmark_cost
        lines.append(
            f"{r.index},{_fmt_cost(r.benchmark_cost)},{_fmt_cost(r.champion_cost)},"
            f"{_fmt_cost(r.difference)},{improvement!r}"
        )
    lines.append(
        f"mean,{_fmt_cost(result.mean_benchmark)},{_fmt_cost(result.mean_champion)},"
        f"{_fmt_cost(result.mean_difference)},{result.improvement_fraction()!r}"
    )
    return "\n".join(lines) + "\n"


def comparison_summary(result: ComparisonResult) -> str:
    cs_over_ss = (result.mean_champion - result.mean_benchmark) / result.mean_benchmark
    ss_over_cs = (result.mean_benchmark - result.mean_champion) / result.mean_benchmark
    lines = [
        f"regime: {result.regime}",
        f"instances: {len(result.rows)}",
        f"mean cost, benchmark (c_ss): {result.mean_benchmark!r}",
        f"mean cost, champion  (c_cs): {result.mean_champion!r}",
        f"mean difference (c_ss - c_cs): {result.mean_difference!r}",
        f"improvement (c_cs - c_ss)/c_ss: {cs_over_ss!r}",
        f"improvement (c_ss - c_cs)/c_ss: {ss_over_cs!r}",
        f"wins: champion {result.champion_wins}, benchmark {result.benchmark_wins}, ties {result.ties}",
        "realization digests:",
    ]
    lines += [f"  instance {r.index}: {r.realization_digest}" for r in result.rows]
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Median-convergence and cdf reports
# ---------------------------------------------------------------------------


def _epoch_model_and_solver(config: ExperimentConfig) -> tuple[DemandModel, FirstOrderSolver]:
    means = _instance_means(config, 0)
    horizon = config.periods if config.lookahead is None else min(config.lookahead, config.periods)
    model = DemandModel(means[:horizon])
    solver = FirstOrderSolver(
        config.setup_cost,
        config.holding_rate,
        config.penalty_rate,
        config.initial_inventory,
        force_order=False,
    )
    return model, solver


def convergence_report(config: ExperimentConfig) -> ConvergenceStudy:
    """Agreement-with-reference study for the first decision epoch."""
    model, solver = _epoch_model_and_solver(config)
    return convergence_study(
        model,
        solver,
        config.sample_grid,
        config.trials,
        model.horizon,
        config.seed,
        config.reference_sample_paths,
    )


def convergence_csv(study: ConvergenceStudy) -> str:
    lines = ["sample_paths,agreement"]
    lines += [f"{m},{freq!r}" for m, freq in study.rows]
    return "\n".join(lines) + "\n"


def convergence_summary(study: ConvergenceStudy) -> str:
    lines = [
        f"reference median: {study.reference_value} (from {study.reference_sample_count} paths)",
        "agreement by sample count:",
    ]
    lines += [f"  M={m}: {freq!r}" for m, freq in study.rows]
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class OmegaCdfReport:
    median_value: int
    positive_fraction: float
    place_order: bool
    points: tuple[tuple[int, float], ...]  # (first order, empirical cdf)


def omega_cdf_report(config: ExperimentConfig) -> OmegaCdfReport:
    """Empirical cdf of first-order solutions at the first decision epoch."""
    model, solver = _epoch_model_and_solver(config)
    gate, median, dist = run_oma(model, solver, config.sample_paths, model.horizon, config.seed)
    return OmegaCdfReport(
        median_value=median.value,
        positive_fraction=gate.positive_fraction,
        place_order=gate.place_order,
        points=tuple(distribution_summary(dist)),
    )


def omega_cdf_csv(report: OmegaCdfReport) -> str:
    lines = ["value,cdf"]
    lines += [f"{value},{cdf!r}" for value, cdf in report.points]
    return "\n".join(lines) + "\n"


def omega_cdf_summary(report: OmegaCdfReport) -> str:
    return (
        f"omega-median estimate: {report.median_value}\n"
        f"positive fraction: {report.positive_fraction!r}\n"
        f"order gate: {'order' if report.place_order else 'no order'}\n"
        f"distinct solution values: {len(report.points)}\n"
    )


def with_output_dir(config: ExperimentConfig, output_dir: str | None) -> ExperimentConfig:
    return replace(config, output_dir=output_dir) if output_dir else config
