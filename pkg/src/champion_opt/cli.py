"""Command-line interface.

Subcommands::

    champion-opt run-comparison --config FILE   # benchmark vs champion table
    champion-opt convergence    --config FILE   # median agreement vs sample count
    champion-opt omega-cdf      --config FILE   # empirical cdf of one epoch
    champion-opt optimal-ss --mu 20 --K 64 --h 1 --p 9
    champion-opt solve-lot-sizing FILE          # '-' reads stdin

Exit codes: 0 success, 2 configuration/usage error, 3 infeasibility or
search-boundary error, 4 internal invariant violation.  Runs are byte-stable
for a fixed config and seed; CHAMPION_OPT_OUTPUT_DIR overrides the config's
output directory.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from .errors import ConfigError, InternalInvariantError, InvalidInputError, SearchBoundaryError
from .experiments import (
    comparison_csv,
    comparison_summary,
    config_from_file,
    convergence_csv,
    convergence_report,
    convergence_summary,
    omega_cdf_csv,
    omega_cdf_report,
    omega_cdf_summary,
    run_comparison,
    with_output_dir,
)
from .inventory import evaluate_ss_exact, optimal_ss
from .lot_sizing import parse_instance_text, solve
from .sampling import truncated_poisson_pmf

OUTPUT_DIR_ENV = "CHAMPION_OPT_OUTPUT_DIR"

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_INFEASIBLE = 3
EXIT_INVARIANT = 4


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="champion-opt", description=__doc__ and __doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    for name, help_text in (
        ("run-comparison", "run the benchmark-vs-champion cost comparison"),
        ("convergence", "median agreement frequency against a large-sample reference"),
        ("omega-cdf", "empirical cdf of first-order solutions at one epoch"),
    ):
        cmd = sub.add_parser(name, help=help_text)
        cmd.add_argument("--config", required=True, help="experiment config (.toml or .json)")
        cmd.add_argument("--output-dir", default=None, help="override the config's output directory")

    ss = sub.add_parser("optimal-ss", help="exact optimal stationary (s,S) policy for Poisson demand")
    ss.add_argument("--mu", type=float, required=True, help="Poisson demand mean")
    ss.add_argument("--K", type=float, default=64.0, help="setup cost per order")
    ss.add_argument("--h", type=float, default=1.0, help="holding cost rate")
    ss.add_argument("--p", type=float, default=9.0, help="backlog penalty rate")

    sim = sub.add_parser("simulate", help="simulate one policy over one demand episode")
    sim.add_argument("--policy", choices=("ss", "schedule", "champion"), required=True)
    sim.add_argument("--means", required=True, help="comma-separated per-period demand means, e.g. 15,30,20")
    sim.add_argument("--demands", default=None, help="comma-separated demand realization; sampled from --seed when omitted")
    sim.add_argument("--x0", type=int, default=0, help="initial inventory")
    sim.add_argument("--K", type=float, default=64.0, help="setup cost per order")
    sim.add_argument("--h", type=float, default=1.0, help="holding cost rate")
    sim.add_argument("--p", type=float, default=9.0, help="backlog penalty rate")
    sim.add_argument("--seed", type=int, default=0, help="master seed for sampling and the champion policy")
    sim.add_argument("--s", type=int, default=None, help="reorder point (policy ss; optimal for means[0] when omitted)")
    sim.add_argument("--S", type=int, default=None, help="order-up-to level (policy ss)")
    sim.add_argument("--sample-paths", type=int, default=100, help="lookahead paths per champion decision")
    sim.add_argument("--lookahead", type=int, default=None, help="champion lookahead; remaining periods when omitted")
    sim.add_argument("--question2", choices=("forced", "positive"), default="forced")

    lot = sub.add_parser("solve-lot-sizing", help="solve one planning instance from a text record")
    lot.add_argument("instance", help="instance file; '-' reads standard input")
    return parser


def _write(directory: Path, name: str, text: str) -> Path:
    directory.mkdir(parents=True, exist_ok=True)
    target = directory / name
    target.write_text(text, encoding="utf-8")
    return target


def _cmd_run_comparison(args) -> int:
    config = with_output_dir(config_from_file(args.config), args.output_dir or os.environ.get(OUTPUT_DIR_ENV))
    result = run_comparison(config)
    target = _write(Path(config.output_dir), "comparison.csv", comparison_csv(result))
    sys.stdout.write(comparison_summary(result))
    sys.stdout.write(f"csv: {target}\n")
    return EXIT_OK


def _cmd_convergence(args) -> int:
    config = with_output_dir(config_from_file(args.config), args.output_dir or os.environ.get(OUTPUT_DIR_ENV))
    study = convergence_report(config)
    target = _write(Path(config.output_dir), "convergence.csv", convergence_csv(study))
    sys.stdout.write(convergence_summary(study))
    sys.stdout.write(f"csv: {target}\n")
    return EXIT_OK


def _cmd_omega_cdf(args) -> int:
    config = with_output_dir(config_from_file(args.config), args.output_dir or os.environ.get(OUTPUT_DIR_ENV))
    report = omega_cdf_report(config)
    target = _write(Path(config.output_dir), "omega_cdf.csv", omega_cdf_csv(report))
    sys.stdout.write(omega_cdf_summary(report))
    sys.stdout.write(f"csv: {target}\n")
    return EXIT_OK


def _cmd_optimal_ss(args) -> int:
    pmf = truncated_poisson_pmf(args.mu)
    policy = optimal_ss(pmf, args.K, args.h, args.p)
    value = evaluate_ss_exact(policy, pmf, args.K, args.h, args.p)
    sys.stdout.write(
        f"optimal policy: s={policy.reorder_point} S={policy.order_up_to}\n"
        f"long-run average cost per period: {value!r}\n"
    )
    return EXIT_OK


def _parse_number_list(text: str, kind, what: str):
    try:
        values = tuple(kind(tok) for tok in text.replace(",", " ").split())
    except ValueError as exc:
        raise InvalidInputError(f"malformed {what} list: {exc}") from exc
    if not values:
        raise InvalidInputError(f"{what} list must be non-empty")
    return values


def _cmd_simulate(args) -> int:
    from .inventory import ChampionPolicy, SsPolicy, heuristic_schedule, simulate_policy, stationary_policy_for_mean
    from .sampling import STREAM_DEMAND, DemandModel, SamplePath, sample_path, seed_sequence

    means = _parse_number_list(args.means, float, "mean")
    model = DemandModel(means)
    if args.demands is not None:
        path = SamplePath(_parse_number_list(args.demands, int, "demand"))
        if len(path) != len(means):
            raise InvalidInputError("demand realization must supply one value per period mean")
    else:
        path = sample_path(model, len(means), seed_sequence(args.seed, 0, STREAM_DEMAND))
    if args.policy == "ss":
        if (args.s is None) != (args.S is None):
            raise InvalidInputError("policy ss needs both --s and --S, or neither")
        if args.s is None:
            policy = stationary_policy_for_mean(means[0], args.K, args.h, args.p)
        else:
            policy = SsPolicy(args.s, args.S)
    elif args.policy == "schedule":
        policy = heuristic_schedule(means, args.K, args.h, args.p)
    else:
        policy = ChampionPolicy(
            model, args.sample_paths, args.K, args.h, args.p,
            seed=args.seed, seed_key=(0,), lookahead=args.lookahead, question2=args.question2,
        )
    record = simulate_policy(policy, path, args.x0, args.K, args.h, args.p)
    sys.stdout.write("period demand order inventory maintenance setup\n")
    for t in range(len(record.demands)):
        sys.stdout.write(
            f"{t + 1} {record.demands[t]} {record.orders[t]} {record.inventories[t]} "
            f"{record.maintenance_costs[t]!r} {record.setup_costs[t]!r}\n"
        )
    sys.stdout.write(
        f"total maintenance: {record.total_maintenance!r}\n"
        f"total setup: {record.total_setup!r}\n"
        f"total cost: {record.total_cost!r}\n"
    )
    return EXIT_OK


def _cmd_solve_lot_sizing(args) -> int:
    text = sys.stdin.read() if args.instance == "-" else Path(args.instance).read_text(encoding="utf-8")
    instance = parse_instance_text(text)
    plan = solve(instance)
    sys.stdout.write(f"feasible: {'yes' if plan.feasible else 'no (stock exceeds demand; no orders placed)'}\n")
    sys.stdout.write("orders: " + " ".join(str(u) for u in plan.orders) + "\n")
    sys.stdout.write("inventories: " + " ".join(str(x) for x in plan.inventories) + "\n")
    sys.stdout.write(f"total cost: {plan.total_cost!r}\n")
    return EXIT_OK if plan.feasible else EXIT_INFEASIBLE


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "run-comparison": _cmd_run_comparison,
        "convergence": _cmd_convergence,
        "omega-cdf": _cmd_omega_cdf,
        "optimal-ss": _cmd_optimal_ss,
        "simulate": _cmd_simulate,
        "solve-lot-sizing": _cmd_solve_lot_sizing,
    }
    try:
        return handlers[args.command](args)
    except ConfigError as exc:
        sys.stderr.write(f"config error: {exc}\n")
        return EXIT_CONFIG
    except FileNotFoundError as exc:
        sys.stderr.write(f"config error: {exc}\n")
        return EXIT_CONFIG
    except SearchBoundaryError as exc:
        sys.stderr.write(f"boundary error: {exc}\n")
        return EXIT_INFEASIBLE
    except InvalidInputError as exc:
        sys.stderr.write(f"invalid input: {exc}\n")
        return EXIT_CONFIG
    except InternalInvariantError as exc:
        sys.stderr.write(f"internal invariant violation: {exc}\n")
        return EXIT_INVARIANT


if __name__ == "__main__":
    raise SystemExit(main())
