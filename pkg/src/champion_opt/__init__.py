"""champion_opt: optimality-in-probability toolkit.

Estimate champion solutions (decisions more likely than not to beat every
rival on the realized sample path) by the median of single-path optima, with
an exact dynamic lot-sizing solver, exact stationary (s,S) benchmarks, a
rolling-horizon inventory simulator, and a reproducible experiment harness.
"""

from .champions import (
    FinitePerformanceTable,
    find_champion,
    is_champion,
    load_table_file,
    load_table_text,
    pairwise_win_prob,
    table_from_unimodal_family,
    verify_nonsingularity,
)
from .errors import (
    ChampionOptError,
    ConfigError,
    InternalInvariantError,
    InvalidInputError,
    SearchBoundaryError,
    SizeLimitError,
    SolverFailure,
)
from .experiments import (
    ComparisonResult,
    ExperimentConfig,
    InstanceComparison,
    OmegaCdfReport,
    comparison_csv,
    comparison_summary,
    config_from_dict,
    config_from_file,
    convergence_csv,
    convergence_report,
    convergence_summary,
    omega_cdf_csv,
    omega_cdf_report,
    omega_cdf_summary,
    run_comparison,
)
from .inventory import (
    ChampionPolicy,
    PolicySchedule,
    SimulationRecord,
    SsPolicy,
    champion_policy_step,
    evaluate_ss_exact,
    heuristic_schedule,
    optimal_ss,
    simulate_policy,
    simulate_ss_long_run,
    stationary_policy_for_mean,
)
from .lot_sizing import (
    FirstOrderSolver,
    LotSizingInstance,
    LotSizingPlan,
    cost_of_first_order,
    first_orders_batch,
    format_instance_text,
    k_convexity_probe,
    omega_solution,
    parse_instance_text,
    plan_from_orders,
    solve,
    solve_bruteforce,
)
from .oma import (
    ConvergenceStudy,
    EmpiricalDistribution,
    GateDecision,
    OmaResult,
    OmegaMedianEstimate,
    convergence_study,
    distribution_summary,
    empirical_ccdf,
    empirical_cdf,
    omega_median,
    order_gate,
    run_oma,
)
from .sampling import (
    DemandModel,
    DeterministicDemandModel,
    SamplePath,
    demand_matrix,
    sample_path,
    seed_sequence,
    stream,
    truncated_poisson_pmf,
)

__version__ = "0.1.0"
