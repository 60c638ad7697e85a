"""Sample-path median engine: estimate the omega-median of a decision.

Workflow: draw M demand paths from a model, solve the deterministic
single-path optimization on each (the "omega-problem"), and read the median
of the resulting solutions off their empirical distribution.  The median is
the value whose empirical cdf and ccdf are both at least one half; an
accompanying gate reports whether at least half of the solutions are
strictly positive (the order/no-order vote).
"""

from __future__ import annotations

from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from typing import Callable, NamedTuple, Sequence

from .errors import InvalidInputError, SolverFailure
from .sampling import DemandModelLike, SamplePath, demand_matrix, paths_from_matrix


@dataclass(frozen=True)
class EmpiricalDistribution:
    """Ascending multiset of integer decision values from M solved paths."""

    values: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.values) == 0:
            raise InvalidInputError("empirical distribution needs at least one value")
        vals = tuple(sorted(int(v) for v in self.values))
        object.__setattr__(self, "values", vals)

    @property
    def sample_count(self) -> int:
        return len(self.values)

    def count_at_most(self, u: int) -> int:
        return bisect_right(self.values, u)

    def count_at_least(self, u: int) -> int:
        return len(self.values) - bisect_left(self.values, u)

    def count_positive(self) -> int:
        return self.count_at_least(1)


@dataclass(frozen=True)
class OmegaMedianEstimate:
    value: int
    cdf_at_value: float
    ccdf_at_value: float
    sample_count: int

    def __post_init__(self) -> None:
        m = self.sample_count
        if m < 1:
            raise InvalidInputError("sample count must be positive")
        # both defining conditions of a median must hold (integer-exact)
        if round(self.cdf_at_value * m) * 2 < m or round(self.ccdf_at_value * m) * 2 < m:
            raise InvalidInputError("median estimate violates its cdf/ccdf conditions")


@dataclass(frozen=True)
class GateDecision:
    place_order: bool
    positive_fraction: float

    def __post_init__(self) -> None:
        if self.place_order != (self.positive_fraction >= 0.5):
            raise InvalidInputError("gate decision inconsistent with its fraction")


def empirical_cdf(dist: EmpiricalDistribution, u: int) -> float:
    """Fraction of solved paths whose decision is at most u."""
    return dist.count_at_most(u) / dist.sample_count


def empirical_ccdf(dist: EmpiricalDistribution, u: int) -> float:
    """Fraction of solved paths whose decision is at least u."""
    return dist.count_at_least(u) / dist.sample_count


def omega_median(dist: EmpiricalDistribution) -> OmegaMedianEstimate:
    """Lowest sorted value with cdf >= 1/2 and ccdf >= 1/2.

    For even sample counts two adjacent sorted values can both qualify;
    the one at the lower sorted index is returned, deterministically.
    """
    m = dist.sample_count
    value = dist.values[(m - 1) // 2]
    return OmegaMedianEstimate(value, empirical_cdf(dist, value), empirical_ccdf(dist, value), m)


def order_gate(dist: EmpiricalDistribution) -> GateDecision:
    """Vote on placing an order: yes iff at least half the solutions are > 0.

    The boundary (exactly half) orders; comparisons are integer-exact.
    """
    positive = dist.count_positive()
    m = dist.sample_count
    return GateDecision(2 * positive >= m, positive / m)


OmegaSolver = Callable[[SamplePath], int]


class OmaResult(NamedTuple):
    gate: GateDecision
    median: OmegaMedianEstimate
    distribution: EmpiricalDistribution


def solve_paths(solver: OmegaSolver, paths: Sequence[SamplePath]) -> list[int]:
    """Apply a single-path solver to every path, tagging failures by index.

    Solvers may expose ``solve_paths(paths)`` for vectorized execution; the
    result must match per-path calls element-wise (tests enforce this for
    the built-in lot-sizing solvers).
    """
    batch = getattr(solver, "solve_paths", None)
    if batch is not None:
        try:
            return [int(v) for v in batch(paths)]
        except SolverFailure:
            raise
        except Exception:
            pass  # fall through and re-run per path to attribute the index
    out = []
    for i, path in enumerate(paths):
        try:
            out.append(int(solver(path)))
        except Exception as exc:
            raise SolverFailure(i, str(exc)) from exc
    return out


def run_oma(
    model: DemandModelLike,
    solver: OmegaSolver,
    sample_count: int,
    periods: int,
    seed: int,
) -> OmaResult:
    """Draw M paths, solve each omega-problem, and summarize the solutions.

    Deterministic in (model, solver, sample_count, periods, seed): each path
    comes from its own split stream keyed by path index, and the aggregation
    is a sorted multiset, so any evaluation order yields identical output.
    """
    if sample_count < 1:
        raise InvalidInputError("sample_count must be at least 1")
    if periods < 1:
        raise InvalidInputError("periods must be at least 1")
    matrix = demand_matrix(model, periods, sample_count, seed)
    paths = paths_from_matrix(matrix)
    solutions = solve_paths(solver, paths)
    dist = EmpiricalDistribution(tuple(solutions))
    return OmaResult(order_gate(dist), omega_median(dist), dist)


@dataclass(frozen=True)
class ConvergenceStudy:
    reference_value: int
    reference_sample_count: int
    rows: tuple[tuple[int, float], ...]  # (sample count, agreement frequency)


def convergence_study(
    model: DemandModelLike,
    solver: OmegaSolver,
    sample_grid: Sequence[int],
    trials: int,
    periods: int,
    seed: int,
    reference_sample_count: int | None = None,
) -> ConvergenceStudy:
    """Agreement frequency of the estimated median with a large-M reference.

    The reference median is computed once at ``reference_sample_count``
    (default 100x the largest grid entry).  For each grid entry M, ``trials``
    independent estimates are run on fresh streams and the fraction equal to
    the reference is reported.  Frequencies are noisy but should rise with M.
    """
    if len(sample_grid) == 0:
        raise InvalidInputError("sample_grid must be non-empty")
    if trials < 1:
        raise InvalidInputError("trials must be at least 1")
    if any(m < 1 for m in sample_grid):
        raise InvalidInputError("sample_grid entries must be at least 1")
    m_ref = reference_sample_count or 100 * max(sample_grid)
    if m_ref < 100 * max(sample_grid):
        raise InvalidInputError("reference_sample_count must be at least 100x the largest grid entry")
    reference = run_oma(model, solver, m_ref, periods, seed).median.value

    rows = []
    for grid_index, m in enumerate(sample_grid):
        hits = 0
        for trial in range(trials):
            matrix = demand_matrix(model, periods, m, seed, 1 + grid_index, trial)
            solutions = solve_paths(solver, paths_from_matrix(matrix))
            dist = EmpiricalDistribution(tuple(solutions))
            if omega_median(dist).value == reference:
                hits += 1
        rows.append((int(m), hits / trials))
    return ConvergenceStudy(int(reference), int(m_ref), tuple(rows))


def distribution_summary(dist: EmpiricalDistribution) -> list[tuple[int, float]]:
    """(value, cdf) pairs over the distinct values; plot-ready cdf steps."""
    out = []
    seen = None
    for v in dist.values:
        if v != seen:
            out.append((v, empirical_cdf(dist, v)))
            seen = v
    return out
