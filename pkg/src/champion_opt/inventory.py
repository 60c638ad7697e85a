"""Inventory policies, exact (s,S) evaluation, and the episode simulator.

Timing convention (zero lead time): at the start of period i the policy sees
the previous end-of-period inventory, orders u_i which arrives instantly,
demand d_i then occurs, and the end-of-period level x_i = x_{i-1} + u_i - d_i
is charged h per held unit or p per backlogged unit, plus K when u_i > 0.

The exact (s,S) value uses renewal-reward cycles: every order raises the
level to S, so cycles are i.i.d. and the long-run average cost per period is
expected cycle cost over expected cycle length, both computed from the
renewal function of cumulative demand.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Protocol, Sequence

import numpy as np

from .errors import InvalidInputError, SearchBoundaryError
from .lot_sizing import first_orders_batch, maintenance_cost
from .oma import EmpiricalDistribution, omega_median, order_gate
from .sampling import (
    DEFAULT_TRUNCATION_QUANTILE,
    STREAM_POLICY,
    DemandModelLike,
    SamplePath,
    demand_matrix,
    stream,
    truncated_poisson_pmf,
)

QUESTION2_MODES = ("forced", "positive")


class OrderPolicy(Protocol):
    """Anything that maps (pre-order inventory, period index) to an order."""

    def order_quantity(self, inventory: int, period_index: int) -> int: ...


@dataclass(frozen=True)
class SsPolicy:
    """Order up to ``order_up_to`` whenever inventory falls to the reorder point."""

    reorder_point: int
    order_up_to: int

    def __post_init__(self) -> None:
        if not isinstance(self.reorder_point, (int, np.integer)) or not isinstance(
            self.order_up_to, (int, np.integer)
        ):
            raise InvalidInputError("policy levels must be integers")
        if not self.reorder_point < self.order_up_to:
            raise InvalidInputError("reorder point must lie strictly below the order-up-to level")
        object.__setattr__(self, "reorder_point", int(self.reorder_point))
        object.__setattr__(self, "order_up_to", int(self.order_up_to))

    def order_quantity(self, inventory: int, period_index: int = 0) -> int:
        if inventory <= self.reorder_point:
            return self.order_up_to - inventory
        return 0


@dataclass(frozen=True)
class PolicySchedule:
    """A separate (s,S) pair for every period of an episode."""

    policies: tuple[SsPolicy, ...]

    def __post_init__(self) -> None:
        if len(self.policies) == 0:
            raise InvalidInputError("schedule needs at least one period")
        if any(not isinstance(p, SsPolicy) for p in self.policies):
            raise InvalidInputError("schedule entries must be SsPolicy values")

    def __len__(self) -> int:
        return len(self.policies)

    def order_quantity(self, inventory: int, period_index: int) -> int:
        return self.policies[period_index].order_quantity(inventory, period_index)


@dataclass(frozen=True)
class SimulationRecord:
    """Period-by-period trace of one simulated episode."""

    demands: tuple[int, ...]
    initial_inventory: int
    orders: tuple[int, ...]
    inventories: tuple[int, ...]
    maintenance_costs: tuple[float, ...]
    setup_costs: tuple[float, ...]
    total_maintenance: float
    total_setup: float
    total_cost: float

    def __post_init__(self) -> None:
        n = len(self.demands)
        if not (len(self.orders) == len(self.inventories) == len(self.maintenance_costs) == len(self.setup_costs) == n):
            raise InvalidInputError("record components must have one entry per period")
        x = self.initial_inventory
        for u, d, level in zip(self.orders, self.demands, self.inventories):
            x = x + u - d
            if x != level:
                raise InvalidInputError("record inventories violate the stock dynamics")
        if not math.isclose(self.total_maintenance, sum(self.maintenance_costs), rel_tol=1e-9, abs_tol=1e-9):
            raise InvalidInputError("maintenance total does not match its components")
        if not math.isclose(self.total_setup, sum(self.setup_costs), rel_tol=1e-9, abs_tol=1e-9):
            raise InvalidInputError("setup total does not match its components")
        if not math.isclose(self.total_cost, self.total_maintenance + self.total_setup, rel_tol=1e-9, abs_tol=1e-9):
            raise InvalidInputError("total cost does not match its components")


def simulate_policy(
    policy: OrderPolicy,
    path: SamplePath,
    initial_inventory: int,
    setup_cost: float,
    holding_rate: float,
    penalty_rate: float,
) -> SimulationRecord:
    """Run one episode of the period-review loop and account every cost."""
    x = int(initial_inventory)
    orders: list[int] = []
    inventories: list[int] = []
    maintenance: list[float] = []
    setups: list[float] = []
    for t, d in enumerate(path.demands):
        u = int(policy.order_quantity(x, t))
        if u < 0:
            raise InvalidInputError(f"policy ordered a negative quantity in period {t + 1}")
        x = x + u - d
        orders.append(u)
        inventories.append(x)
        maintenance.append(maintenance_cost(x, holding_rate, penalty_rate))
        setups.append(setup_cost if u > 0 else 0.0)
    return SimulationRecord(
        demands=path.demands,
        initial_inventory=int(initial_inventory),
        orders=tuple(orders),
        inventories=tuple(inventories),
        maintenance_costs=tuple(maintenance),
        setup_costs=tuple(setups),
        total_maintenance=sum(maintenance),
        total_setup=sum(setups),
        total_cost=sum(maintenance) + sum(setups),
    )


# ---------------------------------------------------------------------------
# Exact stationary (s,S) evaluation and optimization
# ---------------------------------------------------------------------------


def _validated_pmf(pmf: Sequence[float]) -> np.ndarray:
    arr = np.asarray(pmf, dtype=np.float64)
    if arr.ndim != 1 or arr.size == 0:
        raise InvalidInputError("pmf must be a non-empty 1-d array over demands 0,1,...")
    if (arr < 0).any():
        raise InvalidInputError("pmf entries must be non-negative")
    mass = float(arr.sum())
    if abs(mass - 1.0) > 1e-6:
        raise InvalidInputError("pmf must sum to 1")
    arr = arr / mass
    mean = float(np.arange(arr.size) @ arr)
    if not mean > 0:
        raise InvalidInputError("pmf mean must be positive: replenishment cycles would never end")
    return arr


def _renewal_function(pmf: np.ndarray, length: int) -> np.ndarray:
    """R[c] = expected number of period starts at cumulative demand c."""
    no_demand = pmf[0]
    R = np.zeros(length, dtype=np.float64)
    scale = 1.0 / (1.0 - no_demand)
    R[0] = scale
    for c in range(1, length):
        k_hi = min(c, pmf.size - 1)
        if k_hi >= 1:
            stop = c - k_hi - 1
            seg = R[c - 1 : (stop if stop >= 0 else None) : -1]
            acc = float(pmf[1 : k_hi + 1] @ seg)
        else:
            acc = 0.0
        R[c] = acc * scale
    return R


def _expected_one_period_cost(levels: np.ndarray, pmf: np.ndarray, holding_rate: float, penalty_rate: float) -> np.ndarray:
    """g(y) = E[H(y - demand)] for every y in ``levels``."""
    out = np.zeros(levels.size, dtype=np.float64)
    for x, q in enumerate(pmf):
        if q == 0.0:
            continue
        net = levels - x
        out += q * np.where(net >= 0, holding_rate * net, -penalty_rate * net)
    return out


def evaluate_ss_exact(
    policy: SsPolicy,
    pmf: Sequence[float],
    setup_cost: float,
    holding_rate: float,
    penalty_rate: float,
) -> float:
    """Exact long-run average cost per period of a stationary (s,S) policy.

    A cycle starts when the level is raised to S and ends the first time the
    pre-order level falls to s or below.  Pre-order levels inside a cycle
    are S minus the cumulative demand, whose visit counts below S - s are
    given by the renewal function; one setup is paid per cycle.
    """
    arr = _validated_pmf(pmf)
    span = policy.order_up_to - policy.reorder_point
    renewal = _renewal_function(arr, span)
    expected_length = float(renewal.sum())
    levels = policy.order_up_to - np.arange(span)
    per_visit = _expected_one_period_cost(levels, arr, holding_rate, penalty_rate)
    expected_cost = float(setup_cost) + float(renewal @ per_visit)
    return expected_cost / expected_length


def default_ss_search_bounds(pmf: Sequence[float], setup_cost: float, holding_rate: float) -> tuple[int, int, int]:
    """(lowest s, highest s, largest S - s) searched by :func:`optimal_ss`.

    Spans five means of reorder-point slack on each side and an economic
    order quantity's worth of spread on top of ten means.
    """
    arr = _validated_pmf(pmf)
    mean = float(np.arange(arr.size) @ arr)
    if not holding_rate > 0:
        raise InvalidInputError("default search bounds need a positive holding rate")
    s_lo = -math.ceil(5 * mean)
    s_hi = math.ceil(5 * mean)
    span_max = math.ceil(10 * mean) + math.ceil(2 * math.sqrt(2 * setup_cost * mean / holding_rate))
    return s_lo, s_hi, max(span_max, 2)


def optimal_ss(
    pmf: Sequence[float],
    setup_cost: float,
    holding_rate: float,
    penalty_rate: float,
    search_bounds: tuple[int, int, int] | None = None,
) -> SsPolicy:
    """Exhaustive exact minimization of the stationary (s,S) average cost.

    ``search_bounds`` is (lowest s, highest s, largest S - s).  Ties resolve
    to the lexicographically smallest (s, S).  An optimum on the boundary of
    the search box raises SearchBoundaryError rather than silently truncate.
    """
    arr = _validated_pmf(pmf)
    if search_bounds is None:
        search_bounds = default_ss_search_bounds(arr, setup_cost, holding_rate)
    s_lo, s_hi, span_max = (int(v) for v in search_bounds)
    if not (s_lo <= s_hi and span_max >= 1):
        raise InvalidInputError("search bounds must satisfy s_lo <= s_hi and span >= 1")

    renewal = _renewal_function(arr, span_max)
    length_prefix = np.cumsum(renewal)  # expected cycle length for span 1..span_max
    level_lo = s_lo + 1
    level_hi = s_hi + span_max
    levels = np.arange(level_lo, level_hi + 1)
    per_visit = _expected_one_period_cost(levels, arr, holding_rate, penalty_rate)

    best_cost = math.inf
    best: tuple[int, int] | None = None
    for order_up_to in range(s_lo + 1, level_hi + 1):
        span_cap = min(span_max, order_up_to - s_lo)
        span_floor = max(1, order_up_to - s_hi)  # keeps s within [s_lo, s_hi]
        if span_floor > span_cap:
            continue
        # g at pre-order levels S, S-1, ..., S-span_cap+1
        top = order_up_to - level_lo
        visits = per_visit[top - span_cap + 1 : top + 1][::-1]
        cycle_costs = setup_cost + np.cumsum(renewal[:span_cap] * visits)
        averages = (cycle_costs / length_prefix[:span_cap])[span_floor - 1 :]
        idx = int(np.argmin(averages))
        cost = float(averages[idx])
        ties = np.flatnonzero(averages == cost)
        span = span_floor + int(ties[-1])  # largest span = smallest s among ties
        s = order_up_to - span
        if cost < best_cost or (cost == best_cost and best is not None and (s, order_up_to) < best):
            best_cost = cost
            best = (s, order_up_to)
    assert best is not None
    s, order_up_to = best
    if s in (s_lo, s_hi) or order_up_to - s == span_max:
        raise SearchBoundaryError(
            f"optimal policy ({s},{order_up_to}) sits on the search boundary "
            f"(s in [{s_lo},{s_hi}], span <= {span_max}); widen the bounds"
        )
    return SsPolicy(s, order_up_to)


@lru_cache(maxsize=None)
def stationary_policy_for_mean(
    mean: float,
    setup_cost: float,
    holding_rate: float,
    penalty_rate: float,
    truncation_quantile: float = DEFAULT_TRUNCATION_QUANTILE,
) -> SsPolicy:
    """Optimal stationary policy for Poisson demand with the given mean, cached."""
    pmf = truncated_poisson_pmf(float(mean), truncation_quantile)
    return optimal_ss(pmf, setup_cost, holding_rate, penalty_rate)


def heuristic_schedule(
    means: Sequence[float],
    setup_cost: float,
    holding_rate: float,
    penalty_rate: float,
) -> PolicySchedule:
    """Per-period (s,S) schedule: each period treated as stationary at its mean."""
    if len(means) == 0:
        raise InvalidInputError("schedule needs at least one period mean")
    return PolicySchedule(
        tuple(
            stationary_policy_for_mean(float(m), float(setup_cost), float(holding_rate), float(penalty_rate))
            for m in means
        )
    )


def simulate_ss_long_run(
    policy: SsPolicy,
    pmf: Sequence[float],
    periods: int,
    seed: int,
    setup_cost: float,
    holding_rate: float,
    penalty_rate: float,
) -> float:
    """Monte Carlo average cost per period; cross-validates evaluate_ss_exact."""
    arr = _validated_pmf(pmf)
    cdf = np.cumsum(arr)
    draws = np.minimum(np.searchsorted(cdf, stream(seed).random(periods), side="left"), arr.size - 1)
    s, order_up_to = policy.reorder_point, policy.order_up_to
    x = order_up_to
    total = 0.0
    for d in draws:
        if x <= s:
            total += setup_cost
            x = order_up_to
        x -= int(d)
        total += holding_rate * x if x >= 0 else -penalty_rate * x
    return total / periods


# ---------------------------------------------------------------------------
# Champion (omega-median) ordering decisions
# ---------------------------------------------------------------------------


def champion_policy_step(
    x_prev: int,
    forecast: DemandModelLike,
    sample_count: int,
    lookahead: int,
    setup_cost: float,
    holding_rate: float,
    penalty_rate: float,
    seed: int,
    seed_key: tuple[int, ...] = (),
    question2: str = "forced",
) -> int:
    """One rolling-horizon order decision by sample-path medians.

    Draws ``sample_count`` lookahead paths, solves each path's planning
    problem, gates on the fraction of strictly positive first orders, and,
    when ordering, returns the median first order of the order-forced
    problems (``question2='forced'``) or of the positive unconstrained
    solutions (``question2='positive'``).  Deterministic per (seed, seed_key).
    """
    if question2 not in QUESTION2_MODES:
        raise InvalidInputError(f"question2 must be one of {QUESTION2_MODES}")
    if sample_count < 1 or lookahead < 1:
        raise InvalidInputError("sample_count and lookahead must be at least 1")
    horizon = min(lookahead, forecast.horizon)
    matrix = demand_matrix(forecast, horizon, sample_count, seed, *seed_key)
    free, forced = first_orders_batch(matrix, x_prev, setup_cost, holding_rate, penalty_rate)
    gate = order_gate(EmpiricalDistribution(tuple(int(v) for v in free)))
    if not gate.place_order:
        return 0
    if question2 == "forced":
        quantity_votes = tuple(int(v) for v in forced)
    else:
        quantity_votes = tuple(int(v) for v in free if v > 0)
    return omega_median(EmpiricalDistribution(quantity_votes)).value


@dataclass(frozen=True)
class ChampionPolicy:
    """Rolling-horizon policy that re-estimates the order median every period."""

    model: DemandModelLike  # per-period forecast for the whole episode
    sample_count: int
    setup_cost: float
    holding_rate: float
    penalty_rate: float
    seed: int
    seed_key: tuple[int, ...] = ()
    lookahead: int | None = None  # None: look ahead to the end of the episode
    question2: str = "forced"

    def __post_init__(self) -> None:
        if self.sample_count < 1:
            raise InvalidInputError("sample_count must be at least 1")
        if self.lookahead is not None and self.lookahead < 1:
            raise InvalidInputError("lookahead must be at least 1")
        if self.question2 not in QUESTION2_MODES:
            raise InvalidInputError(f"question2 must be one of {QUESTION2_MODES}")

    def order_quantity(self, inventory: int, period_index: int) -> int:
        remaining = self.model.horizon - period_index
        if remaining < 1:
            raise InvalidInputError("period index beyond the episode horizon")
        horizon = remaining if self.lookahead is None else min(self.lookahead, remaining)
        forecast = self.model.tail(period_index)
        return champion_policy_step(
            inventory,
            forecast,
            self.sample_count,
            horizon,
            self.setup_cost,
            self.holding_rate,
            self.penalty_rate,
            self.seed,
            (*self.seed_key, STREAM_POLICY, period_index),
            self.question2,
        )
