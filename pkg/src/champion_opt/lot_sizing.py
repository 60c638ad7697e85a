"""Exact dynamic lot sizing with fixed setup cost and full backlogging.

The planning problem: given integer demands per period, an initial inventory,
a setup cost per order, and linear holding/backlog rates, choose non-negative
integer orders so that inventory returns to exactly zero after the last
period, minimizing total cost

    sum_i  h*max(x_i, 0) + p*max(-x_i, 0) + K*[u_i > 0],
    x_i = x_{i-1} - d_i + u_i.

``solve`` is a regeneration-interval dynamic program (O(N^2) pairs with an
amortized inner pointer): in an optimal plan each order serves a consecutive
run of demand units, initial stock serves the earliest units, and the best
order period inside a block balances backlog weight before it against holding
weight after it.  ``solve_bruteforce`` is an independent state-space dynamic
program over integer inventory levels used as a correctness oracle.

``first_orders_batch`` runs the same first-order extraction vectorized over a
matrix of demand paths; it exists because the rolling-horizon controller
solves hundreds of thousands of these problems.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import InternalInvariantError, InvalidInputError, SizeLimitError

_COST_TOL = 1e-9


def maintenance_cost(level: int | float, holding_rate: float, penalty_rate: float) -> float:
    """Per-period cost of ending a period at the given net inventory."""
    if level >= 0:
        return holding_rate * level
    return penalty_rate * (-level)


@dataclass(frozen=True)
class LotSizingInstance:
    """One deterministic planning problem (a single demand realization)."""

    demands: tuple[int, ...]
    initial_inventory: int = 0
    setup_cost: float = 0.0
    holding_rate: float = 0.0
    penalty_rate: float = 0.0

    def __post_init__(self) -> None:
        if len(self.demands) == 0:
            raise InvalidInputError("instance needs at least one period")
        for d in self.demands:
            if not isinstance(d, (int, np.integer)) or isinstance(d, bool):
                raise InvalidInputError("demands must be integers")
            if d < 0:
                raise InvalidInputError("demands must be non-negative")
        if not isinstance(self.initial_inventory, (int, np.integer)):
            raise InvalidInputError("initial inventory must be an integer")
        if self.setup_cost < 0 or self.holding_rate < 0 or self.penalty_rate < 0:
            raise InvalidInputError("cost parameters must be non-negative")
        object.__setattr__(self, "demands", tuple(int(d) for d in self.demands))
        object.__setattr__(self, "initial_inventory", int(self.initial_inventory))

    @property
    def periods(self) -> int:
        return len(self.demands)

    @property
    def total_demand(self) -> int:
        return sum(self.demands)

    def terminal_feasible(self) -> bool:
        """Zero terminal inventory is reachable iff stock cannot exceed demand."""
        return self.initial_inventory <= self.total_demand


@dataclass(frozen=True)
class LotSizingPlan:
    orders: tuple[int, ...]
    inventories: tuple[int, ...]
    total_cost: float
    feasible: bool = True


def plan_from_orders(instance: LotSizingInstance, orders: Sequence[int], feasible: bool = True) -> LotSizingPlan:
    """Build a plan from an order vector, recomputing trajectory and cost."""
    if len(orders) != instance.periods:
        raise InvalidInputError("order vector length must match the horizon")
    h, p, K = instance.holding_rate, instance.penalty_rate, instance.setup_cost
    x = instance.initial_inventory
    inventories = []
    cost = 0.0
    for u, d in zip(orders, instance.demands):
        if u < 0:
            raise InvalidInputError("orders must be non-negative")
        x = x - d + u
        inventories.append(x)
        cost += maintenance_cost(x, h, p)
        if u > 0:
            cost += K
    return LotSizingPlan(tuple(int(u) for u in orders), tuple(inventories), cost, feasible)


def _degenerate_plan(instance: LotSizingInstance) -> LotSizingPlan:
    """No-order plan with holding costs, flagged infeasible (stock > demand)."""
    return plan_from_orders(instance, [0] * instance.periods, feasible=False)


# ---------------------------------------------------------------------------
# Scalar regeneration-interval solver
# ---------------------------------------------------------------------------


def _normalized_demands(instance: LotSizingInstance) -> tuple[list[int], int]:
    """Fold negative initial inventory into first-period demand."""
    d = list(instance.demands)
    x0 = instance.initial_inventory
    if x0 < 0:
        d[0] += -x0
        x0 = 0
    return d, x0


def _residual_demands(d: Sequence[int], x0: int) -> list[int]:
    """Demands left after initial stock serves the earliest units."""
    e = []
    served = x0
    for di in d:
        use = min(served, di)
        e.append(di - use)
        served -= use
    return e


def _prefix_arrays(e: Sequence[int]) -> tuple[list[int], list[int]]:
    """P0[k] = sum(e[:k]); P1[k] = sum(i*e[i] for i < k)."""
    n = len(e)
    P0 = [0] * (n + 1)
    P1 = [0] * (n + 1)
    for i, w in enumerate(e):
        P0[i + 1] = P0[i] + w
        P1[i + 1] = P1[i] + i * w
    return P0, P1


def _suffix_table(
    e: Sequence[int], P0: Sequence[int], P1: Sequence[int], K: float, h: float, p: float
) -> tuple[list[float], list[tuple[int, int | None]]]:
    """suf[j] = optimal cost of serving e[j:] with orders at indices >= j.

    choice[j] holds the first block (l, order index) of a canonical optimal
    decomposition: smallest block end, then smallest order index.
    """
    n = len(e)
    suf: list[float] = [0.0] * (n + 1)
    choice: list[tuple[int, int | None]] = [(0, None)] * n
    for j in range(n - 1, -1, -1):
        best = math.inf
        best_l = j
        best_t: int | None = None
        t = j
        for l in range(j, n):
            block = P0[l + 1] - P0[j]
            if block == 0:
                cost = 0.0
                order_at: int | None = None
            else:
                # move the order later while backlog weight has not caught up
                while t < l and p * (P0[t + 1] - P0[j]) - h * (P0[l + 1] - P0[t + 1]) < 0:
                    t += 1
                back = t * (P0[t] - P0[j]) - (P1[t] - P1[j])
                hold = (P1[l + 1] - P1[t + 1]) - t * (P0[l + 1] - P0[t + 1])
                cost = K + p * back + h * hold
                order_at = t
            value = cost + suf[l + 1]
            if value < best:
                best = value
                best_l = l
                best_t = order_at
        suf[j] = best
        choice[j] = (best_l, best_t)
    return suf, choice


def _first_block_scan(
    e: Sequence[int],
    P0: Sequence[int],
    P1: Sequence[int],
    suf: Sequence[float],
    j0: int,
    q: int,
    tmin: int,
    K: float,
    h: float,
    p: float,
) -> tuple[float, int, int | None]:
    """Best first block [j0, l] with the weight at j0 replaced by q.

    Order positions are restricted to [max(j0, tmin), l]; positions left of
    the block are dominated.  Returns (value incl. suffix, l, order index).
    """
    n = len(e)
    best = math.inf
    best_l = j0
    best_t: int | None = None
    t = max(j0, tmin)
    for l in range(j0, n):
        block = q + (P0[l + 1] - P0[j0 + 1])
        if block == 0:
            value = suf[l + 1]
            order_at: int | None = None
        elif t > l:
            continue
        else:
            while t < l and p * (q + P0[t + 1] - P0[j0 + 1]) - h * (P0[l + 1] - P0[t + 1]) < 0:
                t += 1
            back = (t - j0) * q + (t * (P0[t] - P0[j0 + 1]) - (P1[t] - P1[j0 + 1]))
            hold = (P1[l + 1] - P1[t + 1]) - t * (P0[l + 1] - P0[t + 1])
            value = K + p * back + h * hold + suf[l + 1]
            order_at = t
        if value < best:
            best = value
            best_l = l
            best_t = order_at
    return best, best_l, best_t


@dataclass(frozen=True)
class _Candidate:
    first_order: int
    value: float
    block_end: int
    order_at: int | None
    residual_from_scan: bool  # True when (block_end, order_at) came from a modified scan


def _candidates(instance: LotSizingInstance):
    """Shared machinery for solve/omega_solution.

    Returns (e, P0, P1, suf, choice, stock_cost, zero_candidate, forced)
    where ``forced`` lists candidates with a period-1 order, ordered so that
    scanning with strict improvement yields the smallest first order on ties.
    """
    d, x0 = _normalized_demands(instance)
    e = _residual_demands(d, x0)
    h, p, K = instance.holding_rate, instance.penalty_rate, instance.setup_cost
    stock_cost = h * sum((di - ei) * i for i, (di, ei) in enumerate(zip(d, e)))
    P0, P1 = _prefix_arrays(e)
    suf, choice = _suffix_table(e, P0, P1, K, h, p)
    n = len(e)
    total = P0[n]
    if total == 0:
        return e, P0, P1, suf, choice, stock_cost, None, []

    j0 = next(i for i, w in enumerate(e) if w > 0)

    # First order of zero: everything served by orders from period 2 on.
    v0, l0, t0 = _first_block_scan(e, P0, P1, suf, j0, e[j0], 1, K, h, p)
    zero_candidate = _Candidate(0, v0, l0, t0, True)

    forced: list[_Candidate] = []
    # Minimal positive order: one unit, the rest re-optimized from period 2 on.
    v1, l1, t1 = _first_block_scan(e, P0, P1, suf, j0, e[j0] - 1, 1, K, h, p)
    if math.isfinite(v1):
        forced.append(_Candidate(1, K + h * j0 + v1, l1, t1, True))
    # Orders covering residual demand exactly through period l.
    for l in range(n):
        u1 = P0[l + 1]
        if u1 < 1:
            continue
        value = K + h * P1[l + 1] + suf[l + 1]
        forced.append(_Candidate(u1, value, l, None, False))
    return e, P0, P1, suf, choice, stock_cost, zero_candidate, forced


def _best_forced(forced: Sequence[_Candidate]) -> _Candidate:
    best = forced[0]
    for cand in forced[1:]:
        if cand.value < best.value or (cand.value == best.value and cand.first_order < best.first_order):
            best = cand
    return best


def _orders_from_candidate(
    cand: _Candidate,
    e: Sequence[int],
    P0: Sequence[int],
    choice: Sequence[tuple[int, int | None]],
) -> list[int]:
    n = len(e)
    orders = [0] * n
    if cand.residual_from_scan:
        # zero or unit first order; scan supplied the first residual block
        if cand.first_order == 1:
            orders[0] = 1
        removed = cand.first_order  # units already served by the period-1 order
        if cand.order_at is not None:
            j0 = next(i for i, w in enumerate(e) if w > 0)
            orders[cand.order_at] = (P0[cand.block_end + 1] - P0[j0]) - removed
        start = cand.block_end + 1
    else:
        orders[0] = cand.first_order
        start = cand.block_end + 1
    j = start
    while j < n:
        l, t = choice[j]
        if t is not None:
            orders[t] = P0[l + 1] - P0[j]
        j = l + 1
    return orders


def solve(instance: LotSizingInstance) -> LotSizingPlan:
    """Cost-minimal plan under the zero-terminal-inventory constraint.

    Ties between optimal plans resolve toward the smallest first-period
    order, then toward shorter blocks with earlier order placements.  When
    initial stock exceeds total demand the zero-terminal constraint cannot
    hold; the no-order plan is returned with ``feasible=False``.
    """
    if not instance.terminal_feasible():
        return _degenerate_plan(instance)
    e, P0, P1, suf, choice, stock_cost, zero_cand, forced = _candidates(instance)
    n = len(e)
    if zero_cand is None:  # stock covers everything exactly
        plan = plan_from_orders(instance, [0] * n)
        _check_cost(plan.total_cost, stock_cost)
        return plan
    best = zero_cand
    if forced:
        forced_best = _best_forced(forced)
        if forced_best.value < best.value:
            best = forced_best
    if not math.isfinite(best.value):
        raise InternalInvariantError("no feasible plan found for a feasible instance")
    orders = _orders_from_candidate(best, e, P0, choice)
    plan = plan_from_orders(instance, orders)
    _check_cost(plan.total_cost, stock_cost + best.value)
    if plan.inventories[-1] != 0:
        raise InternalInvariantError("plan does not end at zero inventory")
    return plan


def _check_cost(actual: float, expected: float) -> None:
    if not math.isclose(actual, expected, rel_tol=_COST_TOL, abs_tol=_COST_TOL):
        raise InternalInvariantError(
            f"trajectory cost {actual!r} disagrees with dynamic program value {expected!r}"
        )


def omega_solution(instance: LotSizingInstance, force_order: bool = False) -> int:
    """First-period order of an optimal plan for this demand realization.

    With ``force_order`` the first-period order must be at least one unit
    (the plan pays its setup); ties among optimal order quantities resolve
    to the smallest.  Instances whose stock exceeds total demand return 0.
    """
    if not instance.terminal_feasible():
        return 0
    if not force_order:
        return solve(instance).orders[0]
    _, _, _, _, _, _, zero_cand, forced = _candidates(instance)
    if zero_cand is None or not forced:
        return 0
    best = _best_forced(forced)
    if not math.isfinite(best.value):
        return 0
    return best.first_order


def cost_of_first_order(first_order: int, instance: LotSizingInstance) -> float:
    """Total cost when the first order is pinned and the rest re-optimized.

    Equals H(x1) + setup + optimal residual cost over periods 2..N with the
    zero-terminal constraint.  Returns ``inf`` when no residual completion
    can reach zero terminal inventory (over-ordering; one-period horizons).
    """
    if not isinstance(first_order, (int, np.integer)) or isinstance(first_order, bool):
        raise InvalidInputError("first order must be an integer")
    if first_order < 0:
        raise InvalidInputError("first order must be non-negative")
    h, p, K = instance.holding_rate, instance.penalty_rate, instance.setup_cost
    x1 = instance.initial_inventory - instance.demands[0] + int(first_order)
    cost = maintenance_cost(x1, h, p) + (K if first_order > 0 else 0.0)
    rest = instance.demands[1:]
    if not rest:
        return cost if x1 == 0 else math.inf
    if x1 > sum(rest):
        return math.inf
    residual = LotSizingInstance(rest, x1, K, h, p)
    return cost + solve(residual).total_cost


def k_convexity_probe(
    instance: LotSizingInstance, triples: Iterable[tuple[int, int, int]], tolerance: float = _COST_TOL
) -> list[tuple[int, int, int]]:
    """Triples (u < u' < u'') violating the setup-cost convexity inequality

        K + J(u'') >= J(u') + ((u''-u')/(u'-u)) * (J(u') - J(u))

    where J is ``cost_of_first_order``.  An empty list means no violations.
    Points with no feasible completion (J = inf) satisfy the inequality
    vacuously, since infeasibility only occurs from over-ordering upward.
    """
    violations = []
    cache: dict[int, float] = {}

    def j_of(u: int) -> float:
        if u not in cache:
            cache[u] = cost_of_first_order(u, instance)
        return cache[u]

    for u, u_mid, u_hi in triples:
        if not 0 < u < u_mid < u_hi:
            raise InvalidInputError("probe triples must satisfy 0 < u < u' < u''")
        j_hi = j_of(u_hi)
        if math.isinf(j_hi):
            continue
        lhs = instance.setup_cost + j_hi
        slope = (u_hi - u_mid) / (u_mid - u)
        rhs = j_of(u_mid) + slope * (j_of(u_mid) - j_of(u))
        if lhs < rhs - tolerance:
            violations.append((u, u_mid, u_hi))
    return violations


# ---------------------------------------------------------------------------
# Brute-force oracle: state-space DP over integer inventory levels
# ---------------------------------------------------------------------------

BRUTEFORCE_MAX_PERIODS = 12
BRUTEFORCE_MAX_DEMAND = 200


def solve_bruteforce(instance: LotSizingInstance) -> LotSizingPlan:
    """Exact optimum by dynamic programming over integer inventory levels.

    Deliberately independent of ``solve``: no block structure is assumed.
    Guarded to small instances; use only for validation.
    """
    N = instance.periods
    total = instance.total_demand
    if N > BRUTEFORCE_MAX_PERIODS or total > BRUTEFORCE_MAX_DEMAND:
        raise SizeLimitError(
            f"brute force limited to {BRUTEFORCE_MAX_PERIODS} periods and total demand {BRUTEFORCE_MAX_DEMAND}"
        )
    if not instance.terminal_feasible():
        return _degenerate_plan(instance)

    x0 = instance.initial_inventory
    h, p, K = instance.holding_rate, instance.penalty_rate, instance.setup_cost
    lo = min(0, x0) - total
    hi = max(0, x0) + total
    size = hi - lo + 1
    levels = np.arange(lo, hi + 1)
    hcost = np.where(levels >= 0, h * levels, -p * levels).astype(np.float64)

    value = np.full(size, np.inf)
    value[-lo] = 0.0  # terminal inventory must be exactly zero
    suffix_min: list[np.ndarray] = []
    suffix_arg: list[np.ndarray] = []
    reach_cost: list[np.ndarray] = []
    for d in reversed(instance.demands):
        reach = hcost + value  # cost of ending a period at each level
        smin = np.empty(size + 1)
        sarg = np.empty(size + 1, dtype=np.int64)
        smin[size] = np.inf
        sarg[size] = size
        for k in range(size - 1, -1, -1):
            if reach[k] <= smin[k + 1]:
                smin[k] = reach[k]
                sarg[k] = k
            else:
                smin[k] = smin[k + 1]
                sarg[k] = sarg[k + 1]
        new_value = np.full(size, np.inf)
        # no order: end level = start - d (below the grid is unreachable)
        new_value[d:] = reach[: size - d]
        # order: end level strictly above start - d
        ordered = np.empty(size)
        ordered[:d] = K + smin[0]
        ordered[d:] = K + smin[1 : size - d + 1]
        np.minimum(new_value, ordered, out=new_value)
        value = new_value
        suffix_min.append(smin)
        suffix_arg.append(sarg)
        reach_cost.append(reach)
    suffix_min.reverse()
    suffix_arg.reverse()
    reach_cost.reverse()

    start = x0 - lo
    total_cost = value[start]
    if not math.isfinite(total_cost):
        raise InternalInvariantError("brute force found no plan for a feasible instance")

    orders = []
    k = start
    for i, d in enumerate(instance.demands):
        reach = reach_cost[i]
        base = k - d
        no_order = reach[base] if base >= 0 else math.inf
        y_from = max(base + 1, 0)
        with_order = K + suffix_min[i][y_from]
        if no_order <= with_order:
            orders.append(0)
            k = base
        else:
            nxt = int(suffix_arg[i][y_from])
            orders.append(nxt - base)
            k = nxt
    plan = plan_from_orders(instance, orders)
    _check_cost(plan.total_cost, float(total_cost))
    return plan


# ---------------------------------------------------------------------------
# Batched first-order extraction (vectorized over demand paths)
# ---------------------------------------------------------------------------


def first_orders_batch(
    demands: np.ndarray,
    initial_inventory: int,
    setup_cost: float,
    holding_rate: float,
    penalty_rate: float,
) -> tuple[np.ndarray, np.ndarray]:
    """First-period orders for every row of a demand matrix.

    Returns ``(free, forced)``: the first order of an optimal plan, and the
    optimal first order when a period-1 order is mandatory.  Rows whose
    initial stock exceeds total demand yield 0 in both outputs.  Must agree
    exactly with ``omega_solution`` row by row; tests enforce this.
    """
    D = np.array(demands, dtype=np.int64)
    if D.ndim != 2:
        raise InvalidInputError("demand matrix must be 2-dimensional")
    if (D < 0).any():
        raise InvalidInputError("demands must be non-negative")
    M, N = D.shape
    x0 = int(initial_inventory)
    if x0 < 0:
        D[:, 0] += -x0
        x0 = 0
    K = float(setup_cost)
    h = float(holding_rate)
    p = float(penalty_rate)

    cum = np.cumsum(D, axis=1)
    E = np.maximum(cum - x0, 0)  # residual units through each period
    P0 = np.zeros((M, N + 1), dtype=np.int64)
    P0[:, 1:] = E
    e = np.diff(P0, axis=1)
    P1 = np.zeros((M, N + 1), dtype=np.int64)
    P1[:, 1:] = np.cumsum(np.arange(N, dtype=np.int64)[None, :] * e, axis=1)
    total = P0[:, N]
    rows = np.arange(M)
    row_off = rows * (N + 1)
    P0f = P0.ravel()
    P1f = P1.ravel()

    # suffix values: suf[:, j] = optimal cost of e[:, j:] with orders >= j
    suf = np.zeros((M, N + 1), dtype=np.float64)
    for j in range(N - 1, -1, -1):
        P0j = P0[:, j]
        P1j = P1[:, j]
        t = np.full(M, j, dtype=np.int64)
        best = np.full(M, np.inf)
        for l in range(j, N):
            P0l1 = P0[:, l + 1]
            block = P0l1 - P0j
            P0t1 = P0f.take(row_off + t + 1)
            while True:
                movable = t < l
                if not movable.any():
                    break
                move = movable & (p * (P0t1 - P0j) - h * (P0l1 - P0t1) < 0)
                if not move.any():
                    break
                t[move] += 1
                P0t1 = P0f.take(row_off + t + 1)
            P0t = P0f.take(row_off + t)
            back = t * (P0t - P0j) - (P1f.take(row_off + t) - P1j)
            hold = (P1[:, l + 1] - P1f.take(row_off + t + 1)) - t * (P0l1 - P0t1)
            cost = np.where(block == 0, 0.0, K + p * back + h * hold)
            np.minimum(best, cost + suf[:, l + 1], out=best)
        suf[:, j] = best

    j0 = np.argmax(E >= 1, axis=1)  # first period with residual demand
    e_at_j0 = e[rows, j0]

    def first_block_scan(q: np.ndarray, tmin: np.ndarray) -> np.ndarray:
        best = np.full(M, np.inf)
        t = np.maximum(j0, tmin)
        P0j1 = P0f.take(row_off + j0 + 1)
        P1j1 = P1f.take(row_off + j0 + 1)
        for l in range(N):
            active = j0 <= l
            if not active.any():
                continue
            P0l1 = P0[:, l + 1]
            block = q + P0l1 - P0j1
            zero = active & (block == 0)
            if zero.any():
                best = np.where(zero, np.minimum(best, suf[:, l + 1]), best)
            pos = active & (block > 0) & (t <= l)
            if not pos.any():
                continue
            P0t1 = P0f.take(row_off + t + 1)
            while True:
                movable = pos & (t < l)
                if not movable.any():
                    break
                move = movable & (p * (q + P0t1 - P0j1) - h * (P0l1 - P0t1) < 0)
                if not move.any():
                    break
                t[move] += 1
                P0t1 = P0f.take(row_off + t + 1)
            P0t = P0f.take(row_off + t)
            back = (t - j0) * q + (t * (P0t - P0j1) - (P1f.take(row_off + t) - P1j1))
            hold = (P1[:, l + 1] - P1f.take(row_off + t + 1)) - t * (P0l1 - P0t1)
            value = K + p * back + h * hold + suf[:, l + 1]
            best = np.where(pos, np.minimum(best, value), best)
        return best

    ones = np.ones(M, dtype=np.int64)
    tmin = np.maximum(j0, ones)
    v_zero = first_block_scan(e_at_j0, tmin)
    v_unit = K + h * j0 + first_block_scan(e_at_j0 - 1, tmin)

    big = np.int64(1) << 60
    v_cover = K + h * P1[:, 1:].astype(np.float64) + suf[:, 1:]
    u_cover = P0[:, 1:]
    v_cover = np.where(u_cover >= 1, v_cover, np.inf)

    v_all = np.concatenate([v_unit[:, None], v_cover], axis=1)
    u_all = np.concatenate([ones[:, None], u_cover], axis=1)
    u_all = np.where(np.isfinite(v_all), u_all, big)
    v_star = v_all.min(axis=1)
    forced = np.where(v_all == v_star[:, None], u_all, big).min(axis=1)

    free = np.where(v_zero <= v_star, 0, forced)
    degenerate = total == 0
    free = np.where(degenerate, 0, free).astype(np.int64)
    forced = np.where(degenerate | ~np.isfinite(v_star), 0, forced).astype(np.int64)
    return free, forced


@dataclass(frozen=True)
class FirstOrderSolver:
    """Omega-problem solver handle: demand path -> first-period order.

    Stateless and safe for concurrent use; exposes ``solve_paths`` so the
    median engine can run the vectorized batch implementation.  Per-path
    calls and the batch must agree exactly (tests enforce it).
    """

    setup_cost: float
    holding_rate: float
    penalty_rate: float
    initial_inventory: int = 0
    force_order: bool = False

    def _instance(self, demands: Sequence[int]) -> LotSizingInstance:
        return LotSizingInstance(
            tuple(int(d) for d in demands),
            self.initial_inventory,
            self.setup_cost,
            self.holding_rate,
            self.penalty_rate,
        )

    def __call__(self, path) -> int:
        demands = getattr(path, "demands", path)
        return omega_solution(self._instance(demands), self.force_order)

    def solve_paths(self, paths) -> np.ndarray:
        matrix = np.array([getattr(p, "demands", p) for p in paths], dtype=np.int64)
        free, forced = first_orders_batch(
            matrix, self.initial_inventory, self.setup_cost, self.holding_rate, self.penalty_rate
        )
        return forced if self.force_order else free


# ---------------------------------------------------------------------------
# Plain-text instance records
# ---------------------------------------------------------------------------


def format_instance_text(instance: LotSizingInstance) -> str:
    """Two-line record: header ``N x0 K h p`` then the demand list."""
    head = (
        f"{instance.periods} {instance.initial_inventory} "
        f"{instance.setup_cost!r} {instance.holding_rate!r} {instance.penalty_rate!r}"
    )
    body = " ".join(str(d) for d in instance.demands)
    return head + "\n" + body + "\n"


def parse_instance_text(text: str) -> LotSizingInstance:
    """Inverse of :func:`format_instance_text`."""
    tokens_by_line = [line.split() for line in text.strip().splitlines() if line.strip()]
    if len(tokens_by_line) != 2:
        raise InvalidInputError("instance record must have a header line and a demand line")
    head, body = tokens_by_line
    if len(head) != 5:
        raise InvalidInputError("header must be: periods x0 setup holding penalty")
    try:
        n = int(head[0])
        x0 = int(head[1])
        setup, holding, penalty = (float(v) for v in head[2:])
        demands = tuple(int(v) for v in body)
    except ValueError as exc:
        raise InvalidInputError(f"malformed instance record: {exc}") from exc
    if len(demands) != n:
        raise InvalidInputError(f"header promises {n} demands, record has {len(demands)}")
    return LotSizingInstance(demands, x0, setup, holding, penalty)
