import itertools
import math

import numpy as np
import pytest

from champion_opt.errors import InvalidInputError, SizeLimitError
from champion_opt.lot_sizing import (
    FirstOrderSolver,
    LotSizingInstance,
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
from champion_opt.sampling import SamplePath

KHP = dict(setup_cost=64.0, holding_rate=1.0, penalty_rate=9.0)


def inst(demands, x0=0, K=64.0, h=1.0, p=9.0):
    return LotSizingInstance(tuple(demands), x0, K, h, p)


def enumerate_two_periods(instance):
    """Independent oracle for N=2: try every feasible (u1, u2) split."""
    need = instance.total_demand - instance.initial_inventory
    best = math.inf
    for u1 in range(need + 1):
        best = min(best, plan_from_orders(instance, [u1, need - u1]).total_cost)
    return best


def random_instance(rng, n_hi=8, d_hi=20, x0_span=10, setups=(0.0, 16.0, 64.0), penalties=(1.0, 9.0)):
    n = int(rng.integers(1, n_hi + 1))
    demands = tuple(int(v) for v in rng.integers(0, d_hi + 1, n))
    x0 = int(rng.integers(-x0_span, x0_span + 1))
    return inst(demands, x0, float(rng.choice(setups)), 1.0, float(rng.choice(penalties)))


def assert_valid_plan(instance, plan):
    x = instance.initial_inventory
    cost = 0.0
    for u, d, level in zip(plan.orders, instance.demands, plan.inventories):
        assert u >= 0
        x = x - d + u
        assert x == level
        cost += instance.holding_rate * max(x, 0) + instance.penalty_rate * max(-x, 0)
        if u > 0:
            cost += instance.setup_cost
    assert math.isclose(cost, plan.total_cost, rel_tol=1e-9, abs_tol=1e-9)
    if plan.feasible:
        assert plan.inventories[-1] == 0


# ---------------------------------------------------------------------------
# single examples
# ---------------------------------------------------------------------------


def test_nothing_to_serve():
    plan = solve(inst([0, 0]))
    assert plan.orders == (0, 0) and plan.total_cost == 0.0


def test_single_period_forced_order():
    plan = solve(inst([10]))
    assert plan.orders == (10,) and plan.total_cost == 64.0


def test_two_periods_one_order_beats_two():
    instance = inst([10, 10])
    plan = solve(instance)
    assert plan.orders == (20, 0)
    assert plan.total_cost == 74.0 == enumerate_two_periods(instance)


def test_backlogging_beats_early_ordering():
    instance = inst([1, 100])
    plan = solve(instance)
    assert plan.orders == (0, 101)
    assert plan.total_cost == 73.0 == enumerate_two_periods(instance)  # K + p*1


def test_zero_demand_single_period():
    assert solve_bruteforce(inst([0])).total_cost == 0.0


def test_cost_of_first_order_examples():
    two = inst([10, 10])
    assert cost_of_first_order(20, two) == 74.0
    assert cost_of_first_order(10, two) == 128.0  # K + residual order of 10
    assert cost_of_first_order(0, inst([0, 0, 0])) == 0.0
    with pytest.raises(InvalidInputError):
        cost_of_first_order(-1, two)


def test_omega_solution_examples():
    assert omega_solution(inst([0, 0, 0])) == 0
    assert omega_solution(inst([10, 10])) == 20
    instance = inst([1, 100])
    # exhaustive scan of u1 >= 1 via cost_of_first_order is the oracle here
    costs = {u: cost_of_first_order(u, instance) for u in range(1, 102)}
    best = min(costs.values())
    oracle = min(u for u, c in costs.items() if c == best)
    forced = omega_solution(instance, force_order=True)
    assert forced == oracle == 1
    assert best == 128.0  # order one unit now, the rest in period 2


def test_first_order_argmin_matches_plan_cost():
    rng = np.random.default_rng(5150)
    for _ in range(60):
        instance = random_instance(rng, n_hi=5, d_hi=10, x0_span=5)
        if not instance.terminal_feasible():
            continue
        hi = instance.total_demand - min(instance.initial_inventory, 0)
        scan = [cost_of_first_order(u, instance) for u in range(hi + 1)]
        assert math.isclose(min(scan), solve(instance).total_cost, rel_tol=1e-9, abs_tol=1e-9)


# ---------------------------------------------------------------------------
# oracle equivalence and plan validity
# ---------------------------------------------------------------------------


def test_oracle_equivalence_random_instances():
    rng = np.random.default_rng(777)
    for _ in range(250):
        instance = random_instance(rng)
        a = solve(instance)
        b = solve_bruteforce(instance)
        assert a.feasible == b.feasible
        assert math.isclose(a.total_cost, b.total_cost, rel_tol=0, abs_tol=1e-9)
        assert_valid_plan(instance, a)
        assert_valid_plan(instance, b)


def test_bruteforce_guard():
    with pytest.raises(SizeLimitError):
        solve_bruteforce(inst([1] * 13))
    with pytest.raises(SizeLimitError):
        solve_bruteforce(inst([60, 60, 60, 60]))


def test_infeasible_stock_above_demand():
    instance = inst([2, 1], x0=9)
    for solver in (solve, solve_bruteforce):
        plan = solver(instance)
        assert not plan.feasible
        assert plan.orders == (0, 0)
        assert plan.total_cost == 7.0 + 6.0  # holding on 9-2 then 9-3
    assert omega_solution(instance) == 0
    assert omega_solution(instance, force_order=True) == 0


def test_negative_initial_inventory_is_backlog():
    instance = inst([5, 5], x0=-3)
    plan = solve(instance)
    assert plan.inventories[-1] == 0
    assert sum(plan.orders) == 13
    assert math.isclose(plan.total_cost, solve_bruteforce(instance).total_cost)


def test_setup_cost_monotonicity():
    rng = np.random.default_rng(31)
    for _ in range(40):
        instance = random_instance(rng, n_hi=6, d_hi=12)
        if not instance.terminal_feasible():
            continue
        bumped = LotSizingInstance(
            instance.demands, instance.initial_inventory,
            instance.setup_cost + 13.0, instance.holding_rate, instance.penalty_rate,
        )
        assert solve(bumped).total_cost >= solve(instance).total_cost - 1e-9


def test_cost_scaling_preserves_plan():
    rng = np.random.default_rng(92)
    for _ in range(40):
        instance = random_instance(rng, n_hi=6, d_hi=12)
        lam = 3.0
        scaled = LotSizingInstance(
            instance.demands, instance.initial_inventory,
            lam * instance.setup_cost, lam * instance.holding_rate, lam * instance.penalty_rate,
        )
        a, b = solve(instance), solve(scaled)
        assert a.orders == b.orders
        assert math.isclose(b.total_cost, lam * a.total_cost, rel_tol=1e-9, abs_tol=1e-9)


# ---------------------------------------------------------------------------
# setup-cost convexity probe
# ---------------------------------------------------------------------------


def test_k_convexity_probe_no_violations():
    rng = np.random.default_rng(4040)
    for _ in range(25):
        instance = random_instance(rng, n_hi=6, d_hi=15, setups=(16.0, 64.0))
        hi = instance.total_demand + 5
        if hi < 4:
            continue
        triples = []
        for _ in range(20):
            u, v, w = sorted(rng.choice(np.arange(1, hi + 1), size=3, replace=False).tolist())
            if u < v < w:
                triples.append((int(u), int(v), int(w)))
        assert k_convexity_probe(instance, triples) == []


def test_k_convexity_probe_rejects_bad_triples():
    with pytest.raises(InvalidInputError):
        k_convexity_probe(inst([5, 5]), [(2, 2, 3)])


def test_equal_spacing_probe_on_linear_region():
    # equally spaced triple on a linear cost stretch holds with slack >= 0
    instance = inst([0, 0, 30], K=64.0)
    assert k_convexity_probe(instance, [(10, 15, 20)]) == []


# ---------------------------------------------------------------------------
# batch solver
# ---------------------------------------------------------------------------


def test_batch_matches_scalar_solutions():
    rng = np.random.default_rng(606)
    for _ in range(120):
        n = int(rng.integers(1, 13))
        m = int(rng.integers(1, 7))
        demands = rng.integers(0, 26, (m, n))
        x0 = int(rng.integers(-15, 16))
        setup = float(rng.choice([0.0, 16.0, 64.0]))
        hold = float(rng.choice([0.0, 1.0, 2.0]))
        pen = float(rng.choice([0.0, 1.0, 9.0]))
        free, forced = first_orders_batch(demands, x0, setup, hold, pen)
        for row in range(m):
            instance = inst(tuple(int(v) for v in demands[row]), x0, setup, hold, pen)
            assert free[row] == omega_solution(instance, False)
            assert forced[row] == omega_solution(instance, True)


def test_first_order_solver_call_and_batch_agree():
    solver = FirstOrderSolver(**KHP, initial_inventory=3, force_order=False)
    forced_solver = FirstOrderSolver(**KHP, initial_inventory=3, force_order=True)
    rng = np.random.default_rng(11)
    paths = [SamplePath(tuple(int(v) for v in rng.integers(0, 30, 6))) for _ in range(40)]
    assert list(solver.solve_paths(paths)) == [solver(p) for p in paths]
    assert list(forced_solver.solve_paths(paths)) == [forced_solver(p) for p in paths]


def test_batch_rejects_bad_input():
    with pytest.raises(InvalidInputError):
        first_orders_batch(np.array([1, 2, 3]), 0, 1.0, 1.0, 1.0)
    with pytest.raises(InvalidInputError):
        first_orders_batch(np.array([[1, -2]]), 0, 1.0, 1.0, 1.0)


# ---------------------------------------------------------------------------
# text records
# ---------------------------------------------------------------------------


def test_instance_text_round_trip():
    instance = inst([3, 0, 17], x0=-2, K=16.0, h=0.5, p=7.25)
    assert parse_instance_text(format_instance_text(instance)) == instance


def test_parse_instance_text_errors():
    with pytest.raises(InvalidInputError):
        parse_instance_text("1 0 1 1 1\n2 3\n")  # wrong count
    with pytest.raises(InvalidInputError):
        parse_instance_text("just one line")
    with pytest.raises(InvalidInputError):
        parse_instance_text("2 0 1 x 1\n1 2\n")


def test_instance_validation():
    with pytest.raises(InvalidInputError):
        LotSizingInstance((), 0, 1, 1, 1)
    with pytest.raises(InvalidInputError):
        LotSizingInstance((1, -1), 0, 1, 1, 1)
    with pytest.raises(InvalidInputError):
        LotSizingInstance((1,), 0, -1, 1, 1)
