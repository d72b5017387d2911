import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from graphot.core import CostMatrix, SolverConfig, uniform_marginal
from graphot.oracle import exact_wd_uniform
from graphot.sinkhorn import ConditioningError, envelope_gradient, solve_wd

CFG = SolverConfig()
TIGHT = SolverConfig(outer_iters=2000)


def test_zero_cost():
    res = solve_wd(np.zeros((2, 2)), uniform_marginal(2), uniform_marginal(2), CFG)
    assert res.distance == 0.0
    np.testing.assert_allclose(res.plan.entries.sum(axis=1), [0.5, 0.5], atol=1e-12)
    np.testing.assert_allclose(res.plan.entries.sum(axis=0), [0.5, 0.5], atol=1e-12)


def test_swap_cost_converges_to_assignment():
    cost = np.array([[0.0, 1.0], [1.0, 0.0]])
    res = solve_wd(cost, uniform_marginal(2), uniform_marginal(2),
                   SolverConfig(beta=0.5, outer_iters=200))
    assert res.distance <= 1e-3
    np.testing.assert_allclose(res.plan.entries, 0.5 * np.eye(2), atol=1e-3)


def test_matches_assignment_oracle(rng):
    for _ in range(10):
        n = int(rng.integers(2, 7))
        cost = rng.random((n, n))
        exact = exact_wd_uniform(cost)
        res = solve_wd(cost, uniform_marginal(n), uniform_marginal(n), TIGHT)
        assert abs(res.distance - exact.distance) <= 1e-3 * exact.distance
        # optimality is one-sided: the iterate can never beat the exact optimum
        assert res.distance >= exact.distance - 1e-9


def test_marginal_feasibility_and_mass(rng):
    for _ in range(10):
        n, m = int(rng.integers(2, 7)), int(rng.integers(2, 7))
        res = solve_wd(rng.random((n, m)), uniform_marginal(n), uniform_marginal(m), CFG)
        assert res.final_marginal_violation <= CFG.marginal_tol
        assert res.plan.max_marginal_violation() <= CFG.marginal_tol
        assert (res.plan.entries >= 0.0).all()
        assert abs(res.plan.entries.sum() - 1.0) <= 1e-9
        assert not res.scaling_clamped


def test_distance_is_frobenius_product(rng):
    n, m = 4, 6
    cost = rng.random((n, m))
    res = solve_wd(cost, uniform_marginal(n), uniform_marginal(m), CFG)
    assert abs(res.distance - float(np.sum(cost * res.plan.entries))) <= 1e-9
    assert res.distance >= 0.0


def test_nonuniform_marginals(rng):
    cost = rng.random((3, 4))
    u = np.array([0.5, 0.3, 0.2])
    v = np.array([0.1, 0.2, 0.3, 0.4])
    res = solve_wd(cost, u, v, CFG)
    np.testing.assert_allclose(res.plan.entries.sum(axis=1), u, atol=1e-6)
    np.testing.assert_allclose(res.plan.entries.sum(axis=0), v, atol=1e-6)


def test_permutation_equivariance(rng):
    n, m = 5, 6
    cost = rng.random((n, m))
    pr, pc = rng.permutation(n), rng.permutation(m)
    base = solve_wd(cost, uniform_marginal(n), uniform_marginal(m), CFG)
    perm = solve_wd(cost[np.ix_(pr, pc)], uniform_marginal(n), uniform_marginal(m), CFG)
    assert abs(base.distance - perm.distance) <= 1e-9
    np.testing.assert_allclose(perm.plan.entries, base.plan.entries[np.ix_(pr, pc)], atol=1e-9)


def test_cost_shift_covariance(rng):
    cost = rng.random((4, 4))
    u = v = uniform_marginal(4)
    base = solve_wd(cost, u, v, CFG)
    shifted = solve_wd(cost + 0.7, u, v, CFG)
    assert abs(shifted.distance - (base.distance + 0.7)) <= 1e-9
    assert np.max(np.abs(shifted.plan.entries - base.plan.entries)) <= 1e-6


@given(seed=st.integers(0, 10_000))
@settings(max_examples=25, deadline=None)
def test_plans_always_feasible_nonnegative(seed):
    rng = np.random.default_rng(seed)
    n, m = int(rng.integers(2, 6)), int(rng.integers(2, 6))
    res = solve_wd(2.0 * rng.random((n, m)), uniform_marginal(n), uniform_marginal(m), CFG)
    assert (res.plan.entries >= 0.0).all()
    assert abs(res.plan.entries.sum() - 1.0) <= 1e-9
    assert res.final_marginal_violation <= 1e-6


def test_early_stop_reports_iterations():
    res = solve_wd(np.zeros((2, 2)), uniform_marginal(2), uniform_marginal(2), CFG)
    assert 1 <= res.outer_iterations_run < CFG.outer_iters


def test_conditioning_error_names_beta():
    cost = np.full((2, 2), 1.0)
    with pytest.raises(ConditioningError, match="beta=1e-300"):
        solve_wd(cost, uniform_marginal(2), uniform_marginal(2), SolverConfig(beta=1e-300))


def test_overflow_reported():
    # negative pseudo-costs can overflow the kernel for tiny beta
    cost = np.array([[-1.0, 0.0], [0.0, -1.0]])
    with pytest.raises(ConditioningError, match="beta"):
        solve_wd(cost, uniform_marginal(2), uniform_marginal(2), SolverConfig(beta=1e-4))


def test_division_clamp_is_flagged():
    # one row of the kernel is subnormal but not exactly zero, so the guard
    # (not the all-zero precheck) has to catch it
    cost = np.array([[500.0, 500.0], [0.0, 0.0]])
    res = solve_wd(cost, uniform_marginal(2), uniform_marginal(2),
                   SolverConfig(beta=1.0, outer_iters=5))
    assert res.scaling_clamped


def test_dimension_mismatch():
    with pytest.raises(ValueError, match="does not match"):
        solve_wd(np.zeros((2, 3)), uniform_marginal(2), uniform_marginal(2), CFG)


def test_accepts_cost_matrix_type(rng):
    cost = rng.random((3, 3))
    a = solve_wd(cost, uniform_marginal(3), uniform_marginal(3), CFG)
    b = solve_wd(CostMatrix(cost), uniform_marginal(3), uniform_marginal(3), CFG)
    assert a.distance == b.distance


class TestEnvelopeGradient:
    def test_returns_plan(self, rng):
        cost = rng.random((3, 4))
        plan = rng.random((3, 4))
        np.testing.assert_array_equal(envelope_gradient(cost, plan), plan)

    def test_finite_difference(self, rng):
        n, m = 4, 5
        cost = rng.random((n, m))
        res = solve_wd(cost, uniform_marginal(n), uniform_marginal(m), CFG)
        frozen = res.plan.entries
        grad = envelope_gradient(cost, frozen)
        eps = 1e-5
        for i, j in [(0, 0), (1, 3), (3, 4)]:
            bumped = cost.copy()
            bumped[i, j] += eps
            fd = (np.sum(bumped * frozen) - np.sum(cost * frozen)) / eps
            assert abs(fd - grad[i, j]) <= 1e-8

    def test_zero_plan_row_gives_zero_gradient_row(self):
        plan = np.array([[0.0, 0.0], [0.5, 0.5]])
        grad = envelope_gradient(np.ones((2, 2)), plan)
        np.testing.assert_array_equal(grad[0], [0.0, 0.0])

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError, match="does not match"):
            envelope_gradient(np.zeros((2, 2)), np.zeros((3, 2)))
