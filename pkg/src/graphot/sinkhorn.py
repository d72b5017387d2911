"""Wasserstein-distance solver: proximal-point outer loop with Sinkhorn inner sweeps.

Each outer step reweights the kernel exp(-C/beta) by the current plan and
rescales it onto the prescribed marginals (IPOT-style inexact proximal point),
so the iterates converge to the *unregularized* optimum rather than the
entropic one. Single-threaded, fixed reduction order: every inner sweep is two
dense matrix-vector products evaluated left to right, which makes repeated
runs bit-stable.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (
    MarginalWeights,
    SolverConfig,
    TransportPlan,
    _marginal_violation,
    as_matrix,
    as_weights,
)

# Denominator floor for the diagonal scaling steps; hitting it is recorded on
# the result instead of silently dividing by an underflowed zero.
DIVISION_FLOOR = 1e-30


class ConditioningError(RuntimeError):
    """The scaling kernel exp(-C/beta) degenerated for the given cost scale."""


@dataclass(frozen=True, eq=False)
class WdResult:
    """Converged plan plus the transport cost <C, T> and convergence telemetry."""

    plan: TransportPlan
    distance: float
    outer_iterations_run: int
    final_marginal_violation: float
    scaling_clamped: bool = False


def solve_wd(cost, u, v, config: SolverConfig) -> WdResult:
    """Solve the discrete optimal transport problem min_{T in Pi(u, v)} <C, T>.

    Parameters
    ----------
    cost : CostMatrix or array-like of shape (n, m)
        Ground cost. Plain arrays may carry negative entries (used for the
        structure-matching pseudo-costs, which are linearizations rather than
        metric costs).
    u, v : MarginalWeights or array-like
        Row and column marginals of length n and m.
    config : SolverConfig
        beta, inner_iters (Sinkhorn sweeps per proximal step), outer_iters and
        convergence_tol are used here. The loop stops early once the max-abs
        plan change drops below convergence_tol *and* the marginals are met
        within marginal_tol; plan change alone can go quiet while the iterate
        is still infeasible.

    Returns
    -------
    WdResult
        Plan with marginals enforced to within the reported violation, the
        distance sum(C * T), and the number of outer iterations run.

    Raises
    ------
    ConditioningError
        If exp(-C/beta) overflows or underflows to an all-zero row/column,
        which makes the marginals unreachable; pick a larger beta.
    """
    c = as_matrix(cost)
    uw = as_weights(u)
    vw = as_weights(v)
    if c.ndim != 2:
        raise ValueError(f"cost must be 2-d, got shape {c.shape}")
    if c.shape != (uw.size, vw.size):
        raise ValueError(f"cost shape {c.shape} does not match marginals ({uw.size}, {vw.size})")

    plan, iters, clamped = _proximal_plan(c, uw, vw, config)
    distance = float(np.sum(c * plan))
    violation = _marginal_violation(plan, uw, vw)
    wrapped = TransportPlan(
        plan,
        MarginalWeights(uw),
        MarginalWeights(vw),
        marginal_tol=max(config.marginal_tol, violation * (1.0 + 1e-12) + 1e-15),
    )
    return WdResult(wrapped, distance, iters, violation, clamped)


def _proximal_plan(c, u, v, config):
    """Core scaling loop on plain arrays; returns (plan, outer_iters_run, clamped)."""
    with np.errstate(over="ignore", under="ignore"):
        kernel = np.exp(-c / config.beta)
    if not np.isfinite(kernel).all():
        raise ConditioningError(
            f"exp(-cost/beta) overflowed with beta={config.beta!r}; increase beta"
        )
    if (kernel.sum(axis=1) == 0.0).any() or (kernel.sum(axis=0) == 0.0).any():
        raise ConditioningError(
            f"exp(-cost/beta) underflowed to an all-zero row or column with "
            f"beta={config.beta!r}; increase beta"
        )

    plan = np.ones_like(kernel)
    sigma = v.copy()
    clamped = False
    iters = 0
    for _ in range(config.outer_iters):
        q = kernel * plan
        for _ in range(config.inner_iters):
            row_mass = q @ sigma
            if (row_mass < DIVISION_FLOOR).any():
                clamped = True
                row_mass = np.maximum(row_mass, DIVISION_FLOOR)
            delta = u / row_mass
            col_mass = q.T @ delta
            if (col_mass < DIVISION_FLOOR).any():
                clamped = True
                col_mass = np.maximum(col_mass, DIVISION_FLOOR)
            sigma = v / col_mass
        new_plan = delta[:, None] * q * sigma[None, :]
        change = float(np.max(np.abs(new_plan - plan)))
        plan = new_plan
        iters += 1
        # a near-stationary iterate can still sit outside the marginal
        # tolerance (slow contraction near ties), so the early stop is only
        # accepted once the plan is feasible
        if change < config.convergence_tol and _marginal_violation(plan, u, v) <= config.marginal_tol:
            break
    return plan, iters, clamped


def envelope_gradient(cost, plan) -> np.ndarray:
    """Gradient of the transport cost <C, T> with respect to C at a fixed plan.

    The objective is linear in C once T is frozen, so the gradient is the plan
    itself. Downstream training code should differentiate through the cost
    only and treat the solved plan as a constant; no backward pass through the
    scaling iterations is ever needed.
    """
    c = as_matrix(cost)
    t = as_matrix(plan)
    if c.shape != t.shape:
        raise ValueError(f"cost shape {c.shape} does not match plan shape {t.shape}")
    return t.copy()
