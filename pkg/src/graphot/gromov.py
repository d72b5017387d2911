"""Gromov-Wasserstein solver: repeated linearization around the current plan.

The squared-difference structure objective

    sum_{i,i',j,j'} T_ij T_i'j' (cx_ii' - cy_jj')^2

is minimized by alternating two steps: rebuild the pseudo-cost matrix (the
linearization of the quadratic objective at the current plan) and hand it to
the Wasserstein solver for a fresh plan. The quadratic is non-convex, so the
returned plan is a local solution; tests assert certificates (exact zeros on
permuted copies, monotone descent) rather than global optimality.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (
    MarginalWeights,
    SimilarityMatrix,
    SolverConfig,
    TransportPlan,
    _marginal_violation,
    as_matrix,
    as_weights,
)
from .sinkhorn import solve_wd

SYMMETRY_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class GwdResult:
    """Converged plan, the structure distance, and the per-step objective trace."""

    plan: TransportPlan
    distance: float
    outer_iterations_run: int
    objective_trace: tuple[float, ...]


def gw_constant_term(cx, cy, p, q) -> np.ndarray:
    """Plan-independent part of the squared-loss expansion of the structure objective.

    Entry (i, j) is sum_k cx_ik^2 p_k + sum_l cy_jl^2 q_l, with the squares
    taken entrywise.
    """
    cxa, cya = as_matrix(cx), as_matrix(cy)
    pw, qw = as_weights(p), as_weights(q)
    _check_square(cxa, "cx")
    _check_square(cya, "cy")
    if cxa.shape[0] != pw.size or cya.shape[0] != qw.size:
        raise ValueError(
            f"marginal lengths ({pw.size}, {qw.size}) do not match similarity sizes "
            f"({cxa.shape[0]}, {cya.shape[0]})"
        )
    return ((cxa * cxa) @ pw)[:, None] + ((cya * cya) @ qw)[None, :]


def gw_pseudo_cost(c_const, cx, cy, plan) -> np.ndarray:
    """Linearization of the structure objective at the given plan.

    Returns c_const - 2 * cx @ plan @ cy.T; entries may be negative, which is
    fine because this is a linearization, not a metric cost.
    """
    const = as_matrix(c_const)
    cxa, cya = as_matrix(cx), as_matrix(cy)
    t = as_matrix(plan)
    if t.shape != (cxa.shape[0], cya.shape[0]) or const.shape != t.shape:
        raise ValueError(
            f"shapes do not conform: c_const {const.shape}, cx {cxa.shape}, "
            f"cy {cya.shape}, plan {t.shape}"
        )
    return const - 2.0 * (cxa @ t @ cya.T)


def solve_gwd(cx, cy, p, q, config: SolverConfig) -> GwdResult:
    """Solve the structure-matching problem between two intra-domain similarity matrices.

    Parameters
    ----------
    cx, cy : SimilarityMatrix or symmetric array-like, shapes (n, n) and (m, m)
        Intra-domain similarities; raw or thresholded matrices both work.
    p, q : MarginalWeights or array-like
        Marginals over the two node sets.
    config : SolverConfig
        outer_iters bounds the linearization loop; the inner Wasserstein solve
        inherits the full config (same beta and inner_iters).

    Returns
    -------
    GwdResult
        distance is the structure objective re-evaluated at the final plan,
        so it is recomputable as sum(pseudo_cost(final_plan) * final_plan).
    """
    cxa = _symmetric_entries(cx, "cx")
    cya = _symmetric_entries(cy, "cy")
    pw, qw = as_weights(p), as_weights(q)
    plan, distance, iters, trace = _linearized_solve(cxa, cya, pw, qw, config)
    violation = _marginal_violation(plan, pw, qw)
    wrapped = TransportPlan(
        plan,
        MarginalWeights(pw),
        MarginalWeights(qw),
        marginal_tol=max(config.marginal_tol, violation * (1.0 + 1e-12) + 1e-15),
    )
    return GwdResult(wrapped, distance, iters, trace)


def _linearized_solve(cxa, cya, pw, qw, config, mix=None):
    """Alternate pseudo-cost linearization with Wasserstein inner solves.

    mix, when given, maps the current pseudo-cost to the cost actually handed
    to the inner solver (used to blend in a fixed node cost); the reported
    objective goes through the same map so the trace matches what the solver
    minimized. Starts from the independent coupling p q^T.
    """
    c_const = gw_constant_term(cxa, cya, pw, qw)
    plan = np.outer(pw, qw)
    trace: list[float] = []
    iters = 0
    for _ in range(config.outer_iters):
        cost = gw_pseudo_cost(c_const, cxa, cya, plan)
        if mix is not None:
            cost = mix(cost)
        inner = solve_wd(cost, pw, qw, config)
        new_plan = inner.plan.entries
        change = float(np.max(np.abs(new_plan - plan)))
        plan = new_plan
        iters += 1
        cost_at_plan = gw_pseudo_cost(c_const, cxa, cya, plan)
        if mix is not None:
            cost_at_plan = mix(cost_at_plan)
        trace.append(float(np.sum(cost_at_plan * plan)))
        if change < config.convergence_tol:
            break
    return plan, trace[-1], iters, tuple(trace)


def _symmetric_entries(c, name: str) -> np.ndarray:
    if isinstance(c, SimilarityMatrix):
        return c.entries
    arr = as_matrix(c)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValueError(f"{name} must be square, got shape {arr.shape}")
    if not np.allclose(arr, arr.T, rtol=0.0, atol=SYMMETRY_TOL):
        raise ValueError(f"{name} must be symmetric within 1e-9")
    return arr


def _check_square(arr: np.ndarray, name: str) -> None:
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValueError(f"{name} must be square, got shape {arr.shape}")
