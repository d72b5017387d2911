"""Exact small-instance references used as ground truth by the test suite.

Never called by the production solvers: these trade scale for certainty.
Uniform square node matching reduces to the assignment problem (an extreme
point of the coupling polytope is a permutation matrix), and the structure
objective gets both a literal quadruple-loop evaluator and an exhaustive
minimum over permutation couplings.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations

import numpy as np
from scipy.optimize import linear_sum_assignment

from .core import TransportPlan, as_matrix, uniform_marginal

MAX_EXHAUSTIVE = 8
MAX_ASSIGNMENT = 12


@dataclass(frozen=True, eq=False)
class ExactWdResult:
    """Optimal assignment, its cost, and the permutation coupling (1/n) P."""

    distance: float
    assignment: tuple[int, ...]
    plan: TransportPlan


def _assignment_total(cost: np.ndarray, perm) -> float:
    # both routes price a permutation through this one function so that equal
    # permutations compare bit-for-bit
    return float(cost[np.arange(cost.shape[0]), list(perm)].sum())


def assignment_brute_force(cost: np.ndarray) -> tuple[float, tuple[int, ...]]:
    """Minimum-cost assignment by enumerating all n! permutations."""
    n = cost.shape[0]
    rows = np.arange(n)
    best_perm = None
    best = np.inf
    for perm in permutations(range(n)):
        total = float(cost[rows, perm].sum())
        if total < best:
            best = total
            best_perm = perm
    return _assignment_total(cost, best_perm), best_perm


def assignment_augmenting(cost: np.ndarray) -> tuple[float, tuple[int, ...]]:
    """Minimum-cost assignment via the augmenting-path solver (scipy)."""
    row_ind, col_ind = linear_sum_assignment(cost)
    perm = tuple(int(j) for j in col_ind[np.argsort(row_ind)])
    return _assignment_total(cost, perm), perm


def exact_wd_uniform(cost) -> ExactWdResult:
    """Exact node-matching distance for a square cost with uniform marginals.

    For uniform marginals some optimal coupling is a permutation matrix, so
    the problem is solved exactly as an assignment: exhaustively for n <= 8,
    by augmenting paths for n <= 12. The returned plan has exactly n nonzero
    entries.
    """
    c = as_matrix(cost)
    if c.ndim != 2 or c.shape[0] != c.shape[1]:
        raise ValueError(f"exact solver needs a square cost, got shape {c.shape}")
    n = c.shape[0]
    if n > MAX_ASSIGNMENT:
        raise ValueError(f"exact solver capped at n <= {MAX_ASSIGNMENT}, got n = {n}")
    if n <= MAX_EXHAUSTIVE:
        total, perm = assignment_brute_force(c)
    else:
        total, perm = assignment_augmenting(c)
    entries = np.zeros_like(c)
    entries[np.arange(n), perm] = 1.0 / n
    plan = TransportPlan(entries, uniform_marginal(n), uniform_marginal(n), marginal_tol=1e-12)
    return ExactWdResult(total / n, perm, plan)


def gw_objective_at_coupling(cx, cy, plan) -> float:
    """Literal quadruple-loop evaluation of the squared-loss structure objective.

    sum_{i,j,i',j'} T_ij T_i'j' (cx_ii' - cy_jj')^2, accumulated in a fixed
    scalar order. This is the reference the factorized solver computation is
    tested against; keep it loop-level simple.
    """
    cxa, cya, t = as_matrix(cx), as_matrix(cy), as_matrix(plan)
    n, m = t.shape
    if cxa.shape != (n, n) or cya.shape != (m, m):
        raise ValueError(
            f"shapes do not conform: cx {cxa.shape}, cy {cya.shape}, plan {t.shape}"
        )
    total = 0.0
    for i in range(n):
        for j in range(m):
            tij = t[i, j]
            if tij == 0.0:
                continue
            for i2 in range(n):
                for j2 in range(m):
                    diff = cxa[i, i2] - cya[j, j2]
                    total += tij * t[i2, j2] * diff * diff
    return total


def exact_gw_over_permutations(cx, cy) -> tuple[float, tuple[int, ...]]:
    """Minimum of the structure objective over all n! permutation couplings.

    At the coupling (1/n) P_s the objective collapses to
    (1/n^2) sum_{i,i'} (cx_ii' - cy_s(i)s(i'))^2, which is what gets evaluated
    per permutation. The result is an upper bound on the true structure
    distance (the infimum runs over all couplings, not just permutations).
    """
    cxa, cya = as_matrix(cx), as_matrix(cy)
    if cxa.shape != cya.shape or cxa.ndim != 2 or cxa.shape[0] != cxa.shape[1]:
        raise ValueError(f"need two square matrices of equal size, got {cxa.shape} and {cya.shape}")
    n = cxa.shape[0]
    if n > MAX_EXHAUSTIVE:
        raise ValueError(f"permutation search capped at n <= {MAX_EXHAUSTIVE}, got n = {n}")
    scale = 1.0 / (n * n)
    best = np.inf
    best_perm = None
    for perm in permutations(range(n)):
        s = list(perm)
        diff = cxa - cya[np.ix_(s, s)]
        val = float(np.sum(diff * diff)) * scale
        if val < best:
            best = val
            best_perm = perm
    return best, best_perm


def permutation_coupling(perm, n: int) -> TransportPlan:
    """Coupling (1/n) P for a permutation mapping row i to column perm[i]."""
    entries = np.zeros((n, n))
    entries[np.arange(n), list(perm)] = 1.0 / n
    return TransportPlan(entries, uniform_marginal(n), uniform_marginal(n), marginal_tol=1e-12)
