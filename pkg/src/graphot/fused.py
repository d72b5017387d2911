"""Fused transport distance mixing node matching with structure matching.

The shared-plan path (the default) runs the structure solver's linearization
loop with a unified cost lam * C + (1 - lam) * pseudo_cost, so a single plan
is solved once and serves both objectives. The unshared path solves node and
structure problems independently and blends the two distances.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (
    EmbeddingSet,
    SolverConfig,
    TransportPlan,
    _marginal_violation,
    as_embeddings,
    as_matrix,
    build_graph,
    cosine_cost_matrix,
    uniform_marginal,
)
from .gromov import _linearized_solve, solve_gwd
from .sinkhorn import solve_wd


@dataclass(frozen=True, eq=False)
class ProjectionPair:
    """Fixed linear maps applied to the two embedding sets before the node cost.

    Matrices right-multiply the stacked row vectors (X @ proj_x); None means
    identity. Both maps must land in the same output dimension.
    """

    proj_x: np.ndarray | None = None
    proj_y: np.ndarray | None = None

    def __post_init__(self):
        for name in ("proj_x", "proj_y"):
            m = getattr(self, name)
            if m is None:
                continue
            m = np.array(m, dtype=float)
            if m.ndim != 2:
                raise ValueError(f"{name} must be a 2-d matrix, got shape {m.shape}")
            m.setflags(write=False)
            object.__setattr__(self, name, m)
        if self.proj_x is not None and self.proj_y is not None:
            if self.proj_x.shape[1] != self.proj_y.shape[1]:
                raise ValueError(
                    f"projection output dimensions differ: {self.proj_x.shape[1]} vs "
                    f"{self.proj_y.shape[1]}"
                )

    def apply(self, x: EmbeddingSet, y: EmbeddingSet) -> tuple[EmbeddingSet, EmbeddingSet]:
        xp = x if self.proj_x is None else EmbeddingSet(x.vectors @ self.proj_x)
        yp = y if self.proj_y is None else EmbeddingSet(y.vectors @ self.proj_y)
        if xp.dim != yp.dim:
            raise ValueError(f"projected dimensions differ: {xp.dim} vs {yp.dim}")
        return xp, yp


@dataclass(frozen=True, eq=False)
class GotResult:
    """Fused distance plus the plan(s) that produced it.

    Shared mode carries one plan; unshared mode carries the separate node and
    structure plans and a distance that is the exact lam-blend of the two
    sub-distances.
    """

    distance: float
    mode: str
    lam: float
    plan: TransportPlan | None = None
    plan_wd: TransportPlan | None = None
    plan_gwd: TransportPlan | None = None
    distance_wd: float | None = None
    distance_gwd: float | None = None
    outer_iterations_run: int = 0
    objective_trace: tuple[float, ...] = ()

    @property
    def alignment_plan(self) -> TransportPlan:
        """The plan read off as the node alignment: shared plan, or the node plan."""
        return self.plan if self.mode == "shared" else self.plan_wd


def unified_cost(cross, pseudo, lam: float) -> np.ndarray:
    """Entrywise blend lam * cross + (1 - lam) * pseudo of node and structure costs."""
    c = as_matrix(cross)
    l = as_matrix(pseudo)
    if c.shape != l.shape:
        raise ValueError(f"cost shapes differ: {c.shape} vs {l.shape}")
    if not 0.0 <= lam <= 1.0:
        raise ValueError(f"lambda must be in [0, 1], got {lam!r}")
    return lam * c + (1.0 - lam) * l


def solve_got(x, y, proj: ProjectionPair, config: SolverConfig) -> GotResult:
    """Fused alignment of two embedding sets.

    Builds thresholded similarity graphs from the raw embeddings (threshold
    config.tau), projects the embeddings through proj for the cross-domain
    cosine-distance cost, and solves with uniform marginals. config.shared_plan
    selects the shared single-plan path or the independent two-solve path;
    config.lam weighs node cost against structure cost.
    """
    xs, ys = as_embeddings(x), as_embeddings(y)
    cx = build_graph(xs, config.tau)
    cy = build_graph(ys, config.tau)
    xp, yp = proj.apply(xs, ys)
    cross = cosine_cost_matrix(xp, yp)
    u = uniform_marginal(xs.count)
    v = uniform_marginal(ys.count)

    if config.shared_plan:
        cross_entries = cross.entries
        lam = config.lam
        plan, distance, iters, trace = _linearized_solve(
            cx.entries,
            cy.entries,
            u.weights,
            v.weights,
            config,
            mix=lambda pseudo: unified_cost(cross_entries, pseudo, lam),
        )
        violation = _marginal_violation(plan, u.weights, v.weights)
        wrapped = TransportPlan(
            plan, u, v, marginal_tol=max(config.marginal_tol, violation * (1.0 + 1e-12) + 1e-15)
        )
        return GotResult(
            distance=distance,
            mode="shared",
            lam=config.lam,
            plan=wrapped,
            outer_iterations_run=iters,
            objective_trace=trace,
        )

    wd = solve_wd(cross, u, v, config)
    gw = solve_gwd(cx, cy, u, v, config)
    distance = config.lam * wd.distance + (1.0 - config.lam) * gw.distance
    return GotResult(
        distance=distance,
        mode="unshared",
        lam=config.lam,
        plan_wd=wd.plan,
        plan_gwd=gw.plan,
        distance_wd=wd.distance,
        distance_gwd=gw.distance,
        outer_iterations_run=max(wd.outer_iterations_run, gw.outer_iterations_run),
    )


def alignment_loss(x, y, proj: ProjectionPair, config: SolverConfig) -> float:
    """Scalar alignment regularizer: the fused distance of solve_got.

    This is the quantity a trainer scales and adds to its task loss. Gradients
    should flow through the cost matrices only, with the solved plan held
    constant (see sinkhorn.envelope_gradient).
    """
    return solve_got(x, y, proj, config).distance
