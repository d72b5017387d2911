"""Core types and kernels shared by every transport solver.

Embedding sets, marginals, similarity/cost matrices and transport plans are
immutable wrappers around dense float64 arrays; construction validates the
invariants the solvers rely on (symmetry, nonnegativity, prescribed mass).
All operations here are pure functions.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

MASS_TOL = 1e-9
SYMMETRY_TOL = 1e-9
DIAGONAL_TOL = 1e-9


def as_matrix(m) -> np.ndarray:
    """Unwrap a matrix-bearing type (or pass an array through) as float64."""
    return np.asarray(getattr(m, "entries", m), dtype=float)


def as_weights(w) -> np.ndarray:
    """Unwrap a MarginalWeights (or pass a vector through) as float64."""
    return np.asarray(getattr(w, "weights", w), dtype=float)


@dataclass(frozen=True, eq=False)
class EmbeddingSet:
    """Ordered set of equal-dimension feature vectors for one domain, one per row."""

    vectors: np.ndarray

    def __post_init__(self):
        v = np.array(self.vectors, dtype=float)
        if v.ndim != 2 or v.shape[0] < 1 or v.shape[1] < 1:
            raise ValueError(
                f"expected a nonempty 2-d array of row vectors, got shape {np.shape(self.vectors)}"
            )
        bad = np.flatnonzero(~np.isfinite(v).all(axis=1))
        if bad.size:
            raise ValueError(f"vector {bad[0]} has non-finite entries")
        zero = np.flatnonzero(np.linalg.norm(v, axis=1) == 0.0)
        if zero.size:
            raise ValueError(f"vector {zero[0]} has zero norm; cosine similarity is undefined")
        v.setflags(write=False)
        object.__setattr__(self, "vectors", v)

    @property
    def count(self) -> int:
        return self.vectors.shape[0]

    @property
    def dim(self) -> int:
        return self.vectors.shape[1]


def as_embeddings(x) -> "EmbeddingSet":
    return x if isinstance(x, EmbeddingSet) else EmbeddingSet(np.asarray(x, dtype=float))


@dataclass(frozen=True, eq=False)
class MarginalWeights:
    """Probability weights over one domain's entities (a point on the simplex)."""

    weights: np.ndarray

    def __post_init__(self):
        w = np.array(self.weights, dtype=float)
        if w.ndim != 1 or w.size < 1:
            raise ValueError(f"weights must be a nonempty 1-d vector, got shape {np.shape(self.weights)}")
        if (w < 0).any():
            raise ValueError("marginal weights must be nonnegative")
        total = float(w.sum())
        if abs(total - 1.0) > MASS_TOL:
            raise ValueError(f"marginal weights must sum to 1, got {total!r}")
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)

    def __len__(self) -> int:
        return self.weights.size


@dataclass(frozen=True, eq=False)
class SimilarityMatrix:
    """Dense intra-domain cosine-similarity matrix, optionally thresholded into graph weights.

    Raw matrices carry cosine values in [-1, 1] with unit diagonal; thresholded
    matrices hold max(similarity - tau, 0), so an edge (i, j) exists exactly
    where the entry is strictly positive.
    """

    entries: np.ndarray
    thresholded: bool = False
    tau: float | None = None

    def __post_init__(self):
        e = np.array(self.entries, dtype=float)
        if e.ndim != 2 or e.shape[0] != e.shape[1] or e.shape[0] < 1:
            raise ValueError(f"similarity matrix must be square, got shape {np.shape(self.entries)}")
        if not np.allclose(e, e.T, rtol=0.0, atol=SYMMETRY_TOL):
            raise ValueError("similarity matrix must be symmetric within 1e-9")
        if self.thresholded:
            if self.tau is None or self.tau < 0:
                raise ValueError("thresholded similarity matrix needs tau >= 0")
            if (e < 0).any():
                raise ValueError("thresholded similarity entries must be nonnegative")
            expected_diag = max(1.0 - float(self.tau), 0.0)
        else:
            if self.tau is not None:
                raise ValueError("tau is only recorded on thresholded matrices")
            expected_diag = 1.0
        if np.max(np.abs(np.diag(e) - expected_diag)) > DIAGONAL_TOL:
            raise ValueError(f"diagonal entries must equal {expected_diag} within 1e-9")
        e.setflags(write=False)
        object.__setattr__(self, "entries", e)

    @property
    def size(self) -> int:
        return self.entries.shape[0]


@dataclass(frozen=True, eq=False)
class CostMatrix:
    """Dense rectangular cross-domain cost matrix with nonnegative entries."""

    entries: np.ndarray

    def __post_init__(self):
        e = np.array(self.entries, dtype=float)
        if e.ndim != 2 or e.shape[0] < 1 or e.shape[1] < 1:
            raise ValueError(f"cost matrix must be a nonempty 2-d array, got shape {np.shape(self.entries)}")
        if not np.isfinite(e).all():
            raise ValueError("cost matrix entries must be finite")
        if (e < 0).any():
            raise ValueError("cost matrix entries must be nonnegative")
        e.setflags(write=False)
        object.__setattr__(self, "entries", e)

    @property
    def shape(self) -> tuple[int, int]:
        return self.entries.shape


@dataclass(frozen=True, eq=False)
class TransportPlan:
    """Nonnegative coupling matrix with prescribed row/column marginals and unit total mass."""

    entries: np.ndarray
    row_marginal: MarginalWeights
    col_marginal: MarginalWeights
    marginal_tol: float = 1e-6

    def __post_init__(self):
        e = np.array(self.entries, dtype=float)
        rm = self.row_marginal if isinstance(self.row_marginal, MarginalWeights) else MarginalWeights(self.row_marginal)
        cm = self.col_marginal if isinstance(self.col_marginal, MarginalWeights) else MarginalWeights(self.col_marginal)
        if e.ndim != 2 or e.shape != (len(rm), len(cm)):
            raise ValueError(
                f"plan shape {np.shape(self.entries)} does not match marginals ({len(rm)}, {len(cm)})"
            )
        if (e < 0).any():
            raise ValueError("transport plan entries must be nonnegative")
        total = float(e.sum())
        if abs(total - 1.0) > MASS_TOL:
            raise ValueError(f"transport plan mass must sum to 1, got {total!r}")
        violation = _marginal_violation(e, rm.weights, cm.weights)
        if violation > self.marginal_tol:
            raise ValueError(
                f"marginal violation {violation:.3e} exceeds tolerance {self.marginal_tol:.3e}"
            )
        e.setflags(write=False)
        object.__setattr__(self, "entries", e)
        object.__setattr__(self, "row_marginal", rm)
        object.__setattr__(self, "col_marginal", cm)

    @property
    def shape(self) -> tuple[int, int]:
        return self.entries.shape

    def max_marginal_violation(self) -> float:
        return _marginal_violation(self.entries, self.row_marginal.weights, self.col_marginal.weights)


def _marginal_violation(plan: np.ndarray, u: np.ndarray, v: np.ndarray) -> float:
    row_err = np.max(np.abs(plan.sum(axis=1) - u))
    col_err = np.max(np.abs(plan.sum(axis=0) - v))
    return float(max(row_err, col_err))


@dataclass(frozen=True)
class SolverConfig:
    """Hyper-parameters shared by all solvers.

    beta is the proximal/entropic step weight of the scaling iteration;
    inner_iters is the number of Sinkhorn sweeps per proximal step;
    lam mixes node cost (lam) against structure cost (1 - lam);
    tau is the graph similarity threshold.
    """

    beta: float = 0.5
    outer_iters: int = 1000
    inner_iters: int = 1
    lam: float = 0.8
    tau: float = 0.1
    shared_plan: bool = True
    marginal_tol: float = 1e-6
    convergence_tol: float = 1e-9

    def __post_init__(self):
        if not self.beta > 0:
            raise ValueError(f"beta must be > 0, got {self.beta!r}")
        if not 0.0 <= self.lam <= 1.0:
            raise ValueError(f"lambda must be in [0, 1], got {self.lam!r}")
        if self.tau < 0:
            raise ValueError(f"tau must be >= 0, got {self.tau!r}")
        if self.outer_iters < 1:
            raise ValueError(f"outer_iters must be >= 1, got {self.outer_iters!r}")
        if self.inner_iters < 1:
            raise ValueError(f"inner_iters must be >= 1, got {self.inner_iters!r}")
        if not self.marginal_tol > 0:
            raise ValueError(f"marginal_tol must be > 0, got {self.marginal_tol!r}")
        if not self.convergence_tol > 0:
            raise ValueError(f"convergence_tol must be > 0, got {self.convergence_tol!r}")


def cosine_similarity_matrix(a, b) -> np.ndarray:
    """Pairwise cosine similarity between two embedding sets.

    Entry (i, j) is dot(a_i, b_j) / (|a_i| |b_j|), clipped into [-1, 1] to
    absorb last-ulp rounding from the normalized matmul.
    """
    ea, eb = as_embeddings(a), as_embeddings(b)
    if ea.dim != eb.dim:
        raise ValueError(f"embedding dimensions differ: {ea.dim} vs {eb.dim}")
    na = ea.vectors / np.linalg.norm(ea.vectors, axis=1, keepdims=True)
    nb = eb.vectors / np.linalg.norm(eb.vectors, axis=1, keepdims=True)
    return np.clip(na @ nb.T, -1.0, 1.0)


def cosine_cost_matrix(a, b) -> CostMatrix:
    """Cross-domain cosine-distance cost, 1 - cosine similarity, entries in [0, 2]."""
    return CostMatrix(1.0 - cosine_similarity_matrix(a, b))


def intra_similarity(x) -> SimilarityMatrix:
    """Raw (unthresholded) self-similarity matrix of one embedding set.

    Symmetrized and with the diagonal pinned to exactly 1 so the result
    satisfies SimilarityMatrix invariants bit-for-bit.
    """
    sim = cosine_similarity_matrix(x, x)
    sim = 0.5 * (sim + sim.T)
    np.fill_diagonal(sim, 1.0)
    return SimilarityMatrix(sim)


def build_graph(x, tau: float) -> SimilarityMatrix:
    """Thresholded similarity graph: entries max(cos(x_i, x_j) - tau, 0).

    An edge (i, j) exists exactly where the entry is strictly positive.
    """
    if tau < 0:
        raise ValueError(f"tau must be >= 0, got {tau!r}")
    raw = intra_similarity(x)
    return SimilarityMatrix(np.maximum(raw.entries - tau, 0.0), thresholded=True, tau=float(tau))


def uniform_marginal(n: int) -> MarginalWeights:
    """Uniform probability weights 1/n over n entities."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n!r}")
    return MarginalWeights(np.full(n, 1.0 / n))
