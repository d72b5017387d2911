"""Transport-based distances for aligning two sets of embeddings.

Node matching (Wasserstein), structure matching (Gromov-Wasserstein) and
their fused shared-plan combination, with exact small-instance oracles, a
synthetic alignment harness and transport-plan visualization.
"""

from .core import (
    CostMatrix,
    EmbeddingSet,
    MarginalWeights,
    SimilarityMatrix,
    SolverConfig,
    TransportPlan,
    build_graph,
    cosine_cost_matrix,
    cosine_similarity_matrix,
    intra_similarity,
    uniform_marginal,
)
from .fused import GotResult, ProjectionPair, alignment_loss, solve_got, unified_cost
from .gromov import GwdResult, gw_constant_term, gw_pseudo_cost, solve_gwd
from .harness import (
    PlanMetrics,
    SweepRow,
    SyntheticPair,
    evaluate_plan,
    generate_pair,
    run_sweep,
    sweep_csv,
)
from .sinkhorn import ConditioningError, WdResult, envelope_gradient, solve_wd

__all__ = [
    "ConditioningError",
    "CostMatrix",
    "EmbeddingSet",
    "GotResult",
    "GwdResult",
    "MarginalWeights",
    "PlanMetrics",
    "ProjectionPair",
    "SimilarityMatrix",
    "SolverConfig",
    "SweepRow",
    "SyntheticPair",
    "TransportPlan",
    "WdResult",
    "alignment_loss",
    "build_graph",
    "cosine_cost_matrix",
    "cosine_similarity_matrix",
    "envelope_gradient",
    "evaluate_plan",
    "generate_pair",
    "gw_constant_term",
    "gw_pseudo_cost",
    "intra_similarity",
    "run_sweep",
    "solve_got",
    "solve_gwd",
    "solve_wd",
    "sweep_csv",
    "unified_cost",
    "uniform_marginal",
]

__version__ = "0.1.0"
