import numpy as np
import pytest

from graphot.core import EmbeddingSet, intra_similarity


@pytest.fixture
def rng():
    return np.random.default_rng(20260810)


def random_embeddings(rng, n, d) -> EmbeddingSet:
    return EmbeddingSet(rng.standard_normal((n, d)))


def random_similarity(rng, n, d=5):
    """Random PSD-backed similarity matrix (cosine of a Gaussian point set)."""
    return intra_similarity(random_embeddings(rng, n, d))


def permuted_copy(cx_entries: np.ndarray, perm: np.ndarray) -> np.ndarray:
    """Relabel a similarity matrix so node i becomes node perm[i]."""
    out = np.empty_like(cx_entries)
    out[np.ix_(perm, perm)] = cx_entries
    return out
