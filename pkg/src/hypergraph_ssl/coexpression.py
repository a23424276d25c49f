"""Gene co-expression graph: |Pearson| similarity, thresholded adjacency, ``D - A``."""
from __future__ import annotations

import numpy as np

from .hyperedges import zscore_rows
from .hypergraph import OperatorMatrix

__all__ = ["coexpression_similarity", "threshold_adjacency", "graph_laplacian"]


def coexpression_similarity(x) -> np.ndarray:
    """Absolute Pearson correlation between every pair of rows.

    Rows are z-scored (population sd) so the correlation is ``Z Z^T / m``.
    A zero-variance row has similarity 0 with every row, itself included.
    """
    Z = np.asarray(zscore_rows(np.asarray(x, dtype=np.float64)))
    m = Z.shape[1]
    S = np.abs(Z @ Z.T) / m
    S = 0.5 * (S + S.T)
    # roundoff can push |r| slightly past 1
    return np.clip(S, 0.0, 1.0)


def threshold_adjacency(s, threshold: float = 0.5) -> np.ndarray:
    """``A[i, j] = 1`` iff ``s[i, j] > threshold`` and ``i != j``."""
    if not 0.0 <= threshold < 1.0:
        raise ValueError(f"threshold must lie in [0, 1), got {threshold}")
    S = np.asarray(s, dtype=np.float64)
    if S.ndim != 2 or S.shape[0] != S.shape[1]:
        raise ValueError(f"similarity matrix must be square, got shape {S.shape}")
    A = (S > threshold).astype(np.float64)
    A = np.maximum(A, A.T)
    np.fill_diagonal(A, 0.0)
    return A


def graph_laplacian(a) -> OperatorMatrix:
    """Combinatorial Laplacian ``D - A``; isolated vertices give zero rows."""
    A = np.asarray(a, dtype=np.float64)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"adjacency must be square, got shape {A.shape}")
    L = np.diag(A.sum(axis=1)) - A
    L.setflags(write=False)
    return OperatorMatrix("L_graph", L)
