"""Hyperedges from expression profiles: z-scoring, seeded k-means, incidence."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .hypergraph import Hypergraph

__all__ = [
    "ExpressionMatrix",
    "ClusterAssignment",
    "ClusteringError",
    "zscore_rows",
    "cluster_count",
    "kmeans",
    "incidence_from_clusters",
]


class ClusteringError(RuntimeError):
    pass


@dataclass(frozen=True)
class ExpressionMatrix:
    """Genes x experiments expression values with gene identifiers."""

    values: np.ndarray
    gene_ids: tuple = None  # type: ignore[assignment]
    experiment_ids: tuple = None  # type: ignore[assignment]

    def __post_init__(self):
        X = np.array(self.values, dtype=np.float64)
        if X.ndim != 2:
            raise ValueError(f"expression values must be 2-D, got shape {X.shape}")
        if not np.all(np.isfinite(X)):
            raise ValueError("expression values must be finite")
        n, m = X.shape
        genes = tuple(f"g{i}" for i in range(n)) if self.gene_ids is None else tuple(map(str, self.gene_ids))
        if len(genes) != n:
            raise ValueError(f"{len(genes)} gene ids for {n} rows")
        if len(set(genes)) != n:
            seen, dup = set(), None
            for g in genes:
                if g in seen:
                    dup = g
                    break
                seen.add(g)
            raise ValueError(f"duplicate gene id {dup!r}")
        exps = tuple(f"e{j}" for j in range(m)) if self.experiment_ids is None else tuple(map(str, self.experiment_ids))
        if len(exps) != m:
            raise ValueError(f"{len(exps)} experiment ids for {m} columns")
        X.setflags(write=False)
        object.__setattr__(self, "values", X)
        object.__setattr__(self, "gene_ids", genes)
        object.__setattr__(self, "experiment_ids", exps)

    @property
    def shape(self):
        return self.values.shape

    def __array__(self, dtype=None, copy=None):
        return self.values if dtype is None else self.values.astype(dtype)


@dataclass(frozen=True)
class ClusterAssignment:
    labels: np.ndarray
    k: int
    seed: int
    n_repaired: int = 0
    n_iterations: int = 0
    converged: bool = True
    objective_history: tuple = field(default=())


def zscore_rows(x):
    """Standardize each row to mean 0 and population standard deviation 1.

    Constant rows become all zeros. Returns the same type it was given
    (``ExpressionMatrix`` or array).
    """
    X = np.asarray(x, dtype=np.float64)
    if X.ndim != 2 or X.shape[1] < 2:
        raise ValueError(f"need a 2-D matrix with at least 2 columns, got shape {X.shape}")
    centered = X - X.mean(axis=1, keepdims=True)
    sd = np.sqrt(np.mean(centered**2, axis=1, keepdims=True))
    # relative test so that rows like (c, c, c) with rounding noise count as constant
    scale = np.max(np.abs(X), axis=1, keepdims=True)
    const = sd <= 1e-12 * np.maximum(scale, 1.0)
    Z = np.where(const, 0.0, centered / np.where(const, 1.0, sd))
    if isinstance(x, ExpressionMatrix):
        return ExpressionMatrix(Z, x.gene_ids, x.experiment_ids)
    return Z


def cluster_count(n: int) -> int:
    """Number of hyperedges for ``n`` genes: ``sqrt(n / 2)`` rounded half-up, at least 2."""
    if int(n) != n or n < 4:
        raise ValueError(f"need at least 4 genes to form 2 clusters of size >= 2, got {n}")
    return max(2, int(math.floor(math.sqrt(n / 2.0) + 0.5)))


def _sqdist(X: np.ndarray, C: np.ndarray) -> np.ndarray:
    D = (X * X).sum(1)[:, None] - 2.0 * X @ C.T + (C * C).sum(1)[None, :]
    return np.maximum(D, 0.0)


def _plusplus_init(X: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    n = X.shape[0]
    centers = [int(rng.integers(n))]
    closest = _sqdist(X, X[centers])[:, 0]
    for _ in range(1, k):
        total = closest.sum()
        if total > 0:
            idx = int(rng.choice(n, p=closest / total))
        else:
            idx = int(rng.integers(n))
        centers.append(idx)
        closest = np.minimum(closest, _sqdist(X, X[idx : idx + 1])[:, 0])
    return X[centers].copy()


def _centroids(X, labels, k):
    counts = np.bincount(labels, minlength=k)
    sums = np.zeros((k, X.shape[1]))
    np.add.at(sums, labels, X)
    C = np.zeros_like(sums)
    nz = counts > 0
    C[nz] = sums[nz] / counts[nz, None]
    return C, counts


def _objective(X, C, labels) -> float:
    return float(np.sum((X - C[labels]) ** 2))


def kmeans(x, k: int, seed: int = 0, max_iter: int = 100, tol: float = 1e-6) -> ClusterAssignment:
    """Seeded Lloyd k-means with k-means++ initialization.

    Parameters
    ----------
    x : ExpressionMatrix or array_like, shape (n, m)
        Points to cluster, one per row (typically z-scored profiles).
    k : int
        Requested number of clusters, ``2 <= k <= n / 2``.
    seed : int
        Seed for the initialization. Same input and seed give the same labels.
    max_iter : int
        Cap on Lloyd iterations.
    tol : float
        Stop once the centroid shift relative to the centroid norm drops below this.

    Returns
    -------
    ClusterAssignment
        Labels in ``[0, k')`` where every cluster has at least two members.
        A cluster that ends as a singleton is merged into the cluster of its
        member's next-nearest centroid, so ``k' <= k``; ``n_repaired`` counts
        these merges.

    Notes
    -----
    A cluster that empties during the iterations has its centroid moved to the
    point farthest from its current centroid. ``objective_history`` holds the
    within-cluster sum of squares after every centroid update and is
    non-increasing.
    """
    X = np.asarray(x, dtype=np.float64)
    if X.ndim != 2:
        raise ValueError(f"expected a 2-D matrix, got shape {X.shape}")
    n = X.shape[0]
    if int(k) != k or k < 2 or 2 * k > n:
        raise ValueError(f"k must satisfy 2 <= k <= n/2 = {n / 2}, got {k}")
    k = int(k)
    rng = np.random.default_rng(seed)

    C = _plusplus_init(X, k, rng)
    history = []
    converged = False
    it = 0
    for it in range(1, max_iter + 1):
        D = _sqdist(X, C)
        labels = np.argmin(D, axis=1)
        C_new, counts = _centroids(X, labels, k)
        empty = np.flatnonzero(counts == 0)
        if empty.size:
            far = D[np.arange(n), labels].copy()
            for j in empty:
                p = int(np.argmax(far))
                C_new[j] = X[p]
                far[p] = -1.0
        history.append(_objective(X, C_new, labels))
        shift = np.linalg.norm(C_new - C) / max(np.linalg.norm(C), np.finfo(float).tiny)
        C = C_new
        if shift < tol:
            converged = True
            break

    labels = np.argmin(_sqdist(X, C), axis=1)
    C, counts = _centroids(X, labels, k)
    history.append(_objective(X, C, labels))

    labels, n_repaired = _merge_singletons(X, labels, C, counts)
    k_final = int(labels.max()) + 1
    if k_final < 2:
        raise ClusteringError(f"k-means left {k_final} usable cluster(s) out of {k} requested")
    labels = labels.astype(np.int64)
    labels.setflags(write=False)
    return ClusterAssignment(labels, k_final, int(seed), n_repaired, it, converged, tuple(history))


def _merge_singletons(X, labels, C, counts):
    labels = labels.copy()
    counts = counts.copy()
    C = C.copy()
    repaired = 0
    while True:
        singles = np.flatnonzero(counts == 1)
        if singles.size == 0:
            break
        j = int(singles[0])
        p = int(np.flatnonzero(labels == j)[0])
        others = np.flatnonzero((counts > 0) & (np.arange(len(counts)) != j))
        if others.size == 0:
            break
        d = _sqdist(X[p : p + 1], C[others])[0]
        target = int(others[np.argmin(d)])
        labels[p] = target
        counts[j] = 0
        counts[target] += 1
        C[target] = X[labels == target].mean(axis=0)
        repaired += 1
    present = np.flatnonzero(counts > 0)
    remap = np.full(len(counts), -1)
    remap[present] = np.arange(present.size)
    return remap[labels], repaired


def incidence_from_clusters(a: ClusterAssignment) -> Hypergraph:
    """One unit-weight hyperedge per cluster."""
    labels = np.asarray(a.labels)
    H = np.zeros((labels.shape[0], a.k))
    H[np.arange(labels.shape[0]), labels] = 1.0
    return Hypergraph(H, np.ones(a.k))
