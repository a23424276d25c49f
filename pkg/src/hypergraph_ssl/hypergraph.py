"""
Hypergraphs and their Laplacian operators
=========================================

A hypergraph is stored as its vertex-by-hyperedge incidence matrix ``H`` and a
vector of positive hyperedge weights ``w``. From these we form

* the vertex degrees ``d(v) = sum_e w(e) h(v, e)`` and hyperedge degrees
  ``d(e) = sum_v h(v, e)``,
* the un-normalized Laplacian ``L = D_v - H W D_e^{-1} H^T``,
* the normalized Laplacians ``L_sym`` and ``L_rw``,
* the propagation matrices ``S_sym = I - L_sym`` and ``S_rw = I - L_rw``.

Everything is dense float64. A hypergraph built from ``n`` vertices and
``|E|`` hyperedges produces ``n x n`` operators.

Example
-------
```py
import numpy as np
from hypergraph_ssl import Hypergraph, compute_degrees, unnormalized_laplacian

h = Hypergraph(np.array([[1, 0], [1, 1], [0, 1]]))
d = compute_degrees(h)
L = unnormalized_laplacian(h, d).values
```
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Literal

import numpy as np

__all__ = [
    "HypergraphError",
    "Hypergraph",
    "DegreeVectors",
    "OperatorMatrix",
    "compute_degrees",
    "unnormalized_laplacian",
    "symmetric_laplacian",
    "random_walk_laplacian",
    "propagation_matrix",
    "quadratic_form_oracle",
    "incidence_to_coo_text",
    "incidence_from_coo_text",
]

OperatorKind = Literal["L_unnorm", "L_sym", "L_rw", "S_rw", "S_sym", "L_graph"]


class HypergraphError(ValueError):
    """Raised when an incidence matrix or weight vector violates a hypergraph invariant."""


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class Hypergraph:
    """Incidence-matrix representation of a weighted hypergraph.

    Parameters
    ----------
    incidence : array_like, shape (n_vertices, n_edges)
        Binary matrix, ``incidence[v, e] == 1`` iff vertex ``v`` is in hyperedge ``e``.
    edge_weights : array_like, shape (n_edges,), optional
        Strictly positive hyperedge weights. Defaults to all ones.

    Raises
    ------
    HypergraphError
        If an entry is not 0/1, a hyperedge has fewer than two vertices, a
        weight is not strictly positive, or a vertex lies in no hyperedge.
    """

    incidence: np.ndarray
    edge_weights: np.ndarray = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        H = np.array(self.incidence, dtype=np.float64)
        if H.ndim != 2:
            raise HypergraphError(f"incidence must be 2-D, got shape {H.shape}")
        n, m = H.shape
        if n == 0 or m == 0:
            raise HypergraphError(f"incidence must be non-empty, got shape {H.shape}")
        if not np.all((H == 0) | (H == 1)):
            raise HypergraphError("incidence entries must be exactly 0 or 1")

        if self.edge_weights is None:
            w = np.ones(m)
        else:
            w = np.array(self.edge_weights, dtype=np.float64).reshape(-1)
        if w.shape != (m,):
            raise HypergraphError(f"expected {m} edge weights, got {w.shape[0]}")
        if not np.all(np.isfinite(w)) or np.any(w <= 0):
            bad = np.flatnonzero(~(w > 0) | ~np.isfinite(w))
            raise HypergraphError(f"edge weights must be strictly positive; offending edges {bad.tolist()}")

        edge_sizes = H.sum(axis=0)
        if np.any(edge_sizes < 2):
            bad = np.flatnonzero(edge_sizes < 2)
            raise HypergraphError(f"hyperedges must contain at least 2 vertices; offending edges {bad.tolist()}")
        memberships = H.sum(axis=1)
        if np.any(memberships < 1):
            bad = np.flatnonzero(memberships < 1)
            raise HypergraphError(f"every vertex must belong to a hyperedge; isolated vertices {bad.tolist()}")

        object.__setattr__(self, "incidence", _frozen(H))
        object.__setattr__(self, "edge_weights", _frozen(w))

    @property
    def n_vertices(self) -> int:
        return self.incidence.shape[0]

    @property
    def n_edges(self) -> int:
        return self.incidence.shape[1]


@dataclass(frozen=True)
class DegreeVectors:
    vertex_degrees: np.ndarray
    edge_degrees: np.ndarray


@dataclass(frozen=True)
class OperatorMatrix:
    """An ``n x n`` operator tagged with what it is.

    ``vertex_degrees`` is carried along for the normalized kinds so solvers can
    move between the random-walk and symmetric forms by diagonal similarity.
    """

    kind: OperatorKind
    values: np.ndarray
    vertex_degrees: np.ndarray | None = None

    def __array__(self, dtype=None, copy=None):
        return self.values if dtype is None else self.values.astype(dtype)

    @property
    def n(self) -> int:
        return self.values.shape[0]


def compute_degrees(h: Hypergraph) -> DegreeVectors:
    """Vertex degrees ``H w`` and hyperedge degrees ``1^T H``."""
    if not isinstance(h, Hypergraph):
        raise TypeError(f"expected Hypergraph, got {type(h).__name__}")
    dv = h.incidence @ h.edge_weights
    de = h.incidence.sum(axis=0)
    # Hypergraph.__post_init__ already guarantees this; guard against hand-built instances.
    if np.any(dv <= 0) or np.any(de <= 0):
        raise HypergraphError("zero-degree vertex or empty hyperedge")
    return DegreeVectors(_frozen(dv), _frozen(de))


def _check_degrees(h: Hypergraph, d: DegreeVectors) -> None:
    if d.vertex_degrees.shape != (h.n_vertices,) or d.edge_degrees.shape != (h.n_edges,):
        raise HypergraphError("degree vectors do not match the hypergraph dimensions")


def _adjacency_part(h: Hypergraph, d: DegreeVectors) -> np.ndarray:
    # H W D_e^{-1} H^T, the shared core of every operator
    scale = h.edge_weights / d.edge_degrees
    A = (h.incidence * scale) @ h.incidence.T
    return 0.5 * (A + A.T)


def unnormalized_laplacian(h: Hypergraph, d: DegreeVectors) -> OperatorMatrix:
    """``L = D_v - H W D_e^{-1} H^T``; symmetric, PSD, with ``L 1 = 0``."""
    _check_degrees(h, d)
    L = np.diag(d.vertex_degrees) - _adjacency_part(h, d)
    return OperatorMatrix("L_unnorm", _frozen(L), d.vertex_degrees)


def symmetric_laplacian(h: Hypergraph, d: DegreeVectors) -> OperatorMatrix:
    """``L_sym = I - D_v^{-1/2} H W D_e^{-1} H^T D_v^{-1/2}``."""
    S = propagation_matrix(h, d, "sym").values
    return OperatorMatrix("L_sym", _frozen(np.eye(h.n_vertices) - S), d.vertex_degrees)


def random_walk_laplacian(h: Hypergraph, d: DegreeVectors) -> OperatorMatrix:
    """``L_rw = I - D_v^{-1} H W D_e^{-1} H^T``. Not symmetric in general."""
    S = propagation_matrix(h, d, "rw").values
    return OperatorMatrix("L_rw", _frozen(np.eye(h.n_vertices) - S), d.vertex_degrees)


def propagation_matrix(h: Hypergraph, d: DegreeVectors, kind: Literal["rw", "sym"]) -> OperatorMatrix:
    """Build the propagation matrix used by the iterative label spreading.

    Parameters
    ----------
    h : Hypergraph
    d : DegreeVectors
        Output of :func:`compute_degrees` for ``h``.
    kind : {"rw", "sym"}
        ``"rw"`` gives the row-stochastic ``S_rw = D_v^{-1} H W D_e^{-1} H^T``;
        ``"sym"`` gives the symmetric ``S_sym = D_v^{-1/2} H W D_e^{-1} H^T D_v^{-1/2}``.

    Returns
    -------
    OperatorMatrix
        Of kind ``"S_rw"`` or ``"S_sym"``.
    """
    _check_degrees(h, d)
    A = _adjacency_part(h, d)
    dv = d.vertex_degrees
    if kind == "rw":
        S = A / dv[:, None]
        return OperatorMatrix("S_rw", _frozen(S), dv)
    if kind == "sym":
        r = 1.0 / np.sqrt(dv)
        S = r[:, None] * A * r[None, :]
        S = 0.5 * (S + S.T)
        return OperatorMatrix("S_sym", _frozen(S), dv)
    raise ValueError(f"kind must be 'rw' or 'sym', got {kind!r}")


def quadratic_form_oracle(h: Hypergraph, d: DegreeVectors, f) -> float:
    """Evaluate ``f^T L f`` straight from the hyperedges, without forming ``L``.

    Computes ``1/2 * sum_e sum_{u, v in e} w(e)/d(e) * (f(u) - f(v))^2`` where the
    inner sum runs over ordered pairs of members of ``e``. Each unordered pair is
    therefore counted once overall.
    """
    f = np.asarray(f, dtype=np.float64)
    if f.shape != (h.n_vertices,):
        raise ValueError(f"f must have length {h.n_vertices}, got shape {f.shape}")
    _check_degrees(h, d)
    total = 0.0
    for e in range(h.n_edges):
        members = np.flatnonzero(h.incidence[:, e])
        fe = f[members]
        pair_sq = 0.0
        for i in range(len(members)):
            for j in range(i + 1, len(members)):
                pair_sq += (fe[i] - fe[j]) ** 2
        total += h.edge_weights[e] / d.edge_degrees[e] * pair_sq
    return float(total)


def incidence_to_coo_text(h: Hypergraph) -> str:
    """Serialize ``H`` as ``vertex_index edge_index 1`` lines (debug/fixture format)."""
    rows, cols = np.nonzero(h.incidence)
    order = np.lexsort((rows, cols))
    header = f"# {h.n_vertices} {h.n_edges}\n"
    return header + "".join(f"{rows[i]}\t{cols[i]}\t1\n" for i in order)


def incidence_from_coo_text(text: str, edge_weights=None) -> Hypergraph:
    """Inverse of :func:`incidence_to_coo_text`.

    The ``# n_vertices n_edges`` header line is optional; without it the shape is
    inferred from the largest indices.
    """
    shape = None
    entries = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line:
            continue
        if line.startswith("#"):
            parts = line[1:].split()
            if len(parts) == 2 and shape is None:
                shape = (int(parts[0]), int(parts[1]))
            continue
        parts = line.split()
        if len(parts) != 3:
            raise HypergraphError(f"line {lineno}: expected 3 fields, got {len(parts)}")
        try:
            v, e, val = int(parts[0]), int(parts[1]), float(parts[2])
        except ValueError as exc:
            raise HypergraphError(f"line {lineno}: {exc}") from None
        if val != 1:
            raise HypergraphError(f"line {lineno}: incidence value must be 1, got {parts[2]}")
        entries.append((v, e))
    if not entries:
        raise HypergraphError("no incidence entries")
    if shape is None:
        shape = (max(v for v, _ in entries) + 1, max(e for _, e in entries) + 1)
    H = np.zeros(shape)
    for v, e in entries:
        H[v, e] = 1.0
    return Hypergraph(H, edge_weights)
