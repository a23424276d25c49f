"""Cross-validated comparison of the hypergraph methods and the co-expression graph baseline."""
from __future__ import annotations

import csv
import io
import itertools
import json
import logging
from dataclasses import dataclass, field

import numpy as np

from .coexpression import coexpression_similarity, graph_laplacian, threshold_adjacency
from .hyperedges import ExpressionMatrix, cluster_count, incidence_from_clusters, kmeans, zscore_rows
from .hypergraph import compute_degrees, propagation_matrix, unnormalized_laplacian
from .propagation import (
    PropagationConfig,
    build_initial_labels,
    predict,
    propagate_closed_form,
    propagate_iterative,
    solve_unnormalized,
)

__all__ = [
    "METHODS",
    "SCHEMA_VERSION",
    "AnnotationMatrix",
    "FoldPlan",
    "ExperimentReport",
    "accuracy",
    "kfold_split",
    "run_experiment",
]

log = logging.getLogger(__name__)

SCHEMA_VERSION = 1

#: Method keys in report column order.
METHODS = ("graph", "hypergraph-unnormalized", "hypergraph-rw", "hypergraph-sym")


@dataclass(frozen=True)
class AnnotationMatrix:
    """Binary genes x classes membership matrix."""

    values: np.ndarray
    class_ids: tuple = None  # type: ignore[assignment]
    gene_ids: tuple = None  # type: ignore[assignment]

    def __post_init__(self):
        A = np.array(self.values)
        if A.ndim != 2:
            raise ValueError(f"annotations must be 2-D, got shape {A.shape}")
        if not np.all((A == 0) | (A == 1)):
            raise ValueError("annotation entries must be 0 or 1")
        A = A.astype(np.int8)
        n, c = A.shape
        genes = tuple(f"g{i}" for i in range(n)) if self.gene_ids is None else tuple(map(str, self.gene_ids))
        classes = tuple(f"c{j}" for j in range(c)) if self.class_ids is None else tuple(map(str, self.class_ids))
        if len(genes) != n or len(classes) != c:
            raise ValueError("id lengths do not match annotation shape")
        if len(set(genes)) != n:
            raise ValueError("duplicate gene ids in annotations")
        if len(set(classes)) != c:
            raise ValueError("duplicate class ids in annotations")
        A.setflags(write=False)
        object.__setattr__(self, "values", A)
        object.__setattr__(self, "gene_ids", genes)
        object.__setattr__(self, "class_ids", classes)

    def aligned_to(self, gene_ids) -> "AnnotationMatrix":
        """Reorder rows to ``gene_ids``; every gene must be present in both."""
        index = {g: i for i, g in enumerate(self.gene_ids)}
        target = set(gene_ids)
        for g in self.gene_ids:
            if g not in target:
                raise ValueError(f"gene {g!r} in annotations is missing from the expression data")
        missing = [g for g in gene_ids if g not in index]
        if missing:
            raise ValueError(f"gene {missing[0]!r} in expression data has no annotation row")
        order = [index[g] for g in gene_ids]
        return AnnotationMatrix(self.values[order], self.class_ids, tuple(gene_ids))


@dataclass(frozen=True)
class FoldPlan:
    k_folds: int
    assignments: np.ndarray
    seed: int

    def __post_init__(self):
        a = np.asarray(self.assignments)
        if a.ndim != 1 or np.any(a < 0) or np.any(a >= self.k_folds):
            raise ValueError(f"fold indices must lie in [0, {self.k_folds})")
        if np.any(np.bincount(a, minlength=self.k_folds) == 0):
            raise ValueError("every fold must be non-empty")

    def test_mask(self, fold: int) -> np.ndarray:
        return np.asarray(self.assignments) == fold


def accuracy(predicted, truth) -> float:
    """Fraction of positions where a +1/-1 prediction matches a 0/1 truth.

    This is ``(TP + TN) / (TP + TN + FP + FN)``.
    """
    p = np.asarray(predicted).reshape(-1)
    t = np.asarray(truth).reshape(-1)
    if p.size == 0:
        raise ValueError("cannot score empty vectors")
    if p.shape != t.shape:
        raise ValueError(f"length mismatch: {p.size} predictions vs {t.size} labels")
    if not np.all((t == 0) | (t == 1)):
        raise ValueError("truth must be 0/1")
    if not np.all((p == 1) | (p == -1)):
        raise ValueError("predictions must be +1/-1")
    return float(np.mean(p == np.where(t == 1, 1, -1)))


def kfold_split(n: int, k: int = 3, seed: int = 0) -> FoldPlan:
    """Random, unstratified split of ``n`` items into ``k`` folds whose sizes differ by at most one."""
    if k < 2:
        raise ValueError(f"need at least 2 folds, got {k}")
    if k > n:
        raise ValueError(f"cannot split {n} items into {k} folds")
    perm = np.random.default_rng(seed).permutation(n)
    assignments = np.empty(n, dtype=np.int64)
    assignments[perm] = np.arange(n) % k
    assignments.setflags(write=False)
    return FoldPlan(int(k), assignments, int(seed))


@dataclass
class ExperimentReport:
    """Per-(method, class, fold) accuracies plus aggregates and run metadata.

    ``q[method][class_id]`` is the list of per-fold accuracies. Averages are
    taken over folds per class, then over classes.
    """

    methods: list
    class_ids: list
    excluded_classes: list
    k_folds: int
    q: dict = field(default_factory=dict)
    converged: dict = field(default_factory=dict)
    iterations: dict = field(default_factory=dict)
    agreement: dict = field(default_factory=dict)
    metadata: dict = field(default_factory=dict)
    # built structures, kept for export; not part of the serialized report
    assignment: object = field(default=None, repr=False, compare=False)
    adjacency: object = field(default=None, repr=False, compare=False)

    def class_average(self, method: str, class_id: str) -> float:
        vals = self.q[method][class_id]
        return float(sum(vals) / len(vals))

    def method_average(self, method: str) -> float:
        if not self.class_ids:
            return float("nan")
        per_class = [self.class_average(method, c) for c in self.class_ids]
        return float(sum(per_class) / len(per_class))

    @property
    def averages(self) -> dict:
        return {m: self.method_average(m) for m in self.methods}

    def to_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "methods": list(self.methods),
            "class_ids": list(self.class_ids),
            "excluded_classes": list(self.excluded_classes),
            "k_folds": self.k_folds,
            "per_fold_accuracy": {m: {c: list(v) for c, v in self.q[m].items()} for m in self.methods},
            "per_class_accuracy": {m: {c: self.class_average(m, c) for c in self.class_ids} for m in self.methods},
            "average_accuracy": {m: (None if np.isnan(v) else v) for m, v in self.averages.items()},
            "converged": {m: list(v) for m, v in self.converged.items()},
            "iterations": {m: list(v) for m, v in self.iterations.items()},
            "prediction_agreement": dict(self.agreement),
            "metadata": dict(self.metadata),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def to_csv(self) -> str:
        """One row per class plus a final ``average`` row; values in percent."""
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["function", *self.methods])
        for c in self.class_ids:
            w.writerow([c, *(f"{100 * self.class_average(m, c):.6f}" for m in self.methods)])
        w.writerow(["average", *(f"{100 * self.method_average(m):.6f}" for m in self.methods)])
        return buf.getvalue()


def _single_sided(values: np.ndarray) -> np.ndarray:
    pos = values.sum(axis=0)
    return (pos == 0) | (pos == values.shape[0])


def run_experiment(
    x: ExpressionMatrix,
    ann: AnnotationMatrix,
    methods=METHODS,
    params: PropagationConfig = PropagationConfig(),
    folds: FoldPlan | None = None,
    *,
    threshold: float = 0.5,
    cluster_seed: int = 0,
    iterative: bool = True,
) -> ExperimentReport:
    """Cross-validate the requested methods on one expression/annotation pair.

    Parameters
    ----------
    x : ExpressionMatrix
        Raw expression values; rows are z-scored here.
    ann : AnnotationMatrix
        Ground truth, aligned to ``x.gene_ids`` by id.
    methods : iterable of str
        Any subset of :data:`METHODS`.
    params : PropagationConfig
        ``alpha`` drives the random-walk and symmetric methods, ``gamma`` the
        un-normalized hypergraph and graph methods.
    folds : FoldPlan, optional
        Defaults to a 3-fold split with seed 0.
    threshold : float
        Co-expression cut for the graph baseline.
    cluster_seed : int
        Seed for the k-means hyperedges.
    iterative : bool
        Run the random-walk and symmetric methods by iteration (default) or by
        their closed forms.

    Notes
    -----
    Hyperedges and the co-expression graph are built once from all genes, since
    neither looks at labels. Per fold, held-out rows get zero initial labels and
    accuracy is scored on held-out rows only. Classes with no positive or no
    negative gene are listed in ``excluded_classes`` and not scored.
    """
    if not isinstance(x, ExpressionMatrix):
        x = ExpressionMatrix(x)
    if not isinstance(ann, AnnotationMatrix):
        ann = AnnotationMatrix(ann, gene_ids=x.gene_ids)
    if ann.gene_ids != x.gene_ids:
        ann = ann.aligned_to(x.gene_ids)
    methods = list(dict.fromkeys(methods))
    unknown = [m for m in methods if m not in METHODS]
    if unknown:
        raise ValueError(f"unknown method {unknown[0]!r}; choose from {', '.join(METHODS)}")
    methods = [m for m in METHODS if m in methods]
    n = x.shape[0]
    if folds is None:
        folds = kfold_split(n, 3, 0)
    if np.asarray(folds.assignments).shape != (n,):
        raise ValueError(f"fold plan covers {len(folds.assignments)} genes, data has {n}")

    excluded_mask = _single_sided(ann.values)
    class_idx = np.flatnonzero(~excluded_mask)
    class_ids = [ann.class_ids[j] for j in class_idx]
    excluded = [ann.class_ids[j] for j in np.flatnonzero(excluded_mask)]
    truth = ann.values[:, class_idx]

    metadata = {
        "n_genes": int(n),
        "n_experiments": int(x.shape[1]),
        "n_classes": int(ann.values.shape[1]),
        "alpha": params.alpha,
        "gamma": params.gamma,
        "tolerance": params.tolerance,
        "max_iterations": params.max_iterations,
        "threshold": threshold,
        "cluster_seed": int(cluster_seed),
        "fold_seed": int(folds.seed),
        "solver": "iterative" if iterative else "closed-form",
    }
    report = ExperimentReport(methods, class_ids, excluded, folds.k_folds, metadata=metadata)
    if not methods:
        return report

    Z = zscore_rows(x)
    operators = {}
    if any(m.startswith("hypergraph") for m in methods):
        k = cluster_count(n)
        assignment = kmeans(Z, k, seed=cluster_seed)
        if assignment.n_repaired:
            log.warning("merged %d singleton cluster(s); %d hyperedges remain", assignment.n_repaired, assignment.k)
        report.assignment = assignment
        h = incidence_from_clusters(assignment)
        d = compute_degrees(h)
        operators["hypergraph-unnormalized"] = unnormalized_laplacian(h, d)
        operators["hypergraph-rw"] = propagation_matrix(h, d, "rw")
        operators["hypergraph-sym"] = propagation_matrix(h, d, "sym")
        metadata.update(
            clusters_requested=k,
            clusters_final=assignment.k,
            singleton_repairs=assignment.n_repaired,
            kmeans_iterations=assignment.n_iterations,
            kmeans_converged=assignment.converged,
        )
    if "graph" in methods:
        A = threshold_adjacency(coexpression_similarity(Z), threshold)
        report.adjacency = A
        operators["graph"] = graph_laplacian(A)
        metadata["graph_edges"] = int(A.sum() // 2)
        metadata["graph_isolated_vertices"] = int(np.sum(A.sum(axis=1) == 0))

    for m in methods:
        report.q[m] = {c: [] for c in class_ids}
        report.converged[m] = []
        report.iterations[m] = []
    held_out_preds = {m: [] for m in methods}

    for fold in range(folds.k_folds):
        test = folds.test_mask(fold)
        Y = build_initial_labels(truth, ~test)
        for m in methods:
            op = operators[m]
            if m in ("graph", "hypergraph-unnormalized"):
                F = solve_unnormalized(op, Y, params.gamma)
                ok, iters = True, 0
            elif iterative:
                res = propagate_iterative(op, Y, params)
                F, ok, iters = res.F, res.converged, res.n_iterations
            else:
                F = propagate_closed_form(op, Y, params.alpha)
                ok, iters = True, 0
            P = predict(F)
            report.converged[m].append(bool(ok))
            report.iterations[m].append(int(iters))
            for j, c in enumerate(class_ids):
                report.q[m][c].append(accuracy(P[test, j], truth[test, j]))
            held_out_preds[m].append(P[test])

    for a, b in itertools.combinations(methods, 2):
        pa = np.concatenate(held_out_preds[a])
        pb = np.concatenate(held_out_preds[b])
        report.agreement[f"{a}|{b}"] = float(np.mean(pa == pb)) if pa.size else float("nan")
    return report
