"""Command-line entry point: ``hypergraph-ssl {generate,build,run,inspect}``."""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

import numpy as np

from .coexpression import coexpression_similarity, graph_laplacian, threshold_adjacency
from .evaluation import METHODS, kfold_split, run_experiment
from .hyperedges import cluster_count, incidence_from_clusters, kmeans, zscore_rows
from .hypergraph import (
    compute_degrees,
    incidence_to_coo_text,
    random_walk_laplacian,
    symmetric_laplacian,
    unnormalized_laplacian,
)
from .io import (
    DataFormatError,
    atomic_write_text,
    load_annotations,
    load_expression,
    write_adjacency_edges,
    write_annotations,
    write_assignments,
    write_expression,
)
from .propagation import PropagationConfig
from .synthetic import generate_synthetic

log = logging.getLogger("hypergraph_ssl")

DEFAULT_ALPHA = 0.85
DEFAULT_GAMMA = 1.0
DEFAULT_THRESHOLD = 0.5
DEFAULT_FOLDS = 3
DEFAULT_CLUSTER_SEED = 0
DEFAULT_FOLD_SEED = 0
DEFAULT_SYNTHETIC_SEED = 0


class CLIError(Exception):
    pass


def _methods(text: str) -> list:
    names = [t.strip() for t in text.split(",") if t.strip()]
    if text.strip().lower() == "all":
        return list(METHODS)
    bad = [m for m in names if m not in METHODS]
    if bad:
        raise argparse.ArgumentTypeError(f"unknown method {bad[0]!r}; choose from {', '.join(METHODS)} or 'all'")
    return names


def _out_dir(path) -> Path:
    out = Path(path)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise CLIError(f"--out {out}: cannot create directory ({exc.strerror})") from None
    return out


def cmd_generate(args) -> int:
    try:
        x, ann = generate_synthetic(args.genes, args.experiments, args.modules, args.classes, args.noise, args.seed)
    except ValueError as exc:
        raise CLIError(f"generate: {exc}") from None
    out = _out_dir(args.out)
    write_expression(out / "expression.tsv", x)
    write_annotations(out / "annotations.tsv", ann)
    print(f"wrote {out / 'expression.tsv'} ({x.shape[0]}x{x.shape[1]}) and {out / 'annotations.tsv'}")
    return 0


def cmd_build(args) -> int:
    x = load_expression(args.expression)
    Z = zscore_rows(x)
    try:
        k = cluster_count(x.shape[0])
    except ValueError as exc:
        raise CLIError(f"{args.expression}: {exc}") from None
    assignment = kmeans(Z, k, seed=args.cluster_seed)
    h = incidence_from_clusters(assignment)
    A = threshold_adjacency(coexpression_similarity(Z), args.threshold) if args.graph else None

    out = _out_dir(args.out)
    write_assignments(out / "assignments.tsv", x.gene_ids, assignment.labels)
    atomic_write_text(out / "incidence.coo", incidence_to_coo_text(h))
    if A is not None:
        write_adjacency_edges(out / "adjacency.tsv", x.gene_ids, A)
    print(
        f"{assignment.k} hyperedges (requested {k}, {assignment.n_repaired} singleton merges)"
        + (f", {int(A.sum() // 2)} co-expression edges" if A is not None else "")
    )
    return 0


def cmd_run(args) -> int:
    try:
        params = PropagationConfig(alpha=args.alpha, gamma=args.gamma)
    except ValueError as exc:
        flag = "--alpha" if "alpha" in str(exc) else "--gamma"
        raise CLIError(f"{flag}: {exc}") from None
    if not 0.0 <= args.threshold < 1.0:
        raise CLIError(f"--threshold: must lie in [0, 1), got {args.threshold}")

    x = load_expression(args.expression)
    ann = load_annotations(args.annotations, expression=x)
    try:
        folds = kfold_split(x.shape[0], args.folds, args.fold_seed)
    except ValueError as exc:
        raise CLIError(f"--folds: {exc}") from None
    report = run_experiment(
        x,
        ann,
        args.methods,
        params,
        folds,
        threshold=args.threshold,
        cluster_seed=args.cluster_seed,
    )
    report.metadata["expression_file"] = Path(args.expression).name
    report.metadata["annotation_file"] = Path(args.annotations).name

    # everything is computed before the first write
    json_text = report.to_json() + "\n"
    csv_text = report.to_csv()
    out = _out_dir(args.out)
    atomic_write_text(out / "report.json", json_text)
    atomic_write_text(out / "report.csv", csv_text)
    if report.assignment is not None:
        write_assignments(out / "assignments.tsv", x.gene_ids, report.assignment.labels)
    if args.adjacency and report.adjacency is not None:
        write_adjacency_edges(out / "adjacency.tsv", x.gene_ids, report.adjacency)

    for m, q in report.averages.items():
        print(f"{m:<26s} {100 * q:7.2f}%")
    bad = [m for m, flags in report.converged.items() if not all(flags)]
    if bad:
        print(f"warning: non-converged folds for {', '.join(bad)}", file=sys.stderr)
    return 0


def cmd_inspect(args) -> int:
    x = load_expression(args.expression)
    Z = zscore_rows(x)
    n = x.shape[0]
    k = cluster_count(n)
    assignment = kmeans(Z, k, seed=args.cluster_seed)
    h = incidence_from_clusters(assignment)
    d = compute_degrees(h)
    A = threshold_adjacency(coexpression_similarity(Z), args.threshold)
    graph_degrees = A.sum(axis=1).astype(int)

    stats = {
        "n_genes": n,
        "n_experiments": x.shape[1],
        "hypergraph": {
            "n_edges": h.n_edges,
            "clusters_requested": k,
            "singleton_repairs": assignment.n_repaired,
            "vertex_degree_histogram": _histogram(d.vertex_degrees),
            "edge_degree_histogram": _histogram(d.edge_degrees),
        },
        "graph": {
            "threshold": args.threshold,
            "n_edges": int(A.sum() // 2),
            "isolated_vertices": int(np.sum(graph_degrees == 0)),
            "degree_histogram": _histogram(graph_degrees),
        },
    }
    if n <= args.max_spectrum_n:
        ops = {
            "L_unnorm": unnormalized_laplacian(h, d).values,
            "L_sym": symmetric_laplacian(h, d).values,
            "L_graph": graph_laplacian(A).values,
        }
        spectra = {name: np.linalg.eigvalsh(M) for name, M in ops.items()}
        # L_rw shares the spectrum of L_sym; computed directly as a cross-check
        spectra["L_rw"] = np.sort(np.linalg.eigvals(random_walk_laplacian(h, d).values).real)
        stats["spectrum"] = {
            name: {"min": float(ev[0]), "max": float(ev[-1]), "n_zero": int(np.sum(np.abs(ev) < 1e-9))}
            for name, ev in spectra.items()
        }
    else:
        stats["spectrum"] = f"skipped: n = {n} exceeds --max-spectrum-n {args.max_spectrum_n}"
    print(json.dumps(stats, indent=2))
    return 0


def _histogram(values) -> dict:
    vals, counts = np.unique(np.round(np.asarray(values, dtype=float), 12), return_counts=True)
    return {f"{v:g}": int(c) for v, c in zip(vals, counts)}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="hypergraph-ssl",
        description="Hypergraph Laplacian semi-supervised protein function prediction from expression data.",
    )
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="write a synthetic expression/annotation pair")
    g.add_argument("--genes", type=int, default=300)
    g.add_argument("--experiments", type=int, default=20)
    g.add_argument("--modules", type=int, default=12)
    g.add_argument("--classes", type=int, default=6)
    g.add_argument("--noise", type=float, default=0.3)
    g.add_argument("--seed", type=int, default=DEFAULT_SYNTHETIC_SEED)
    g.add_argument("--out", required=True, metavar="DIR")
    g.set_defaults(func=cmd_generate)

    b = sub.add_parser("build", help="build hyperedges and co-expression graph, write them to disk")
    b.add_argument("--expression", required=True, metavar="PATH")
    b.add_argument("--threshold", type=float, default=DEFAULT_THRESHOLD)
    b.add_argument("--cluster-seed", type=int, default=DEFAULT_CLUSTER_SEED)
    b.add_argument("--no-graph", dest="graph", action="store_false", help="skip the co-expression graph")
    b.add_argument("--out", required=True, metavar="DIR")
    b.set_defaults(func=cmd_build)

    r = sub.add_parser("run", help="cross-validated comparison of methods")
    r.add_argument("--expression", required=True, metavar="PATH")
    r.add_argument("--annotations", required=True, metavar="PATH")
    r.add_argument("--methods", type=_methods, default=list(METHODS), metavar="LIST",
                   help=f"comma-separated subset of {','.join(METHODS)} (default: all)")
    r.add_argument("--alpha", type=float, default=DEFAULT_ALPHA)
    r.add_argument("--gamma", type=float, default=DEFAULT_GAMMA)
    r.add_argument("--threshold", type=float, default=DEFAULT_THRESHOLD)
    r.add_argument("--folds", type=int, default=DEFAULT_FOLDS)
    r.add_argument("--cluster-seed", type=int, default=DEFAULT_CLUSTER_SEED)
    r.add_argument("--fold-seed", type=int, default=DEFAULT_FOLD_SEED)
    r.add_argument("--adjacency", action="store_true", help="also write adjacency.tsv")
    r.add_argument("--out", required=True, metavar="DIR")
    r.set_defaults(func=cmd_run)

    i = sub.add_parser("inspect", help="degree histograms and spectrum extremes")
    i.add_argument("--expression", required=True, metavar="PATH")
    i.add_argument("--threshold", type=float, default=DEFAULT_THRESHOLD)
    i.add_argument("--cluster-seed", type=int, default=DEFAULT_CLUSTER_SEED)
    i.add_argument("--max-spectrum-n", type=int, default=1000)
    i.set_defaults(func=cmd_inspect)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        return args.func(args)
    except (CLIError, DataFormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, RuntimeError, OSError) as exc:
        print(f"error ({args.command}): {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
