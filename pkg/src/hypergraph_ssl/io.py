"""Delimited-text readers and writers for expression, annotation and result files."""
from __future__ import annotations

import csv
import os
import tempfile
from pathlib import Path

import numpy as np

from .evaluation import AnnotationMatrix
from .hyperedges import ExpressionMatrix

__all__ = [
    "DataFormatError",
    "load_expression",
    "load_annotations",
    "write_expression",
    "write_annotations",
    "write_assignments",
    "write_adjacency_edges",
    "atomic_write_text",
]


class DataFormatError(ValueError):
    """Malformed input file; the message names the file and line."""


def _read_table(path):
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise DataFormatError(f"{path}: cannot read ({exc.strerror})") from None
    lines = text.splitlines()
    header_no = next((i for i, ln in enumerate(lines) if ln.strip()), None)
    if header_no is None:
        raise DataFormatError(f"{path}: file is empty")
    header_line = lines[header_no]
    delim = "\t" if "\t" in header_line else ","
    reader = csv.reader(lines[header_no:], delimiter=delim)
    header = [h.strip() for h in next(reader)]
    if len(header) < 2:
        raise DataFormatError(f"{path}:{header_no + 1}: header needs an id column and at least one data column")
    ids, rows, seen = [], [], {}
    for offset, fields in enumerate(reader, start=1):
        lineno = header_no + offset + 1
        if not fields or all(not f.strip() for f in fields):
            continue
        if len(fields) != len(header):
            raise DataFormatError(f"{path}:{lineno}: expected {len(header)} fields, got {len(fields)}")
        gid = fields[0].strip()
        if not gid:
            raise DataFormatError(f"{path}:{lineno}: empty gene id")
        if gid in seen:
            raise DataFormatError(f"{path}:{lineno}: duplicate gene id {gid!r} (first seen on line {seen[gid]})")
        seen[gid] = lineno
        row = []
        for col, cell in enumerate(fields[1:], start=2):
            cell = cell.strip()
            if not cell:
                raise DataFormatError(f"{path}:{lineno}: missing value in column {col} ({header[col - 1]!r})")
            row.append((cell, col))
        ids.append(gid)
        rows.append((lineno, row))
    if not rows:
        raise DataFormatError(f"{path}: no data rows")
    return path, header, ids, rows


def load_expression(path) -> ExpressionMatrix:
    """Read a genes x experiments table.

    The first row holds experiment names, the first column gene ids. Tab or
    comma delimited, detected from the header line.
    """
    path, header, ids, rows = _read_table(path)
    values = np.empty((len(rows), len(header) - 1))
    for i, (lineno, row) in enumerate(rows):
        for j, (cell, col) in enumerate(row):
            try:
                v = float(cell)
            except ValueError:
                raise DataFormatError(f"{path}:{lineno}: non-numeric value {cell!r} in column {col}") from None
            if not np.isfinite(v):
                raise DataFormatError(f"{path}:{lineno}: non-finite value {cell!r} in column {col}")
            values[i, j] = v
    return ExpressionMatrix(values, ids, header[1:])


def load_annotations(path, expression: ExpressionMatrix | None = None) -> AnnotationMatrix:
    """Read a binary genes x classes table.

    With ``expression`` given, rows are reordered to its genes and the two gene
    sets must coincide.
    """
    path, header, ids, rows = _read_table(path)
    values = np.empty((len(rows), len(header) - 1), dtype=np.int8)
    for i, (lineno, row) in enumerate(rows):
        for j, (cell, col) in enumerate(row):
            if cell not in ("0", "1"):
                raise DataFormatError(f"{path}:{lineno}: annotation value {cell!r} in column {col} is not 0 or 1")
            values[i, j] = int(cell)
    ann = AnnotationMatrix(values, header[1:], ids)
    if expression is not None:
        try:
            ann = ann.aligned_to(expression.gene_ids)
        except ValueError as exc:
            raise DataFormatError(f"{path}: {exc}") from None
    return ann


def atomic_write_text(path, text: str) -> None:
    """Write via a temporary file in the same directory, then rename."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        os.chmod(tmp, 0o644)
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _table_text(corner: str, cols, ids, values, fmt) -> str:
    lines = ["\t".join([corner, *cols])]
    for gid, row in zip(ids, values):
        lines.append("\t".join([gid, *(fmt(v) for v in row)]))
    return "\n".join(lines) + "\n"


def write_expression(path, x: ExpressionMatrix) -> None:
    atomic_write_text(path, _table_text("gene", x.experiment_ids, x.gene_ids, x.values, lambda v: repr(float(v))))


def write_annotations(path, ann: AnnotationMatrix) -> None:
    atomic_write_text(path, _table_text("gene", ann.class_ids, ann.gene_ids, ann.values, lambda v: str(int(v))))


def write_assignments(path, gene_ids, labels) -> None:
    """Two columns: gene id, cluster index."""
    lines = ["gene\tcluster"] + [f"{g}\t{int(c)}" for g, c in zip(gene_ids, labels)]
    atomic_write_text(path, "\n".join(lines) + "\n")


def write_adjacency_edges(path, gene_ids, adjacency) -> None:
    """Edge list, one ``gene_i  gene_j`` line per edge with ``i < j``."""
    A = np.asarray(adjacency)
    rows, cols = np.nonzero(np.triu(A, k=1))
    lines = ["gene_i\tgene_j"] + [f"{gene_ids[i]}\t{gene_ids[j]}" for i, j in zip(rows, cols)]
    atomic_write_text(path, "\n".join(lines) + "\n")
