"""Planted functional-module data for desk-scale experiments."""
from __future__ import annotations

import numpy as np

from .evaluation import AnnotationMatrix
from .hyperedges import ExpressionMatrix

__all__ = ["generate_synthetic"]


def generate_synthetic(
    n_genes: int = 300,
    n_experiments: int = 20,
    n_modules: int = 12,
    n_classes: int = 6,
    noise: float = 0.3,
    seed: int = 0,
    return_modules: bool = False,
):
    """Expression and annotation matrices with planted co-expressed modules.

    Genes are split into ``n_modules`` groups of near-equal size (randomly
    placed). Each module has a standard-normal mean profile over the
    experiments; every gene is its module's profile plus ``N(0, noise^2)``
    noise. Each class is a random union of between 1 and ``n_modules - 1``
    modules, so annotations are constant within a module.

    Parameters
    ----------
    n_genes, n_experiments, n_modules, n_classes : int
    noise : float
        Standard deviation of the per-gene noise.
    seed : int
    return_modules : bool
        Also return the planted module index of each gene.

    Returns
    -------
    (ExpressionMatrix, AnnotationMatrix) or (ExpressionMatrix, AnnotationMatrix, ndarray)
    """
    if n_modules < 2:
        raise ValueError(f"need at least 2 modules, got {n_modules}")
    if n_genes < 2 * n_modules:
        raise ValueError(f"need n_genes >= 2 * n_modules = {2 * n_modules}, got {n_genes}")
    if n_experiments < 2:
        raise ValueError(f"need at least 2 experiments, got {n_experiments}")
    if n_classes < 1:
        raise ValueError(f"need at least 1 class, got {n_classes}")
    if noise < 0:
        raise ValueError(f"noise must be non-negative, got {noise}")

    rng = np.random.default_rng(seed)
    modules = rng.permutation(np.arange(n_genes) % n_modules)
    profiles = rng.standard_normal((n_modules, n_experiments))
    values = profiles[modules] + noise * rng.standard_normal((n_genes, n_experiments))

    membership = np.zeros((n_modules, n_classes), dtype=np.int8)
    for j in range(n_classes):
        size = int(rng.integers(1, n_modules))
        membership[rng.choice(n_modules, size=size, replace=False), j] = 1
    labels = membership[modules]

    width = len(str(n_genes - 1))
    gene_ids = [f"G{i:0{width}d}" for i in range(n_genes)]
    x = ExpressionMatrix(values, gene_ids, [f"exp{j}" for j in range(n_experiments)])
    ann = AnnotationMatrix(labels, [f"F{j}" for j in range(n_classes)], gene_ids)
    if return_modules:
        return x, ann, modules
    return x, ann
