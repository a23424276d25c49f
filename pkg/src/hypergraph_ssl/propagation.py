"""Label propagation on hypergraph operators.

Three ways to turn an initial label matrix ``Y`` (entries +1, -1, 0) into a
real-valued estimate ``F``:

* iterate ``F <- alpha S F + (1 - alpha) Y`` with ``S`` = ``S_rw`` or ``S_sym``,
* the fixed point of that iteration, ``(1 - alpha)(I - alpha S)^{-1} Y``,
* the regularized solutions ``gamma (L + gamma I)^{-1} Y`` for ``L`` = un-normalized
  or symmetric normalized Laplacian.

Predictions are ``sign(F)`` with zeros sent to -1.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .hypergraph import OperatorMatrix

__all__ = [
    "PropagationConfig",
    "IterationResult",
    "ConvergenceWarning",
    "build_initial_labels",
    "propagate_iterative",
    "propagate_closed_form",
    "solve_unnormalized",
    "solve_sym_regularized",
    "predict",
    "alpha_from_gamma",
]


class ConvergenceWarning(RuntimeWarning):
    pass


@dataclass(frozen=True)
class PropagationConfig:
    """Parameters shared by the propagation solvers.

    Defaults are ``alpha = 0.85`` and ``gamma = 1``. The iterative solver stops
    once the max-abs change between sweeps drops below ``tolerance``.
    """

    alpha: float = 0.85
    gamma: float = 1.0
    tolerance: float = 1e-6
    max_iterations: int = 1000

    def __post_init__(self):
        if not 0.0 < self.alpha < 1.0:
            raise ValueError(f"alpha must lie in the open interval (0, 1) for convergence, got {self.alpha}")
        if not self.gamma > 0.0:
            raise ValueError(f"gamma must be positive, got {self.gamma}")
        if not self.tolerance > 0.0:
            raise ValueError(f"tolerance must be positive, got {self.tolerance}")
        if int(self.max_iterations) != self.max_iterations or self.max_iterations < 1:
            raise ValueError(f"max_iterations must be a positive integer, got {self.max_iterations}")


@dataclass(frozen=True)
class IterationResult:
    F: np.ndarray
    converged: bool
    n_iterations: int
    final_change: float


def alpha_from_gamma(gamma: float) -> float:
    """The propagation weight matching regularization ``gamma``: ``1 / (1 + gamma)``."""
    return 1.0 / (1.0 + gamma)


def build_initial_labels(annotations, train_mask) -> np.ndarray:
    """Map binary annotations to the initial label matrix.

    Training rows become +1 (member) / -1 (non-member); all other rows are 0.

    Parameters
    ----------
    annotations : array_like, shape (n, c)
        Binary membership matrix.
    train_mask : array_like of bool, shape (n,)

    Returns
    -------
    numpy.ndarray, shape (n, c)
    """
    A = np.asarray(annotations)
    if A.ndim == 1:
        A = A[:, None]
    mask = np.asarray(train_mask, dtype=bool).reshape(-1)
    if A.ndim != 2 or mask.shape[0] != A.shape[0]:
        raise ValueError(f"train_mask length {mask.shape[0]} does not match {A.shape[0]} annotation rows")
    if A.shape[1] < 1:
        raise ValueError("annotations must have at least one class column")
    if not np.all((A == 0) | (A == 1)):
        raise ValueError("annotations must be binary (0/1)")
    if not mask.any():
        raise ValueError("training set is empty")
    Y = np.where(A == 1, 1.0, -1.0)
    Y[~mask] = 0.0
    return Y


def _as_2d(y):
    Y = np.asarray(y, dtype=np.float64)
    return (Y[:, None], True) if Y.ndim == 1 else (Y, False)


def _check_square(S: np.ndarray, Y: np.ndarray) -> None:
    if S.ndim != 2 or S.shape[0] != S.shape[1]:
        raise ValueError(f"operator must be square, got shape {S.shape}")
    if Y.shape[0] != S.shape[0]:
        raise ValueError(f"label matrix has {Y.shape[0]} rows, operator has {S.shape[0]}")


def propagate_iterative(s: OperatorMatrix, y, cfg: PropagationConfig = PropagationConfig()) -> IterationResult:
    """Run ``F(t+1) = alpha S F(t) + (1 - alpha) Y`` from ``F(0) = Y``.

    Stops at the first sweep whose max-abs change is below ``cfg.tolerance``.
    If ``cfg.max_iterations`` is exhausted first, the last iterate is returned
    with ``converged=False`` and a :class:`ConvergenceWarning` is issued.
    """
    S = np.asarray(s, dtype=np.float64)
    Y, squeeze = _as_2d(y)
    _check_square(S, Y)
    a = cfg.alpha
    base = (1.0 - a) * Y
    F = Y.copy()
    change = np.inf
    converged = False
    t = 0
    while t < cfg.max_iterations:
        F_next = a * (S @ F) + base
        change = float(np.max(np.abs(F_next - F))) if F.size else 0.0
        F = F_next
        t += 1
        if change < cfg.tolerance:
            converged = True
            break
    if not converged:
        warnings.warn(
            f"label propagation did not converge in {cfg.max_iterations} iterations "
            f"(last change {change:.3g}, tolerance {cfg.tolerance:.3g})",
            ConvergenceWarning,
            stacklevel=2,
        )
    return IterationResult(F[:, 0] if squeeze else F, converged, t, change)


def _spd_solve(M: np.ndarray, B: np.ndarray) -> np.ndarray:
    try:
        factor = scipy.linalg.cho_factor(M, lower=True, check_finite=False)
    except np.linalg.LinAlgError as exc:
        raise RuntimeError("system matrix is not positive definite") from exc
    return scipy.linalg.cho_solve(factor, B, check_finite=False)


def propagate_closed_form(s: OperatorMatrix, y, alpha: float) -> np.ndarray:
    """Fixed point of the iteration, ``(1 - alpha)(I - alpha S)^{-1} Y``.

    ``S_sym`` gives an SPD system solved by Cholesky. ``S_rw`` is reduced to the
    same SPD system via ``S_rw = D^{-1/2} S_sym D^{1/2}`` when the operator carries
    its vertex degrees; otherwise a general LU solve is used.
    """
    if not 0.0 <= alpha < 1.0:
        raise ValueError(f"alpha must lie in [0, 1), got {alpha}")
    S = np.asarray(s, dtype=np.float64)
    Y, squeeze = _as_2d(y)
    _check_square(S, Y)
    n = S.shape[0]
    kind = getattr(s, "kind", None)
    dv = getattr(s, "vertex_degrees", None)
    rhs = (1.0 - alpha) * Y

    if kind == "S_sym":
        F = _spd_solve(np.eye(n) - alpha * S, rhs)
    elif kind == "S_rw" and dv is not None:
        root = np.sqrt(dv)
        S_sym = S * root[:, None] / root[None, :]
        S_sym = 0.5 * (S_sym + S_sym.T)
        F = _spd_solve(np.eye(n) - alpha * S_sym, rhs * root[:, None]) / root[:, None]
    else:
        F = scipy.linalg.solve(np.eye(n) - alpha * S, rhs)
    return F[:, 0] if squeeze else F


def _regularized(l, y, gamma: float) -> np.ndarray:
    if not gamma > 0:
        raise ValueError(f"gamma must be positive, got {gamma}")
    L = np.asarray(l, dtype=np.float64)
    Y, squeeze = _as_2d(y)
    _check_square(L, Y)
    F = _spd_solve(L + gamma * np.eye(L.shape[0]), gamma * Y)
    return F[:, 0] if squeeze else F


def solve_unnormalized(l: OperatorMatrix, y, gamma: float = 1.0) -> np.ndarray:
    """``gamma (L + gamma I)^{-1} Y``, the minimizer of ``tr(F^T L F) + gamma ||F - Y||^2``.

    Works for any symmetric PSD ``L``, including the graph Laplacian ``D - A``.
    """
    return _regularized(l, y, gamma)


def solve_sym_regularized(lsym: OperatorMatrix, y, gamma: float = 1.0) -> np.ndarray:
    """``gamma (L_sym + gamma I)^{-1} Y``.

    Identical to ``propagate_closed_form(S_sym, Y, 1 / (1 + gamma))``.
    """
    return _regularized(lsym, y, gamma)


def predict(f, zero_tol: float = 1e-12) -> np.ndarray:
    """Sign of the estimate as int8 in {+1, -1}; ties map to -1.

    Entries with ``|F| <= zero_tol * max(1, max|F|)`` count as ties, so a value
    that is zero in exact arithmetic but carries solver roundoff is not
    predicted positive.
    """
    F = np.asarray(f, dtype=np.float64)
    scale = max(1.0, float(np.max(np.abs(F)))) if F.size else 1.0
    return np.where(F > zero_tol * scale, 1, -1).astype(np.int8)
