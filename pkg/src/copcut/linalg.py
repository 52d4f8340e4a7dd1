"""Symmetric-matrix vectorization maps and positive-definite linear solves.

The vectorization order is column-by-column over the upper triangle:
(X11, X12, X22, X13, X23, X33, ...).  Note that the Euclidean norm of
this vector single-counts off-diagonal entries, so it is *not* the
Frobenius norm.
"""

from __future__ import annotations

import functools
import logging
import math

import numpy as np
from scipy.linalg import cho_factor, cho_solve

logger = logging.getLogger("copcut")

# Diagonal-shift ladder used when a nominally positive definite system
# turns out to be numerically indefinite (late cutting-plane iterations).
SHIFT_FIRST = 1e-12
SHIFT_MAX = 1e-6


class SingularMatrixError(np.linalg.LinAlgError):
    """Factorization failed even after the maximum diagonal shift."""


def require_symmetric(M, tol: float = 0.0, name: str = "matrix") -> np.ndarray:
    """Return M as a float array, raising ValueError unless it is square and
    symmetric within ``tol * (1 + max|M|)``."""
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError(f"{name} must be square, got shape {M.shape}")
    if M.size and not np.all(np.isfinite(M)):
        raise ValueError(f"{name} contains non-finite entries")
    skew = float(np.max(np.abs(M - M.T))) if M.size else 0.0
    scale = 1.0 + (float(np.max(np.abs(M))) if M.size else 0.0)
    if skew > tol * scale:
        raise ValueError(f"{name} is not symmetric (max asymmetry {skew:.3e})")
    return M


def vec_length(dim: int) -> int:
    """Length of the vectorized upper triangle of a dim x dim matrix."""
    return dim * (dim + 1) // 2


def vec_dim(length: int) -> int:
    """Matrix dimension whose upper triangle has ``length`` entries."""
    if length < 1:
        raise ValueError(f"vector length must be positive, got {length}")
    dim = (math.isqrt(8 * length + 1) - 1) // 2
    if vec_length(dim) != length:
        raise ValueError(f"{length} is not a triangular number")
    return dim


@functools.lru_cache(maxsize=None)
def _upper_indices(dim: int):
    """(rows, cols) index arrays for the column-major upper triangle."""
    rows = np.array([i for j in range(dim) for i in range(j + 1)], dtype=np.intp)
    cols = np.array([j for j in range(dim) for i in range(j + 1)], dtype=np.intp)
    return rows, cols


def vec(X) -> np.ndarray:
    """Stack the upper triangle of a symmetric matrix column by column."""
    X = require_symmetric(X, name="vec input")
    rows, cols = _upper_indices(X.shape[0])
    return X[rows, cols].copy()


def mat(x) -> np.ndarray:
    """Inverse of :func:`vec`: rebuild the symmetric matrix from its
    stacked upper triangle."""
    x = np.asarray(x, dtype=float).ravel()
    dim = vec_dim(x.size)
    rows, cols = _upper_indices(dim)
    X = np.zeros((dim, dim))
    X[rows, cols] = x
    X[cols, rows] = x
    return X


def mat_adjoint(C) -> np.ndarray:
    """Adjoint of :func:`mat`: the vector c with dot(c, x) == <C, mat(x)>.

    Diagonal entries are copied, off-diagonal entries doubled.
    """
    C = require_symmetric(C, name="mat_adjoint input")
    rows, cols = _upper_indices(C.shape[0])
    c = C[rows, cols].copy()
    c[rows != cols] *= 2.0
    return c


def factor_pd(M: np.ndarray):
    """Cholesky-factor a symmetric matrix, escalating a diagonal shift
    (1e-12, x10 per retry, up to 1e-6) if it is numerically indefinite.

    Returns ``(factor, shift_used)`` where factor feeds scipy's cho_solve.
    Raises SingularMatrixError once the shift ladder is exhausted.
    """
    try:
        return cho_factor(M, lower=True), 0.0
    except np.linalg.LinAlgError:
        pass
    shift = SHIFT_FIRST
    eye = np.eye(M.shape[0])
    while shift <= SHIFT_MAX * (1.0 + 1e-9):
        try:
            factor = cho_factor(M + shift * eye, lower=True)
            logger.debug("factor_pd applied diagonal shift %.1e", shift)
            return factor, shift
        except np.linalg.LinAlgError:
            shift *= 10.0
    raise SingularMatrixError(
        f"matrix not positive definite even with diagonal shift {SHIFT_MAX:.0e}"
    )


def solve_pd(M, rhs) -> np.ndarray:
    """Solve M v = rhs for symmetric positive definite M.

    Falls back to a diagonally shifted factorization when M is barely
    indefinite; the shift used is reported on the module logger.
    """
    M = require_symmetric(M, tol=1e-10, name="solve_pd matrix")
    rhs = np.asarray(rhs, dtype=float)
    factor, shift = factor_pd(0.5 * (M + M.T))
    if shift > 0.0:
        logger.info("solve_pd used diagonal shift %.1e", shift)
    return cho_solve(factor, rhs)
