"""Dense SPD linear algebra used throughout the package.

Every information matrix handled here contains ``lambda_a * I`` with
``lambda_a > 0``, so a plain (unpivoted) Cholesky factorization is always
expected to succeed.  No jitter is ever added: a failed factorization is a
configuration problem and is reported as :class:`NotPositiveDefinite`.
"""

from __future__ import annotations

import numpy as np
from scipy.linalg import solve_triangular

from .errors import DimensionMismatch, NotPositiveDefinite

SYMMETRY_RTOL = 1e-12


class SpdMatrix:
    """Symmetric positive definite matrix with its lower Cholesky factor.

    The factor is computed eagerly so instances are immutable and can be
    shared read-only between threads.

    Parameters
    ----------
    entries : array_like, shape (p, p)
        Symmetric matrix.  Asymmetry above ``1e-12`` relative is rejected.
    symmetrize : bool
        Replace ``entries`` by ``(A + A.T) / 2`` before the symmetry check.
    """

    __slots__ = ("_a", "_factor")

    def __init__(self, entries, symmetrize: bool = False):
        a = np.array(entries, dtype=float, copy=True)
        if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] == 0:
            raise DimensionMismatch(f"expected a nonempty square matrix, got shape {a.shape}")
        if symmetrize:
            a = 0.5 * (a + a.T)
        scale = max(np.max(np.abs(a)), np.finfo(float).tiny)
        if np.max(np.abs(a - a.T)) > SYMMETRY_RTOL * scale:
            raise DimensionMismatch("matrix is not symmetric")
        if not np.all(np.isfinite(a)):
            raise NotPositiveDefinite("matrix has non-finite entries")
        try:
            factor = np.linalg.cholesky(a)
        except np.linalg.LinAlgError as exc:
            raise NotPositiveDefinite(str(exc)) from None
        if not np.all(np.diag(factor) > 0):
            raise NotPositiveDefinite("non-positive pivot in Cholesky factor")
        a.setflags(write=False)
        factor.setflags(write=False)
        self._a = a
        self._factor = factor

    @property
    def entries(self) -> np.ndarray:
        return self._a

    @property
    def factor(self) -> np.ndarray:
        """Lower triangular ``F`` with ``F @ F.T == entries``."""
        return self._factor

    @property
    def dim(self) -> int:
        return self._a.shape[0]

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self._a, dtype=dtype)

    def __repr__(self) -> str:
        return f"SpdMatrix(dim={self.dim})"

    def logdet(self) -> float:
        return logdet(self)

    def solve(self, b) -> np.ndarray:
        return solve(self, b)

    def whiten(self, b) -> np.ndarray:
        """Return ``F^{-1} b`` so that ``b.T A^{-1} b == |F^{-1} b|^2``."""
        b = np.asarray(b, dtype=float)
        if b.shape[0] != self.dim:
            raise DimensionMismatch(f"right-hand side has {b.shape[0]} rows, matrix has dim {self.dim}")
        return solve_triangular(self._factor, b, lower=True, check_finite=False)


def as_spd(a) -> SpdMatrix:
    return a if isinstance(a, SpdMatrix) else SpdMatrix(a)


def logdet(a) -> float:
    """Log-determinant from the Cholesky pivots: ``sum(log(F_ii ** 2))``."""
    a = as_spd(a)
    return float(2.0 * np.sum(np.log(np.diag(a.factor))))


def solve(a, b) -> np.ndarray:
    """Solve ``A x = b`` with two triangular solves.

    ``b`` may be a vector or a matrix of right-hand sides.
    """
    a = as_spd(a)
    y = a.whiten(b)
    return solve_triangular(a.factor, y, lower=True, trans="T", check_finite=False)


def inverse_trace_product(a, c) -> float:
    """``Tr(A^{-1} C)`` for SPD ``A`` and square ``C``."""
    a = as_spd(a)
    c = np.asarray(c, dtype=float)
    if c.shape != (a.dim, a.dim):
        raise DimensionMismatch(f"C has shape {c.shape}, expected {(a.dim, a.dim)}")
    return float(np.trace(solve(a, c)))


def rank_one_det_ratio(a, g) -> float:
    """``|A + g g^T| / |A|`` by the matrix determinant lemma.

    Equals ``1 + g^T A^{-1} g`` and is therefore at least 1.
    """
    a = as_spd(a)
    w = a.whiten(np.asarray(g, dtype=float).reshape(-1))
    return float(1.0 + w @ w)
