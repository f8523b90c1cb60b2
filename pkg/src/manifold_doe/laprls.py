"""Laplacian regularized least squares.

The fitted function is the representer expansion
``f(x) = sum_i alpha_i k(x_i, x)`` over *all* candidates, labeled or not,
and the coefficients minimize

    |y - K_XZ^T alpha|^2 + lambda_a alpha^T K alpha + lambda_i alpha^T K L K alpha.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, EmptyInput, NotPositiveDefinite, SingularSystem
from .kernels import KernelSpec, gram
from .numerics import SpdMatrix


@dataclass(frozen=True)
class LabeledSet:
    indices: np.ndarray
    labels: np.ndarray

    def __post_init__(self):
        idx = np.asarray(self.indices, dtype=np.intp).reshape(-1)
        y = np.asarray(self.labels, dtype=float).reshape(-1)
        if idx.shape != y.shape:
            raise DimensionMismatch(f"{idx.size} indices but {y.size} labels")
        if len(np.unique(idx)) != len(idx):
            raise ValueError("labeled indices must be distinct")
        object.__setattr__(self, "indices", idx)
        object.__setattr__(self, "labels", y)

    def __len__(self):
        return len(self.indices)

    def check_range(self, n: int):
        if len(self) and (self.indices.min() < 0 or self.indices.max() >= n):
            raise DimensionMismatch(f"labeled index out of range for a pool of {n}")


@dataclass(frozen=True)
class LapRlsModel:
    coefficients: np.ndarray
    kernel: KernelSpec
    basis_points: np.ndarray
    lambda_a: float
    lambda_i: float

    def predict(self, x) -> np.ndarray | float:
        """Evaluate the fitted function at one point or a batch of points."""
        x = np.asarray(x, dtype=float)
        d = self.basis_points.shape[1]
        single = x.ndim == 0 or (x.ndim == 1 and x.size == d)
        pts = x.reshape(1, -1) if single else (x[:, None] if x.ndim == 1 else x)
        if pts.shape[1] != d:
            raise DimensionMismatch(f"points have dimension {pts.shape[1]}, model expects {d}")
        out = gram(self.kernel, pts, self.basis_points) @ self.coefficients
        return float(out[0]) if single else out


def predict(model: LapRlsModel, x):
    return model.predict(x)


def _check_lambdas(lambda_a, lambda_i):
    if not lambda_a > 0:
        raise ValueError("lambda_a must be positive")
    if not lambda_i >= 0:
        raise ValueError("lambda_i must be nonnegative")


def fit_coefficients(pool, labeled: LabeledSet, lambda_a: float, lambda_i: float) -> LapRlsModel:
    """Solve ``(K_XZ K_XZ^T + lambda_a K + lambda_i K L K) alpha = K_XZ y``.

    The system matrix is symmetrized and factorized without jitter; a
    failed factorization raises :class:`SingularSystem`.
    """
    _check_lambdas(lambda_a, lambda_i)
    if len(labeled) == 0:
        raise EmptyInput("at least one labeled point is required to fit")
    labeled.check_range(pool.n)
    k = pool.gram
    kxz = k[:, labeled.indices]
    a = kxz @ kxz.T + lambda_a * k
    if lambda_i:
        a = a + lambda_i * pool.klk
    try:
        system = SpdMatrix(a, symmetrize=True)
    except NotPositiveDefinite as exc:
        raise SingularSystem(f"LapRLS system is not positive definite ({exc}); increase lambda_a") from None
    alpha = system.solve(kxz @ labeled.labels)
    return LapRlsModel(alpha, pool.kernel, pool.points, float(lambda_a), float(lambda_i))


def objective(pool, labeled: LabeledSet, lambda_a: float, lambda_i: float, alpha) -> float:
    """Value of the LapRLS objective at coefficient vector ``alpha``."""
    k = pool.gram
    alpha = np.asarray(alpha, dtype=float)
    resid = labeled.labels - k[labeled.indices] @ alpha
    ka = k @ alpha
    return float(resid @ resid + lambda_a * alpha @ ka + lambda_i * ka @ pool.laplacian @ ka)


def fit_beta_linear(features, laplacian, labeled: LabeledSet, lambda_a: float, lambda_i: float) -> np.ndarray:
    """Linear-model parameters ``(Z^T Z + lambda_a I + lambda_i X^T L X)^{-1} Z^T y``.

    Parameters
    ----------
    features : ndarray, shape (n, p)
        Row ``i`` is the feature vector of candidate ``i``.
    laplacian : ndarray, shape (n, n)
    """
    _check_lambdas(lambda_a, lambda_i)
    x = np.asarray(features, dtype=float)
    lap = np.asarray(laplacian, dtype=float)
    if lap.shape != (x.shape[0], x.shape[0]):
        raise DimensionMismatch(f"Laplacian shape {lap.shape} does not match {x.shape[0]} candidates")
    labeled.check_range(x.shape[0])
    z = x[labeled.indices]
    a = z.T @ z + lambda_a * np.eye(x.shape[1])
    if lambda_i:
        a = a + lambda_i * (x.T @ lap @ x)
    return SpdMatrix(a, symmetrize=True).solve(z.T @ labeled.labels)
