"""Mercer kernels and Gram matrix assembly."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import cdist

from .errors import DimensionMismatch, EmptyInput

KINDS = ("rbf", "linear")
RBF_CONVENTIONS = ("lengthscale", "gamma")


@dataclass(frozen=True)
class KernelSpec:
    """Kernel family and its single hyperparameter.

    For ``kind="rbf"`` the ``range`` parameter is read according to
    ``convention``:

    * ``"lengthscale"``: ``k(x, y) = exp(-|x - y|^2 / (2 range^2))``
    * ``"gamma"``: ``k(x, y) = exp(-range * |x - y|^2)``
    """

    kind: str = "rbf"
    range: float = 0.01
    convention: str = "lengthscale"

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown kernel kind {self.kind!r}; expected one of {KINDS}")
        if self.convention not in RBF_CONVENTIONS:
            raise ValueError(f"unknown RBF convention {self.convention!r}")
        if self.kind == "rbf" and not self.range > 0:
            raise ValueError("RBF range must be positive")

    def _rbf_from_sqdist(self, sq):
        if self.convention == "gamma":
            return np.exp(-self.range * sq)
        return np.exp(-sq / (2.0 * self.range**2))


def kernel_eval(spec: KernelSpec, x, x2) -> float:
    x = np.asarray(x, dtype=float).reshape(-1)
    x2 = np.asarray(x2, dtype=float).reshape(-1)
    if x.shape != x2.shape:
        raise DimensionMismatch(f"points have dimensions {x.size} and {x2.size}")
    if spec.kind == "linear":
        return float(x @ x2)
    diff = x - x2
    return float(spec._rbf_from_sqdist(diff @ diff))


def _as_points(points, name):
    pts = np.asarray(points, dtype=float)
    if pts.ndim == 1:
        pts = pts[:, None]
    if pts.ndim != 2 or pts.shape[0] == 0:
        raise EmptyInput(f"{name} must be a nonempty list of points")
    return pts


def gram(spec: KernelSpec, rows, cols=None) -> np.ndarray:
    """Kernel matrix with entry ``(i, j) = k(rows[i], cols[j])``.

    With ``cols`` omitted the square Gram matrix of ``rows`` is returned;
    it is exactly symmetric because the lower triangle is mirrored from the
    upper one.
    """
    square = cols is None
    a = _as_points(rows, "rows")
    b = a if square else _as_points(cols, "cols")
    if a.shape[1] != b.shape[1]:
        raise DimensionMismatch(f"row points have dimension {a.shape[1]}, column points {b.shape[1]}")
    if spec.kind == "linear":
        k = a @ b.T
    else:
        k = spec._rbf_from_sqdist(cdist(a, b, "sqeuclidean"))
    if square:
        iu = np.triu_indices(k.shape[0], 1)
        k[iu[1], iu[0]] = k[iu]
        if spec.kind == "rbf":
            np.fill_diagonal(k, 1.0)
    return k
