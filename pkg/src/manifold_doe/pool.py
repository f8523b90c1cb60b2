"""The candidate pool: points plus the Gram and Laplacian built on them."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .graph import knn_graph, laplacian
from .kernels import KernelSpec, gram


@dataclass(frozen=True, eq=False)
class CandidatePool:
    """Everything derived from the unlabeled candidate points.

    ``gram`` is the kernel matrix ``K`` over all ``n`` candidates and
    ``laplacian`` the graph Laplacian ``L`` on the same points.  Both are
    built once and shared by every strategy run on the pool.
    """

    points: np.ndarray
    kernel: KernelSpec
    gram: np.ndarray
    laplacian: np.ndarray
    meta: dict = field(default_factory=dict)

    @classmethod
    def build(cls, points, kernel: KernelSpec | None = None, knn_k: int = 7,
              weighting: str = "binary", heat_t: float | None = None) -> "CandidatePool":
        kernel = kernel or KernelSpec()
        pts = np.asarray(points, dtype=float)
        if pts.ndim == 1:
            pts = pts[:, None]
        k = gram(kernel, pts)
        lap = laplacian(knn_graph(pts, knn_k, weighting=weighting, heat_t=heat_t))
        meta = {"knn_k": knn_k, "weighting": weighting}
        return cls(pts, kernel, k, lap, meta)

    @property
    def n(self) -> int:
        return self.points.shape[0]

    @cached_property
    def klk(self) -> np.ndarray:
        """``K L K``, the manifold penalty in representer coordinates."""
        m = self.gram @ self.laplacian @ self.gram
        return 0.5 * (m + m.T)

    @cached_property
    def unit_cube_points(self) -> np.ndarray:
        """Coordinates min-max rescaled to ``[0, 1]`` per dimension.

        Constant coordinates map to 0.5.
        """
        lo = self.points.min(axis=0)
        span = self.points.max(axis=0) - lo
        out = np.full_like(self.points, 0.5)
        ok = span > 0
        out[:, ok] = (self.points[:, ok] - lo[ok]) / span[ok]
        return out
