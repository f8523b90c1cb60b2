"""Competing sequential designs: classical D-optimal, random, space-filling.

Every ``*_next`` function receives candidate coordinates and the indices
labeled so far, never label values, and returns one new index.  Ties are
broken toward the lowest index.  The space-filling criteria work on
coordinates rescaled to the unit cube (see
:attr:`CandidatePool.unit_cube_points`).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.spatial.distance import cdist

from .design import FeatureMap, greedy_next
from .errors import PoolExhausted

STRATEGIES = (
    "odoem",
    "classical-d",
    "random",
    "uniform-l2",
    "uniform-minimax",
    "uniform-maximin",
)


@dataclass(frozen=True)
class StrategySpec:
    kind: str
    seed: int | None = None

    def __post_init__(self):
        if self.kind not in STRATEGIES:
            raise ValueError(f"unknown strategy {self.kind!r}; valid: {', '.join(STRATEGIES)}")
        if (self.kind == "random") != (self.seed is not None):
            raise ValueError("a seed is required for, and only for, the random strategy")

    @property
    def label(self) -> str:
        return self.kind if self.seed is None else f"{self.kind}@{self.seed}"


def _unlabeled(n: int, labeled: Sequence[int]) -> np.ndarray:
    mask = np.ones(n, dtype=bool)
    mask[np.asarray(labeled, dtype=np.intp)] = False
    free = np.flatnonzero(mask)
    if free.size == 0:
        raise PoolExhausted("no unlabeled candidates remain")
    return free


def classical_d_next(features: FeatureMap, labeled: Sequence[int], lambda_a: float = 0.01) -> int:
    """Greedy D-optimal pick for kernel ridge, ignoring the manifold."""
    _unlabeled(features.n, labeled)
    return greedy_next(features, lambda_a * np.eye(features.p), labeled)


def random_next(n: int, labeled: Sequence[int], rng: np.random.Generator) -> int:
    free = _unlabeled(n, labeled)
    return int(free[rng.integers(free.size)])


def maximin_next(points, labeled: Sequence[int]) -> int:
    """Farthest-point pick: maximize the distance to the nearest labeled point.

    With nothing labeled, the point farthest from the centroid is taken.
    """
    pts = np.asarray(points, dtype=float)
    free = _unlabeled(len(pts), labeled)
    if len(labeled) == 0:
        dist = np.linalg.norm(pts - pts.mean(axis=0), axis=1)
        return int(free[np.argmax(dist[free])])
    nearest = cdist(pts[free], pts[np.asarray(labeled, dtype=np.intp)]).min(axis=1)
    return int(free[np.argmax(nearest)])


def covering_radius(points, chosen: Sequence[int]) -> float:
    """Largest distance from any pool point to its nearest chosen point."""
    pts = np.asarray(points, dtype=float)
    return float(cdist(pts, pts[np.asarray(chosen, dtype=np.intp)]).min(axis=1).max())


def minimax_next(points, labeled: Sequence[int]) -> int:
    """Pick minimizing the covering radius of ``labeled + [z]``."""
    pts = np.asarray(points, dtype=float)
    free = _unlabeled(len(pts), labeled)
    if len(labeled):
        nearest = cdist(pts, pts[np.asarray(labeled, dtype=np.intp)]).min(axis=1)
    else:
        nearest = np.full(len(pts), np.inf)
    to_free = cdist(pts, pts[free])
    radius = np.minimum(nearest[:, None], to_free).max(axis=0)
    return int(free[np.argmin(radius)])


def _cd_point_terms(u):
    a = np.abs(u - 0.5)
    return np.prod(1.0 + 0.5 * a - 0.5 * a * a, axis=-1)


def _cd_pair_terms(u, v):
    a = np.abs(u - 0.5)
    b = np.abs(v - 0.5)
    return np.prod(
        1.0 + 0.5 * a[:, None, :] + 0.5 * b[None, :, :] - 0.5 * np.abs(u[:, None, :] - v[None, :, :]),
        axis=-1,
    )


def centered_l2_discrepancy(points) -> float:
    """Squared centered L2-discrepancy of a point set in ``[0, 1]^d``."""
    u = np.atleast_2d(np.asarray(points, dtype=float))
    n, d = u.shape
    return float((13.0 / 12.0) ** d - 2.0 / n * _cd_point_terms(u).sum() + _cd_pair_terms(u, u).sum() / n**2)


def l2_discrepancy_next(points, labeled: Sequence[int]) -> int:
    """Pick minimizing the centered L2-discrepancy of ``labeled + [z]``.

    ``points`` must already lie in the unit cube.  The double sum is updated
    incrementally: only the cross terms between the candidate and the
    labeled set are new.
    """
    u = np.asarray(points, dtype=float)
    free = _unlabeled(len(u), labeled)
    lab = np.asarray(labeled, dtype=np.intp)
    k = len(lab) + 1
    d = u.shape[1]
    single = _cd_point_terms(u[free])
    self_pair = np.prod(1.0 + np.abs(u[free] - 0.5), axis=-1)
    if len(lab):
        lab_single = _cd_point_terms(u[lab]).sum()
        lab_pairs = _cd_pair_terms(u[lab], u[lab]).sum()
        cross = _cd_pair_terms(u[free], u[lab]).sum(axis=1)
    else:
        lab_single = lab_pairs = 0.0
        cross = np.zeros(free.size)
    disc = (13.0 / 12.0) ** d - 2.0 / k * (lab_single + single) + (lab_pairs + 2.0 * cross + self_pair) / k**2
    return int(free[np.argmin(disc)])
