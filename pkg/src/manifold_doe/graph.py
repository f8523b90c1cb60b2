"""kNN adjacency graphs and their combinatorial Laplacians."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import cdist

from .errors import TooFewPoints


@dataclass(frozen=True)
class AdjacencyGraph:
    """Undirected weighted graph on ``n`` nodes.

    ``edges`` holds pairs ``(i, j)`` with ``i < j``; ``weights[e]`` is the
    nonnegative weight of ``edges[e]``.
    """

    n: int
    edges: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        edges = np.asarray(self.edges, dtype=np.intp).reshape(-1, 2)
        weights = np.asarray(self.weights, dtype=float).reshape(-1)
        if edges.shape[0] != weights.shape[0]:
            raise ValueError("one weight per edge is required")
        if np.any(edges[:, 0] >= edges[:, 1]):
            raise ValueError("edges must satisfy i < j (no self-loops)")
        if edges.size and (edges.min() < 0 or edges.max() >= self.n):
            raise ValueError("edge endpoint out of range")
        if np.any(weights < 0):
            raise ValueError("edge weights must be nonnegative")
        if len({(int(i), int(j)) for i, j in edges}) != len(edges):
            raise ValueError("duplicate edge")
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "weights", weights)

    def weight_matrix(self) -> np.ndarray:
        w = np.zeros((self.n, self.n))
        i, j = self.edges.T
        w[i, j] = self.weights
        w[j, i] = self.weights
        return w


def knn_graph(points, k: int = 7, weighting: str = "binary", heat_t: float | None = None) -> AdjacencyGraph:
    """Symmetrized k-nearest-neighbor graph.

    An edge joins ``i`` and ``j`` when either is among the other's ``k``
    nearest Euclidean neighbors.  Distance ties go to the lower index.

    Parameters
    ----------
    points : array_like, shape (n, d)
    k : int
        Neighbors per node, ``1 <= k < n``.
    weighting : {"binary", "heat"}
        ``"heat"`` uses ``exp(-|x_i - x_j|^2 / (2 t^2))``.
    heat_t : float, optional
        Heat-kernel width; defaults to the median edge length.
    """
    pts = np.asarray(points, dtype=float)
    if pts.ndim == 1:
        pts = pts[:, None]
    n = pts.shape[0]
    if k < 1:
        raise ValueError("k must be at least 1")
    if n <= k:
        raise TooFewPoints(f"need more than k={k} points, got {n}")
    if weighting not in ("binary", "heat"):
        raise ValueError(f"unknown weighting {weighting!r}")

    sq = cdist(pts, pts, "sqeuclidean")
    np.fill_diagonal(sq, np.inf)
    # stable sort keeps the lower index first among equal distances
    nbrs = np.argsort(sq, axis=1, kind="stable")[:, :k]
    adj = np.zeros((n, n), dtype=bool)
    adj[np.repeat(np.arange(n), k), nbrs.ravel()] = True
    adj |= adj.T
    i, j = np.nonzero(np.triu(adj, 1))
    edges = np.column_stack([i, j])

    if weighting == "binary":
        weights = np.ones(len(edges))
    else:
        d2 = sq[i, j]
        t = heat_t if heat_t is not None else float(np.sqrt(np.median(d2)))
        if not t > 0:
            raise ValueError("heat kernel width must be positive")
        weights = np.exp(-d2 / (2.0 * t * t))
    return AdjacencyGraph(n, edges, weights)


def laplacian(graph: AdjacencyGraph) -> np.ndarray:
    """Combinatorial Laplacian ``L = D - W``."""
    w = graph.weight_matrix()
    lap = -w
    lap[np.diag_indices(graph.n)] = w.sum(axis=1)
    return lap
