"""Independent reference implementations used only by the tests.

Each oracle avoids the code path it checks: no Cholesky factors, no
incremental updates, plain loops where the package vectorizes.
"""

import itertools

import numpy as np


def cofactor_det(a):
    """Determinant by Laplace expansion along the first row."""
    a = np.asarray(a, dtype=float)
    n = a.shape[0]
    if n == 1:
        return a[0, 0]
    if n == 2:
        return a[0, 0] * a[1, 1] - a[0, 1] * a[1, 0]
    total = 0.0
    for j in range(n):
        minor = np.delete(a[1:], j, axis=1)
        total += (-1) ** j * a[0, j] * cofactor_det(minor)
    return total


def knn_edges(points, k):
    """Edge set of the symmetrized kNN graph by an O(n^2) scan per node."""
    pts = np.asarray(points, dtype=float)
    n = len(pts)
    edges = set()
    for i in range(n):
        dists = []
        for j in range(n):
            if j != i:
                dists.append((float(np.sum((pts[i] - pts[j]) ** 2)), j))
        dists.sort()
        for _, j in dists[:k]:
            edges.add((min(i, j), max(i, j)))
    return edges


def kernel_ridge(k_all, idx, y, lam):
    """Representer coefficients over all points for ridge on the labeled rows.

    Minimizes ``|y - K[idx] a|^2 + lam a^T K a`` by setting the gradient to
    zero with a general (LU) solve.
    """
    k_all = np.asarray(k_all, dtype=float)
    kz = k_all[idx]
    return np.linalg.solve(kz.T @ kz + lam * k_all, kz.T @ y)


def logdet_info(weights, x, c):
    m = x.T @ (np.asarray(weights)[:, None] * x) + c
    sign, val = np.linalg.slogdet(m)
    assert sign > 0
    return val


def multiplicative_weights(x, c, tol=1e-8, max_iter=500_000):
    """D-optimal weights on the simplex by multiplicative updates.

    ``w_i <- w_i d_i / (p - Tr(M^-1 C))``; the normalizer equals
    ``sum_i w_i d_i`` so each update stays on the simplex.  Stops when the
    largest weight change falls below ``tol``.
    """
    n, p = x.shape
    w = np.full(n, 1.0 / n)
    for _ in range(max_iter):
        m = x.T @ (w[:, None] * x) + c
        minv = np.linalg.inv(m)
        d = np.einsum("ij,jk,ik->i", x, minv, x)
        new = w * d / (w @ d)
        if np.max(np.abs(new - w)) < tol:
            w = new
            break
        w = new
    return w, logdet_info(w, x, c)


def covering_radius(points, chosen):
    pts = np.asarray(points, dtype=float)
    return max(min(np.linalg.norm(pts[i] - pts[j]) for j in chosen) for i in range(len(pts)))


def greedy_by_exhaustion(score, n, picks):
    """Greedy sequence where each pick minimizes ``score(chosen + [z])``."""
    chosen = []
    for _ in range(picks):
        best = min((z for z in range(n) if z not in chosen), key=lambda z: (score(chosen + [z]), z))
        chosen.append(best)
    return chosen


def all_pairs(n):
    return itertools.combinations(range(n), 2)
