"""D/G-optimal designs for the Laplacian-regularized linear model.

A continuous design puts weights ``q_i`` (summing to one) on candidates
``z_i``.  Its information matrix is

    M(eps) = sum_i q_i g(z_i) g(z_i)^T + C,    C = lambda_a I + lambda_i X^T L X,

and the (unit noise) prediction variance at ``z`` is ``d(z) = g(z)^T M^{-1} g(z)``.
For every design ``max_z d(z) >= p - Tr(M^{-1} C)``, with equality exactly at
the D-optimal design, which is also G-optimal.  The difference between the
two sides is the *equivalence gap* used below as a convergence certificate.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.optimize import brentq

from .errors import AlreadyOptimal, BudgetExceedsPool, DimensionMismatch
from .numerics import SpdMatrix, as_spd, inverse_trace_product

STEP_RULES = ("paper-bound", "line-search")
PRUNE_THRESHOLD = 1e-10
SATURATED_WEIGHT = 1.0 - 1e-9


@dataclass(frozen=True)
class FeatureMap:
    """Feature vectors ``g(x_i)`` of every candidate, stacked as rows.

    ``kind`` is ``"explicit"`` when rows are the ambient coordinates
    themselves, ``"empirical-kernel"`` when row ``i`` is column ``i`` of the
    Gram matrix (so ``p == n``).
    """

    kind: str
    matrix: np.ndarray

    def __post_init__(self):
        x = np.asarray(self.matrix, dtype=float)
        if x.ndim == 1:
            x = x[:, None]
        if x.ndim != 2 or x.shape[0] == 0:
            raise DimensionMismatch("feature matrix must be a nonempty 2-D array")
        if self.kind == "empirical-kernel" and x.shape[0] != x.shape[1]:
            raise DimensionMismatch("an empirical kernel map needs a square Gram matrix")
        object.__setattr__(self, "matrix", x)

    @classmethod
    def explicit(cls, points) -> "FeatureMap":
        return cls("explicit", points)

    @classmethod
    def empirical_kernel(cls, gram) -> "FeatureMap":
        return cls("empirical-kernel", gram)

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    @property
    def p(self) -> int:
        return self.matrix.shape[1]

    def feature_of(self, index: int) -> np.ndarray:
        return self.matrix[index]


@dataclass(frozen=True)
class ContinuousDesign:
    """Weights on a finite support of candidate indices.

    The empty design (no support) is allowed; its information matrix is ``C``.
    """

    support: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        s = np.asarray(self.support, dtype=np.intp).reshape(-1)
        w = np.asarray(self.weights, dtype=float).reshape(-1)
        if s.shape != w.shape:
            raise DimensionMismatch("support and weights differ in length")
        if len(np.unique(s)) != len(s):
            raise ValueError("support indices must be distinct")
        if np.any(w < 0):
            raise ValueError("weights must be nonnegative")
        if len(w) and abs(w.sum() - 1.0) > 1e-12:
            raise ValueError(f"weights sum to {w.sum()!r}, not 1")
        object.__setattr__(self, "support", s)
        object.__setattr__(self, "weights", w)

    @classmethod
    def empty(cls) -> "ContinuousDesign":
        return cls(np.zeros(0, dtype=np.intp), np.zeros(0))

    @classmethod
    def uniform(cls, indices: Sequence[int]) -> "ContinuousDesign":
        idx = np.asarray(indices, dtype=np.intp)
        return cls(idx, np.full(len(idx), 1.0 / len(idx)))

    @classmethod
    def point_mass(cls, index: int) -> "ContinuousDesign":
        return cls([index], [1.0])

    @classmethod
    def from_dense(cls, weights, prune: float = 0.0) -> "ContinuousDesign":
        w = np.asarray(weights, dtype=float)
        keep = np.flatnonzero(w > prune)
        q = w[keep]
        return cls(keep, q / q.sum()) if len(keep) else cls.empty()

    def dense(self, n: int) -> np.ndarray:
        w = np.zeros(n)
        w[self.support] = self.weights
        return w

    def mix(self, other: "ContinuousDesign", a: float) -> "ContinuousDesign":
        """The design ``(1 - a) * self + a * other``."""
        n = int(max(self.support.max(initial=-1), other.support.max(initial=-1))) + 1
        w = (1.0 - a) * self.dense(n) + a * other.dense(n)
        keep = np.flatnonzero(w > 0)
        return ContinuousDesign(keep, w[keep] / w[keep].sum())

    def __len__(self):
        return len(self.support)


def regularizer(features: FeatureMap, laplacian, lambda_a: float, lambda_i: float) -> SpdMatrix:
    """``C = lambda_a I_p + lambda_i X^T L X``."""
    if not lambda_a > 0:
        raise ValueError("lambda_a must be positive")
    if not lambda_i >= 0:
        raise ValueError("lambda_i must be nonnegative")
    x = features.matrix
    lap = np.asarray(laplacian, dtype=float)
    if lap.shape != (features.n, features.n):
        raise DimensionMismatch(f"Laplacian has shape {lap.shape}, pool has {features.n} candidates")
    c = lambda_a * np.eye(features.p)
    if lambda_i:
        c = c + lambda_i * (x.T @ lap @ x)
    return SpdMatrix(c, symmetrize=True)


def moment_matrix(weights, features: FeatureMap) -> np.ndarray:
    """``sum_i w_i g_i g_i^T`` for a dense weight vector over all candidates."""
    x = features.matrix
    w = np.asarray(weights, dtype=float)
    nz = np.flatnonzero(w)
    xs = x[nz]
    return xs.T @ (w[nz, None] * xs)


def information_matrix(design: ContinuousDesign, features: FeatureMap, C) -> SpdMatrix:
    c = np.asarray(C, dtype=float)
    if c.shape != (features.p, features.p):
        raise DimensionMismatch(f"C has shape {c.shape}, expected {(features.p, features.p)}")
    xs = features.matrix[design.support]
    m = xs.T @ (design.weights[:, None] * xs) + c
    return SpdMatrix(m, symmetrize=True)


def prediction_variances(M, features: FeatureMap) -> np.ndarray:
    """``d(z) = g(z)^T M^{-1} g(z)`` for every candidate ``z``."""
    w = as_spd(M).whiten(features.matrix.T)
    return np.einsum("ij,ij->j", w, w)


@dataclass
class DesignState:
    """A design with its information matrix and convergence bookkeeping."""

    design: ContinuousDesign
    M: SpdMatrix
    logdet: float
    gap: float
    iteration: int = 0
    converged: bool = False
    logdet_trace: list = field(default_factory=list)
    gap_trace: list = field(default_factory=list)
    step_trace: list = field(default_factory=list)

    @classmethod
    def from_design(cls, design: ContinuousDesign, features: FeatureMap, C) -> "DesignState":
        m = information_matrix(design, features, C)
        gap = equivalence_gap(m, features, C)
        return cls(design, m, m.logdet(), gap)


def _matrix_of(state_or_matrix):
    return state_or_matrix.M if isinstance(state_or_matrix, DesignState) else as_spd(state_or_matrix)


def pred_variance(z: int, state, features: FeatureMap) -> float:
    w = _matrix_of(state).whiten(features.feature_of(z))
    return float(w @ w)


def variance_lower_bound(M, C) -> float:
    """``p - Tr(M^{-1} C)``: the design-average of ``d`` and a floor for its max."""
    m = as_spd(M)
    return m.dim - inverse_trace_product(m, np.asarray(C, dtype=float))


def equivalence_gap(state, features: FeatureMap, C) -> float:
    """``max_z d(z) - (p - Tr(M^{-1} C))``; zero exactly at the optimum."""
    m = _matrix_of(state)
    return float(prediction_variances(m, features).max() - variance_lower_bound(m, C))


def step_size_bound(d_max: float, p: int, trace_mc: float) -> float:
    """Largest mixing weight guaranteed to increase ``log|M|``.

    With ``tau = d_max - (p - trace_mc)`` the bound is
    ``tau / (p (p + tau - 1))``.  For ``p == 1`` this is exactly 1 and is
    clamped just below it.
    """
    tau = d_max - (p - trace_mc)
    if not tau > 0:
        raise AlreadyOptimal(f"no ascent direction (tau = {tau:.3g})")
    return min(tau / (p * (p + tau - 1.0)), SATURATED_WEIGHT)


def _segment_maximizer(M: SpdMatrix, direction: np.ndarray, t_max: float) -> float:
    """Exact maximizer over ``t in (0, t_max]`` of ``log|M + t D|``.

    Along the segment ``log|M + t D| = log|M| + sum_j log(1 + t mu_j)`` with
    ``mu`` the eigenvalues of ``F^{-1} D F^{-T}``.  This is concave in ``t``,
    so the maximizer is the root of its derivative, or ``t_max`` when the
    derivative is still nonnegative there.
    """
    mu = np.linalg.eigvalsh(M.whiten(M.whiten(direction).T))

    def slope(t):
        return float(np.sum(mu / (1.0 + t * mu)))

    if slope(t_max) >= 0:
        return t_max
    return brentq(slope, 0.0, t_max, xtol=1e-14, rtol=1e-12, maxiter=200)


def _initial_weights(init, n: int) -> np.ndarray:
    if isinstance(init, str):
        if init == "uniform":
            return np.full(n, 1.0 / n)
        if init == "empty":
            return np.zeros(n)
        raise ValueError(f"unknown init {init!r}; expected 'uniform', 'empty' or a list of indices")
    idx = np.asarray(init, dtype=np.intp)
    if idx.size == 0:
        return np.zeros(n)
    w = np.zeros(n)
    w[idx] = 1.0 / len(idx)
    return w


def odoem_continuous(features: FeatureMap, C, tol: float = 1e-6, max_iter: int = 5000,
                     step_rule: str = "paper-bound", init="uniform",
                     away_steps: bool = True) -> DesignState:
    """Sequential reweighting toward the point of largest prediction variance.

    Each iteration picks ``z = argmax d(z)`` and moves the design to
    ``(1 - a) eps + a delta_z``.  ``step_rule="paper-bound"`` uses the full
    step bound of :func:`step_size_bound`; ``"line-search"`` takes the exact
    maximizer of ``log|M|`` along the same segment.

    With ``away_steps`` (the default) an iteration may instead shift mass
    *off* the support point of smallest variance, by an exact line search,
    whenever that direction is steeper.  Pure toward-steps converge only
    sublinearly once the optimal support is sparse; the away-steps remove
    the stale weight that causes it.  ``away_steps=False`` runs the plain
    toward-only iteration.

    Iteration stops when the equivalence gap is at most ``tol`` or after
    ``max_iter`` updates; in the second case ``converged`` is False.

    Parameters
    ----------
    init : {"uniform", "empty"} or sequence of int
        Starting weights.  ``"empty"`` starts from ``M = C`` and the first
        update places all mass on the first selected point.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    if step_rule not in STEP_RULES:
        raise ValueError(f"unknown step rule {step_rule!r}; expected one of {STEP_RULES}")
    C = as_spd(C)
    c = C.entries
    x = features.matrix
    n, p = x.shape
    if C.dim != p:
        raise DimensionMismatch(f"C has dim {C.dim}, features have p={p}")
    w = _initial_weights(init, n)

    state = None
    it = 0
    while True:
        m = SpdMatrix(moment_matrix(w, features) + c, symmetrize=True)
        d = prediction_variances(m, features)
        trace_mc = inverse_trace_product(m, c)
        lower = p - trace_mc
        gap = float(d.max() - lower)
        ld = m.logdet()
        if state is None:
            state = DesignState(ContinuousDesign.from_dense(w), m, ld, gap)
        state.logdet_trace.append(ld)
        state.gap_trace.append(gap)
        if gap <= tol:
            state.converged = True
            break
        if it >= max_iter:
            break

        scores = np.where(w >= SATURATED_WEIGHT, -np.inf, d)
        z = int(np.argmax(scores))
        support = np.flatnonzero(w)
        away = None
        if away_steps and len(support) > 1:
            a_idx = support[np.argmin(d[support])]
            # move mass off the weakest support point when that ascent is steeper
            if lower - d[a_idx] > d[z] - lower:
                away = int(a_idx)

        if away is not None:
            g = x[away]
            t_max = w[away] / (1.0 - w[away])
            t = _segment_maximizer(m, m.entries - np.outer(g, g) - c, t_max)
            w *= 1.0 + t
            w[away] -= t
            if t >= t_max:
                w[away] = 0.0
            step = -t
        else:
            if w.sum() == 0:
                step = 1.0
            else:
                try:
                    if step_rule == "paper-bound":
                        step = step_size_bound(d[z], p, trace_mc)
                    else:
                        step = _segment_maximizer(m, np.outer(x[z], x[z]) + c - m.entries, 1.0)
                except AlreadyOptimal:
                    break
            w *= 1.0 - step
            w[z] += step
        w[w < PRUNE_THRESHOLD] = 0.0
        w /= w.sum()
        state.step_trace.append(step)
        it += 1

    state.design = ContinuousDesign.from_dense(w)
    state.M = m
    state.logdet = ld
    state.gap = gap
    state.iteration = it
    return state


def greedy_next(features: FeatureMap, C, labeled: Sequence[int]) -> int:
    """Unlabeled candidate with the largest variance under ``M = C + Z^T Z``.

    Ties go to the lowest index.
    """
    x = features.matrix
    c = np.asarray(C, dtype=float)
    labeled = np.asarray(labeled, dtype=np.intp)
    if len(labeled) >= features.n:
        raise BudgetExceedsPool("every candidate is already labeled")
    z = x[labeled]
    m = SpdMatrix(c + z.T @ z, symmetrize=True)
    d = prediction_variances(m, features)
    d[labeled] = -np.inf
    return int(np.argmax(d))


def odoem_discrete(features: FeatureMap, C, budget: int, labeled: Sequence[int] = (),
                   return_logdets: bool = False):
    """Greedy sequence of ``budget`` distinct candidates.

    Each pick maximizes ``g^T M^{-1} g`` over unlabeled candidates and then
    adds ``g g^T`` (unit weight) to ``M``, so ``|M|`` grows by
    ``1 + d(z) > 1`` at every step.

    Returns the ordered index list, and with ``return_logdets`` also the
    log-determinant of ``M`` after each pick.
    """
    chosen = [int(i) for i in labeled]
    if budget < 0:
        raise ValueError("budget must be nonnegative")
    if budget + len(chosen) > features.n:
        raise BudgetExceedsPool(f"budget {budget} exceeds the {features.n - len(chosen)} unlabeled candidates")
    c = np.asarray(C, dtype=float)
    x = features.matrix
    picks, logdets = [], []
    for _ in range(budget):
        z = greedy_next(features, c, chosen)
        chosen.append(z)
        picks.append(z)
        if return_logdets:
            zs = x[chosen]
            logdets.append(SpdMatrix(c + zs.T @ zs, symmetrize=True).logdet())
    return (picks, logdets) if return_logdets else picks


def determinant_identity_sides(M, C, g, step: float, c_weight: float = 1.0) -> tuple[float, float]:
    """Both sides of the one-point update determinant formula, as logs.

    The update is ``M' = (1 - a) M + a (g g^T + c_weight C)``.  Returns
    ``(log|M'|, log of (1-a)^p |M| [1 + a/(1-a) (d + c_weight Tr(M^{-1} C))])``.
    The two agree exactly when ``c_weight == 0`` (a rank-one update) and
    only approximately otherwise.
    """
    m = as_spd(M)
    c = np.asarray(C, dtype=float)
    g = np.asarray(g, dtype=float)
    p = m.dim
    a = float(step)
    exact = SpdMatrix((1 - a) * m.entries + a * (np.outer(g, g) + c_weight * c), symmetrize=True).logdet()
    wg = m.whiten(g)
    ratio = a / (1 - a)
    bracket = 1 + ratio * (wg @ wg) + ratio * c_weight * inverse_trace_product(m, c)
    claimed = p * np.log1p(-a) + m.logdet() + np.log(bracket)
    return exact, float(claimed)


def determinant_identity_report(n_trials: int = 100, seed: int = 0, max_p: int = 8) -> dict:
    """Largest relative discrepancy of the update formula on random steps.

    Each trial draws an information matrix from a random design, a random
    candidate and a random step; the formula is evaluated with the
    regularizer term included and with it removed.
    """
    rng = np.random.default_rng(seed)
    full, rank_one = [], []
    for _ in range(n_trials):
        p = int(rng.integers(2, max_p + 1))
        n = int(rng.integers(p, 3 * p + 1))
        x = rng.standard_normal((n, p))
        b = rng.standard_normal((p, p))
        c = 0.1 * (b @ b.T) / p + 0.05 * np.eye(p)
        q = rng.dirichlet(np.ones(n))
        m = x.T @ (q[:, None] * x) + c
        g = x[rng.integers(n)]
        a = float(rng.uniform(0.01, 0.9))
        for weight, sink in ((1.0, full), (0.0, rank_one)):
            exact, claimed = determinant_identity_sides(m, c, g, a, c_weight=weight)
            sink.append(abs(np.expm1(claimed - exact)))
    return {
        "trials": n_trials,
        "max_rel_discrepancy": float(max(full)),
        "median_rel_discrepancy": float(np.median(full)),
        "max_rel_discrepancy_rank_one": float(max(rank_one)),
    }
