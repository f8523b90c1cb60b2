"""Sequential labeling benchmark.

A run starts with nothing labeled.  At step ``k`` the strategy proposes a
candidate from coordinates alone, its label is revealed, the model is refit
and the MSE over all ``n`` candidates is recorded.  ODOEM is refit with
LapRLS using ``lambda_i(k)``; every baseline is refit with plain kernel
ridge (``lambda_i = 0``).
"""

from __future__ import annotations

import csv
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from .baselines import (
    StrategySpec,
    classical_d_next,
    l2_discrepancy_next,
    maximin_next,
    minimax_next,
    random_next,
)
from .design import ContinuousDesign, DesignState, FeatureMap, greedy_next
from .errors import BudgetExceedsPool, OutOfRange
from .kernels import KernelSpec
from .laprls import LabeledSet, LapRlsModel, fit_coefficients
from .numerics import SpdMatrix
from .pool import CandidatePool

NEG_LOG_FRACTION = "neg-log-fraction"
CURVE_HEADER = ("k", "index", "lambda_i", "mse", "logdet", "gap")


def lambda_i_schedule(k: int, n: int) -> float:
    """``-ln(k / n)``: large while few points are labeled, zero at ``k == n``."""
    if not 1 <= k <= n:
        raise OutOfRange(f"k={k} outside 1..{n}")
    return 0.0 if k == n else -math.log(k / n)


@dataclass(frozen=True)
class ExperimentConfig:
    """One benchmark run.

    ``lambda_i`` is either ``"neg-log-fraction"`` for the decreasing
    schedule of :func:`lambda_i_schedule` or a constant.  ``features`` picks
    the design feature map: ``"auto"`` means the empirical kernel map for
    RBF kernels and raw coordinates for the linear kernel.
    """

    strategy: StrategySpec
    kernel: KernelSpec = KernelSpec()
    lambda_a: float = 0.01
    lambda_i: str | float = NEG_LOG_FRACTION
    budget: int = 100
    knn_k: int = 7
    graph_weighting: str = "binary"
    seed: int = 0
    features: str = "auto"

    def __post_init__(self):
        if not self.lambda_a > 0:
            raise ValueError("lambda_a must be positive")
        if self.budget < 0:
            raise ValueError("budget must be nonnegative")
        if self.lambda_i != NEG_LOG_FRACTION and not float(self.lambda_i) >= 0:
            raise ValueError("constant lambda_i must be nonnegative")

    def lambda_i_at(self, k: int, n: int) -> float:
        if self.lambda_i == NEG_LOG_FRACTION:
            return lambda_i_schedule(k, n)
        return float(self.lambda_i)

    @property
    def label(self) -> str:
        return f"{self.strategy.kind}@{self.seed}"

    def describe(self) -> dict:
        out = asdict(self)
        out["strategy"] = self.strategy.kind
        out["strategy_seed"] = self.strategy.seed
        out["kernel"] = self.kernel.kind
        out["kernel_range"] = self.kernel.range
        out["rbf_convention"] = self.kernel.convention
        return out


@dataclass
class LearningCurve:
    label: str
    k: list = field(default_factory=list)
    index: list = field(default_factory=list)
    lambda_i: list = field(default_factory=list)
    mse: list = field(default_factory=list)
    logdet: list = field(default_factory=list)
    gap: list = field(default_factory=list)
    config: dict = field(default_factory=dict)
    models: list = field(default_factory=list, repr=False)

    def __len__(self):
        return len(self.k)

    def append(self, k, index, lambda_i, mse, logdet, gap):
        self.k.append(int(k))
        self.index.append(int(index))
        self.lambda_i.append(float(lambda_i))
        self.mse.append(float(mse))
        self.logdet.append(float(logdet))
        self.gap.append(float(gap))

    def records(self):
        return list(zip(self.k, self.index, self.lambda_i, self.mse, self.logdet, self.gap))

    @property
    def final_mse(self) -> float:
        return self.mse[-1] if self.mse else float("nan")

    @property
    def area(self) -> float:
        """Area under the MSE curve with unit spacing in ``k``."""
        return float(np.sum(self.mse))

    def to_csv(self, path):
        with open(path, "w", encoding="utf-8", newline="") as fh:
            _write_comments(fh, {"label": self.label, **self.config})
            writer = csv.writer(fh)
            writer.writerow(CURVE_HEADER)
            for row in self.records():
                writer.writerow([row[0], row[1]] + [repr(v) for v in row[2:]])

    @classmethod
    def from_csv(cls, path) -> "LearningCurve":
        comments = {}
        curve = None
        with open(path, encoding="utf-8", newline="") as fh:
            body = []
            for line in fh:
                if line.startswith("#"):
                    key, _, val = line[1:].partition("=")
                    comments[key.strip()] = val.strip()
                else:
                    body.append(line)
        reader = csv.reader(body)
        header = next(reader)
        if tuple(header) != CURVE_HEADER:
            raise ValueError(f"{path}: not a learning-curve file")
        curve = cls(comments.pop("label", str(path)), config=comments)
        for row in reader:
            if row:
                curve.append(int(row[0]), int(row[1]), *map(float, row[2:]))
        return curve


def _write_comments(fh, info: dict):
    for key, val in info.items():
        fh.write(f"# {key} = {val}\n")


def build_pool(dataset, kernel: KernelSpec | None = None, knn_k: int = 7,
               weighting: str = "binary") -> CandidatePool:
    return CandidatePool.build(dataset.points, kernel or KernelSpec(), knn_k=knn_k, weighting=weighting)


def feature_map(pool: CandidatePool, kind: str = "auto") -> FeatureMap:
    if kind == "auto":
        kind = "empirical-kernel" if pool.kernel.kind == "rbf" else "explicit"
    if kind == "empirical-kernel":
        return FeatureMap.empirical_kernel(pool.gram)
    if kind == "explicit":
        return FeatureMap.explicit(pool.points)
    raise ValueError(f"unknown feature map {kind!r}")


def mse_of(model: LapRlsModel, pool: CandidatePool, labels) -> float:
    """Mean squared error of a fitted model over every candidate."""
    resid = np.asarray(labels, dtype=float) - pool.gram @ model.coefficients
    return float(np.mean(resid * resid))


def _smoothness(pool: CandidatePool, fm: FeatureMap) -> np.ndarray:
    if fm.kind == "empirical-kernel":
        return pool.klk
    s = fm.matrix.T @ pool.laplacian @ fm.matrix
    return 0.5 * (s + s.T)


def run_experiment(config: ExperimentConfig, dataset, pool: CandidatePool | None = None,
                   keep_models: bool = False) -> LearningCurve:
    """Run one strategy for ``config.budget`` labeling steps.

    ``dataset`` needs ``points`` and ``labels``.  Pass a prebuilt ``pool``
    to share the Gram matrix and graph between strategies.  The recorded
    ``logdet`` and ``gap`` describe the uniform design on the labeled set
    under the manifold regularizer of step ``k``, for every strategy.
    """
    if pool is None:
        pool = build_pool(dataset, config.kernel, config.knn_k, config.graph_weighting)
    labels = np.asarray(dataset.labels, dtype=float)
    n = pool.n
    if config.budget > n:
        raise BudgetExceedsPool(f"budget {config.budget} exceeds pool size {n}")
    fm = feature_map(pool, config.features)
    smooth = _smoothness(pool, fm)
    eye = np.eye(fm.p)
    kind = config.strategy.kind
    rng = np.random.default_rng(config.strategy.seed if config.strategy.seed is not None else config.seed)

    curve = LearningCurve(config.label, config=config.describe())
    labeled: list[int] = []
    for k in range(1, config.budget + 1):
        lam_i = config.lambda_i_at(k, n)
        c_k = config.lambda_a * eye + lam_i * smooth
        if kind == "odoem":
            z = greedy_next(fm, c_k, labeled)
        elif kind == "classical-d":
            z = classical_d_next(fm, labeled, config.lambda_a)
        elif kind == "random":
            z = random_next(n, labeled, rng)
        elif kind == "uniform-maximin":
            z = maximin_next(pool.unit_cube_points, labeled)
        elif kind == "uniform-minimax":
            z = minimax_next(pool.unit_cube_points, labeled)
        else:
            z = l2_discrepancy_next(pool.unit_cube_points, labeled)
        labeled.append(z)

        fit_lam_i = lam_i if kind == "odoem" else 0.0
        model = fit_coefficients(pool, LabeledSet(labeled, labels[labeled]), config.lambda_a, fit_lam_i)
        state = DesignState.from_design(ContinuousDesign.uniform(labeled), fm, SpdMatrix(c_k, symmetrize=True))
        curve.append(k, z, fit_lam_i, mse_of(model, pool, labels), state.logdet, state.gap)
        if keep_models:
            curve.models.append(model)
    return curve


def _run_star(args):
    return run_experiment(*args)


@dataclass
class ComparisonTable:
    curves: list

    def columns(self) -> dict:
        """MSE column per run; a repeated label gets a ``#2``, ``#3``... suffix."""
        out: dict = {}
        for c in self.curves:
            key, i = c.label, 1
            while key in out:
                i += 1
                key = f"{c.label}#{i}"
            out[key] = np.asarray(c.mse)
        return out

    def mean_curves(self) -> dict:
        groups: dict = {}
        for c in self.curves:
            groups.setdefault(c.label.split("@")[0], []).append(np.asarray(c.mse))
        return {kind: np.mean(np.vstack(v), axis=0) for kind, v in groups.items()}

    def summary(self) -> list:
        return [
            {"label": c.label, "area": c.area, "final_mse": c.final_mse, "steps": len(c)}
            for c in self.curves
        ]

    def to_csv(self, path, comments: dict | None = None):
        """Per-run MSE columns followed by one mean column per strategy."""
        cols = self.columns()
        means = self.mean_curves()
        length = max((len(v) for v in cols.values()), default=0)
        with open(path, "w", encoding="utf-8", newline="") as fh:
            _write_comments(fh, comments or {})
            writer = csv.writer(fh)
            writer.writerow(["k"] + list(cols) + [f"mean:{kind}" for kind in means])
            for i in range(length):
                writer.writerow([i + 1] + [repr(float(v[i])) for v in cols.values()]
                                + [repr(float(v[i])) for v in means.values()])

    def summary_to_csv(self, path, comments: dict | None = None):
        with open(path, "w", encoding="utf-8", newline="") as fh:
            _write_comments(fh, comments or {})
            writer = csv.writer(fh)
            writer.writerow(["label", "area", "final_mse", "steps"])
            for row in self.summary():
                writer.writerow([row["label"], repr(row["area"]), repr(row["final_mse"]), row["steps"]])


def compare(configs, dataset, pool: CandidatePool | None = None, jobs: int = 1) -> ComparisonTable:
    """Run every config on one dataset, sharing the pool across runs.

    All configs must agree on kernel and graph settings when ``pool`` is
    built here.
    """
    configs = list(configs)
    if pool is None and configs:
        c0 = configs[0]
        pool = build_pool(dataset, c0.kernel, c0.knn_k, c0.graph_weighting)
    if jobs > 1 and len(configs) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            curves = list(ex.map(_run_star, [(c, dataset, pool) for c in configs]))
    else:
        curves = [run_experiment(c, dataset, pool) for c in configs]
    return ComparisonTable(curves)
