"""D/G-optimal experimental design on manifolds with Laplacian-regularized least squares."""

from .baselines import STRATEGIES, StrategySpec, centered_l2_discrepancy
from .datasets import ImageDataset, ManifoldDataset, generate, load_images, response, rotating_pattern_images
from .design import (
    ContinuousDesign,
    DesignState,
    FeatureMap,
    equivalence_gap,
    greedy_next,
    information_matrix,
    odoem_continuous,
    odoem_discrete,
    pred_variance,
    prediction_variances,
    regularizer,
)
from .errors import (
    AlreadyOptimal,
    AngleOutOfRange,
    BudgetExceedsPool,
    DimensionMismatch,
    EmptyInput,
    ManifoldDoeError,
    NotPerfectSquare,
    NotPositiveDefinite,
    OutOfRange,
    ParseError,
    PoolExhausted,
    SingularSystem,
    TooFewPoints,
)
from .graph import AdjacencyGraph, knn_graph, laplacian
from .harness import ComparisonTable, ExperimentConfig, LearningCurve, compare, lambda_i_schedule, run_experiment
from .kernels import KernelSpec, gram
from .laprls import LabeledSet, LapRlsModel, fit_coefficients, predict
from .numerics import SpdMatrix
from .pool import CandidatePool

__version__ = "0.1.0"

__all__ = [
    "AdjacencyGraph",
    "AlreadyOptimal",
    "AngleOutOfRange",
    "BudgetExceedsPool",
    "CandidatePool",
    "ComparisonTable",
    "ContinuousDesign",
    "DesignState",
    "DimensionMismatch",
    "EmptyInput",
    "ExperimentConfig",
    "FeatureMap",
    "ImageDataset",
    "KernelSpec",
    "LabeledSet",
    "LapRlsModel",
    "LearningCurve",
    "ManifoldDataset",
    "ManifoldDoeError",
    "NotPerfectSquare",
    "NotPositiveDefinite",
    "OutOfRange",
    "ParseError",
    "PoolExhausted",
    "STRATEGIES",
    "SingularSystem",
    "SpdMatrix",
    "StrategySpec",
    "TooFewPoints",
    "centered_l2_discrepancy",
    "compare",
    "equivalence_gap",
    "fit_coefficients",
    "generate",
    "gram",
    "greedy_next",
    "information_matrix",
    "knn_graph",
    "lambda_i_schedule",
    "laplacian",
    "load_images",
    "odoem_continuous",
    "odoem_discrete",
    "pred_variance",
    "predict",
    "prediction_variances",
    "regularizer",
    "response",
    "rotating_pattern_images",
    "run_experiment",
    "__version__",
]
