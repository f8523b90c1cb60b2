"""Exception hierarchy shared by every module of the package."""

import numpy as np


class ManifoldDoeError(Exception):
    """Base class for all package errors."""


class DimensionMismatch(ManifoldDoeError, ValueError):
    pass


class EmptyInput(ManifoldDoeError, ValueError):
    pass


class NotPositiveDefinite(ManifoldDoeError, np.linalg.LinAlgError):
    """A triangular factorization met a non-positive pivot."""


class SingularSystem(ManifoldDoeError, np.linalg.LinAlgError):
    """The LapRLS normal equations could not be factorized.

    Usually the kernel matrix is rank deficient; increase ``lambda_a``.
    """


class TooFewPoints(ManifoldDoeError, ValueError):
    pass


class AlreadyOptimal(ManifoldDoeError):
    """No ascent direction remains: the design already attains the bound."""


class BudgetExceedsPool(ManifoldDoeError, ValueError):
    pass


class PoolExhausted(ManifoldDoeError):
    pass


class NotPerfectSquare(ManifoldDoeError, ValueError):
    pass


class ParseError(ManifoldDoeError, ValueError):
    pass


class AngleOutOfRange(ManifoldDoeError, ValueError):
    pass


class OutOfRange(ManifoldDoeError, ValueError):
    pass
