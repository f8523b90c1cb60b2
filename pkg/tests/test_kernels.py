import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from manifold_doe.errors import DimensionMismatch, EmptyInput
from manifold_doe.kernels import KernelSpec, gram, kernel_eval

RBF = KernelSpec("rbf", 0.01)


def test_kernel_eval_examples():
    assert kernel_eval(RBF, [0.3, 0.4], [0.3, 0.4]) == 1.0
    assert kernel_eval(KernelSpec("linear"), [1, 2], [3, 4]) == 11.0
    assert kernel_eval(RBF, [0.0, 0.0], [0.01, 0.0]) == pytest.approx(math.exp(-0.5), rel=1e-12)
    assert kernel_eval(RBF, [0.0, 0.0], [0.01, 0.0]) == pytest.approx(0.6065, abs=1e-4)


def test_gamma_convention():
    spec = KernelSpec("rbf", 2.0, convention="gamma")
    assert kernel_eval(spec, [0.0], [0.5]) == pytest.approx(math.exp(-0.5))


def test_gram_small_cases():
    np.testing.assert_array_equal(gram(RBF, [[1.0, 2.0]]), [[1.0]])
    np.testing.assert_array_equal(gram(RBF, [[1.0, 2.0], [1.0, 2.0]]), np.ones((2, 2)))


def test_gram_matches_entrywise_loop(rng):
    pts = rng.standard_normal((3, 4))
    for spec in (KernelSpec("rbf", 0.8), KernelSpec("linear")):
        k = gram(spec, pts)
        loop = [[kernel_eval(spec, a, b) for b in pts] for a in pts]
        np.testing.assert_allclose(k, loop, rtol=1e-13)


points = arrays(np.float64, st.tuples(st.integers(1, 12), st.just(3)),
                elements=st.floats(-5, 5, allow_nan=False))


@given(points, st.floats(0.05, 5.0))
def test_gram_symmetry_and_range(pts, r):
    k = gram(KernelSpec("rbf", r), pts)
    assert np.array_equal(k, k.T)
    assert np.all(np.diag(k) == 1.0)
    assert np.all((k >= 0) & (k <= 1))


@given(points, points)
def test_gram_cross_transpose(a, b):
    for spec in (KernelSpec("rbf", 1.0), KernelSpec("linear")):
        np.testing.assert_allclose(gram(spec, a, b), gram(spec, b, a).T, rtol=1e-12, atol=1e-12)


def test_rbf_positive_for_moderate_distance(rng):
    pts = rng.uniform(0, 1, (20, 2))
    assert np.all(gram(KernelSpec("rbf", 0.5), pts) > 0)


def test_errors():
    with pytest.raises(EmptyInput):
        gram(RBF, np.zeros((0, 2)))
    with pytest.raises(DimensionMismatch):
        gram(RBF, np.zeros((2, 2)), np.zeros((2, 3)))
    with pytest.raises(DimensionMismatch):
        kernel_eval(RBF, [1.0], [1.0, 2.0])
    with pytest.raises(ValueError):
        KernelSpec("poly")
    with pytest.raises(ValueError):
        KernelSpec("rbf", 0.0)
