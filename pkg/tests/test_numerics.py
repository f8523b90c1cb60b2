import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import random_spd
from manifold_doe.errors import DimensionMismatch, NotPositiveDefinite
from manifold_doe.numerics import SpdMatrix, inverse_trace_product, logdet, rank_one_det_ratio, solve
from oracles import cofactor_det


def test_logdet_identity():
    assert logdet(np.eye(3)) == 0.0


def test_logdet_diagonal():
    assert logdet(np.diag([0.01, 0.01])) == pytest.approx(np.log(1e-4), rel=1e-14)
    assert logdet(np.diag([0.01, 0.01])) == pytest.approx(-9.2103, abs=1e-4)


def test_logdet_matches_cofactor_expansion(rng):
    a = random_spd(rng, 5)
    assert logdet(a) == pytest.approx(np.log(cofactor_det(a)), rel=1e-9)


def test_solve_examples():
    np.testing.assert_allclose(solve(np.eye(3), [1.0, 2.0, 3.0]), [1.0, 2.0, 3.0])
    np.testing.assert_allclose(solve(np.diag([2.0, 4.0]), [2.0, 4.0]), [1.0, 1.0])


def test_solve_residual(rng):
    a = random_spd(rng, 6)
    b = rng.standard_normal(6)
    x = solve(a, b)
    assert np.linalg.norm(a @ x - b) <= 1e-10 * np.linalg.norm(b)


def test_solve_matrix_rhs(rng):
    a = random_spd(rng, 4)
    b = rng.standard_normal((4, 3))
    np.testing.assert_allclose(a @ solve(a, b), b, atol=1e-10)


def test_rank_one_examples():
    assert rank_one_det_ratio(np.eye(2), [1.0, 1.0]) == pytest.approx(3.0)
    assert rank_one_det_ratio(np.eye(2), [0.0, 0.0]) == 1.0


def test_rank_one_random(rng):
    a = random_spd(rng, 4)
    g = rng.standard_normal(4)
    direct = np.exp(logdet(a + np.outer(g, g)) - logdet(a))
    assert rank_one_det_ratio(a, g) == pytest.approx(direct, rel=1e-10)


@given(st.integers(2, 10), st.integers(0, 2**32 - 1))
def test_rank_one_ratio_and_monotone_logdet(p, seed):
    rng = np.random.default_rng(seed)
    a = random_spd(rng, p, shift=0.1)
    g = rng.standard_normal(p)
    updated = a + np.outer(g, g)
    ratio = rank_one_det_ratio(a, g)
    assert ratio == pytest.approx(np.exp(logdet(updated) - logdet(a)), rel=1e-9)
    assert logdet(updated) >= logdet(a)


def test_inverse_trace_product(rng):
    a = random_spd(rng, 5)
    c = random_spd(rng, 5)
    assert inverse_trace_product(a, c) == pytest.approx(np.trace(np.linalg.inv(a) @ c), rel=1e-10)


def test_spd_rejects_indefinite():
    with pytest.raises(NotPositiveDefinite):
        SpdMatrix([[1.0, 2.0], [2.0, 1.0]])
    with pytest.raises(NotPositiveDefinite):
        SpdMatrix(np.zeros((2, 2)))


def test_spd_rejects_asymmetric_unless_asked():
    a = np.array([[2.0, 1.0], [0.0, 2.0]])
    with pytest.raises(DimensionMismatch):
        SpdMatrix(a)
    np.testing.assert_allclose(SpdMatrix(a, symmetrize=True).entries, [[2.0, 0.5], [0.5, 2.0]])


def test_spd_shape_errors():
    with pytest.raises(DimensionMismatch):
        SpdMatrix(np.ones((2, 3)))
    with pytest.raises(DimensionMismatch):
        solve(np.eye(2), [1.0, 2.0, 3.0])


def test_spd_is_read_only(rng):
    a = SpdMatrix(random_spd(rng, 3))
    with pytest.raises(ValueError):
        a.entries[0, 0] = 5.0
    with pytest.raises(ValueError):
        a.factor[0, 0] = 5.0
    np.testing.assert_allclose(a.factor @ a.factor.T, a.entries, atol=1e-12)
