import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.stats import qmc

from manifold_doe.baselines import (
    STRATEGIES,
    StrategySpec,
    centered_l2_discrepancy,
    classical_d_next,
    covering_radius,
    l2_discrepancy_next,
    maximin_next,
    minimax_next,
    random_next,
)
from manifold_doe.design import FeatureMap, odoem_discrete, regularizer
from manifold_doe.errors import PoolExhausted
from manifold_doe.graph import knn_graph, laplacian
from oracles import covering_radius as covering_oracle
from oracles import greedy_by_exhaustion

LINE = np.array([[0.0], [1.0], [2.0]])


def test_strategy_spec():
    assert StrategySpec("random", 3).label == "random@3"
    assert StrategySpec("odoem").label == "odoem"
    with pytest.raises(ValueError):
        StrategySpec("random")
    with pytest.raises(ValueError):
        StrategySpec("odoem", 1)
    with pytest.raises(ValueError):
        StrategySpec("maed")


def test_classical_d_examples():
    fm = FeatureMap.explicit(np.array([[2.0, 0.0], [1.0, 0.0], [0.0, 1.0]]))
    assert classical_d_next(fm, [], 0.01) == 0


def test_classical_d_equals_odoem_without_manifold_term(rng):
    x = rng.standard_normal((15, 3))
    fm = FeatureMap.explicit(x)
    c = regularizer(fm, laplacian(knn_graph(x, 4)), 0.01, 0.0)
    seq = []
    for _ in range(8):
        seq.append(classical_d_next(fm, seq, 0.01))
    assert seq == odoem_discrete(fm, c, 8)


def test_random_next(rng):
    assert random_next(3, [0, 2], rng) == 1
    a = [random_next(10, [], np.random.default_rng(7)) for _ in range(3)]
    b = [random_next(10, [], np.random.default_rng(7)) for _ in range(3)]
    assert a == b
    gen = np.random.default_rng(0)
    counts = np.bincount([random_next(4, [], gen) for _ in range(10_000)], minlength=4)
    sigma = np.sqrt(10_000 * 0.25 * 0.75)
    assert np.all(np.abs(counts - 2500) <= 3 * sigma)


def test_maximin_examples():
    assert maximin_next(LINE, [0]) == 2
    square = np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [1.0, 1.0]])
    assert maximin_next(square, []) == 0
    centre = np.array([[0.5, 0.5]])
    assert maximin_next(np.vstack([centre, square]), [0]) == 1


def test_maximin_brute_force(rng):
    pts = rng.uniform(0, 1, (30, 2))
    chosen = [maximin_next(pts, [])]
    for _ in range(4):
        z = maximin_next(pts, chosen)
        scores = [(-min(np.linalg.norm(pts[i] - pts[j]) for j in chosen), i)
                  for i in range(30) if i not in chosen]
        assert z == min(scores)[1]
        chosen.append(z)
    sep = [min(np.linalg.norm(pts[a] - pts[b]) for a in chosen[:k] for b in chosen[:k] if a < b)
           for k in range(2, 6)]
    assert all(np.diff(sep) <= 0)


def test_minimax_examples():
    assert minimax_next(LINE, []) == 1
    assert minimax_next(LINE, [0, 2]) == 1


def test_minimax_brute_force(rng):
    pts = rng.uniform(0, 1, (20, 2))
    chosen = []
    for _ in range(4):
        chosen.append(minimax_next(pts, chosen))
    assert chosen == greedy_by_exhaustion(lambda s: covering_oracle(pts, s), 20, 4)
    assert covering_radius(pts, chosen) == pytest.approx(covering_oracle(pts, chosen))


@given(st.integers(1, 30), st.integers(1, 4), st.integers(0, 2**32 - 1))
def test_discrepancy_matches_scipy(n, d, seed):
    u = np.random.default_rng(seed).uniform(0, 1, (n, d))
    assert centered_l2_discrepancy(u) == pytest.approx(qmc.discrepancy(u, method="CD"), rel=1e-10, abs=1e-14)


def test_l2_first_pick_matches_exhaustive(rng):
    u = rng.uniform(0, 1, (25, 2))
    z = l2_discrepancy_next(u, [])
    exhaustive = min(range(25), key=lambda i: (centered_l2_discrepancy(u[[i]]), i))
    assert z == exhaustive


def test_l2_incremental_matches_exhaustive(rng):
    u = rng.uniform(0, 1, (18, 3))
    chosen = []
    for _ in range(5):
        chosen.append(l2_discrepancy_next(u, chosen))
    assert chosen == greedy_by_exhaustion(lambda s: qmc.discrepancy(u[s], method="CD"), 18, 5)


@pytest.mark.parametrize("pick", [
    lambda pts, lab: maximin_next(pts, lab),
    lambda pts, lab: minimax_next(pts, lab),
    lambda pts, lab: l2_discrepancy_next(pts, lab),
    lambda pts, lab: random_next(len(pts), lab, np.random.default_rng(0)),
    lambda pts, lab: classical_d_next(FeatureMap.explicit(pts), lab),
])
def test_distinct_until_exhausted(rng, pick):
    pts = rng.uniform(0, 1, (6, 2))
    seq = []
    for _ in range(6):
        seq.append(pick(pts, seq))
    assert sorted(seq) == list(range(6))
    with pytest.raises(PoolExhausted):
        pick(pts, seq)


def test_strategy_names():
    assert STRATEGIES[0] == "odoem" and len(set(STRATEGIES)) == 6
