import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from isowgan.exceptions import RejectedInputError
from isowgan.smote import SMOTE, nearest_neighbors, smote
from oracles import segment_residual


def test_identical_rows_give_that_row():
    X = np.array([[0.3, 0.7], [0.3, 0.7]])
    assert np.array_equal(smote(X, 6, k=1, seed=3), np.tile(X[0], (6, 1)))


def test_diagonal_pair_gives_points_on_the_diagonal():
    out = smote(np.array([[0.0, 0.0], [1.0, 1.0]]), 5, k=1, seed=0)
    assert np.array_equal(out[:, 0], out[:, 1])
    assert np.all((out >= 0) & (out <= 1))


def test_zero_needed_gives_empty_matrix():
    assert smote(np.eye(3), 0, k=1).shape == (0, 3)


@pytest.mark.parametrize("k", [0, 3])
def test_k_out_of_range_rejected(k):
    with pytest.raises(RejectedInputError):
        smote(np.eye(3), 4, k=k)


def test_single_row_rejected():
    with pytest.raises(RejectedInputError):
        smote(np.ones((1, 2)), 3, k=1)


def test_same_seed_same_rows(rng):
    X = rng.random((10, 3))
    assert np.array_equal(smote(X, 20, 3, seed=5), smote(X, 20, 3, seed=5))
    assert not np.array_equal(smote(X, 20, 3, seed=5), smote(X, 20, 3, seed=6))


def test_neighbors_match_brute_force(rng):
    X = rng.random((40, 3))
    X[5] = X[7]  # a duplicate
    nn = nearest_neighbors(X, 4)
    for i in range(40):
        d = sorted((float(np.sum((X[i] - X[j]) ** 2)), j) for j in range(40) if j != i)
        assert list(nn[i]) == [j for _, j in d[:4]]


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_synthetic_rows_lie_on_neighbor_segments(seed):
    r = np.random.default_rng(seed)
    n, d = int(r.integers(2, 25)), int(r.integers(1, 6))
    X = r.random((n, d))
    k = int(r.integers(1, n))
    m = int(r.integers(1, 50))
    out = smote(X, m, k, seed=seed)
    nn = nearest_neighbors(X, k)
    lo, hi = X.min(axis=0), X.max(axis=0)
    assert np.all(out >= lo - 1e-12) and np.all(out <= hi + 1e-12)
    for i, row in enumerate(out):
        p = X[i % n]
        assert min(segment_residual(p, X[q], row)[0] for q in nn[i % n]) < 1e-9


def test_estimator_balances_classes(rng):
    X = rng.random((30, 2))
    y = np.r_[np.zeros(22, int), np.ones(8, int)]
    Xr, yr = SMOTE(k_neighbors=3, random_state=1).fit_resample(X, y)
    assert np.bincount(yr).tolist() == [22, 22]
    assert np.array_equal(Xr[:30], X)


def test_estimator_leaves_balanced_input_alone(rng):
    X = rng.random((10, 2))
    y = np.arange(10) % 2
    est = SMOTE()
    Xr, yr = est.fit_resample(X, y)
    assert est.n_synthetic_ == 0
    assert np.array_equal(Xr, X) and np.array_equal(yr, y)
