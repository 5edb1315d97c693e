"""SMOTE minority oversampling.

Base rows are taken in index order, cycling as often as needed, so every
minority row seeds the same number of synthetic rows (up to one).  For each
base row ``p`` one of its ``k`` nearest minority neighbours ``q`` is drawn
uniformly and the synthetic row is ``p + lam * (q - p)`` with ``lam`` uniform
on [0, 1].  Neighbour ties are broken by lower row index; duplicate rows count
as neighbours at distance 0.
"""

import numpy as np
from sklearn.utils.validation import check_array

from ._random import as_rng, derive_seed
from .base import BalancingResampler
from .exceptions import RejectedInputError


def nearest_neighbors(X, k):
    """Indices of the ``k`` nearest other rows of each row, shape ``(n, k)``."""
    diff = X[:, None, :] - X[None, :, :]
    dist = np.sqrt(np.einsum("ijk,ijk->ij", diff, diff))
    np.fill_diagonal(dist, np.inf)
    return np.argsort(dist, axis=1, kind="stable")[:, :k]


def smote(minority, n_needed, k=5, seed=0):
    """Return ``n_needed`` synthetic rows interpolated within ``minority``."""
    minority = check_array(minority, dtype=np.float64)
    n = minority.shape[0]
    if n < 2:
        raise RejectedInputError(f"SMOTE needs at least 2 minority rows, got {n}")
    if k < 1 or k > n - 1:
        raise RejectedInputError(f"k must be in [1, {n - 1}] for {n} minority rows, got {k}")
    if n_needed < 0:
        raise RejectedInputError(f"n_needed must be >= 0, got {n_needed}")
    if n_needed == 0:
        return np.empty((0, minority.shape[1]))
    rng = as_rng(seed)
    neighbors = nearest_neighbors(minority, k)
    base = np.arange(n_needed) % n
    pick = rng.integers(0, k, size=n_needed)
    lam = rng.random(n_needed)[:, None]
    p = minority[base]
    q = minority[neighbors[base, pick]]
    return p + lam * (q - p)


class SMOTE(BalancingResampler):
    """Estimator wrapper around :func:`smote` that balances classes 1:1."""

    def __init__(self, k_neighbors=5, random_state=0):
        self.k_neighbors = k_neighbors
        self.random_state = random_state

    def _fit_minority(self, X_min):
        self.minority_ = X_min

    def _generate(self, n):
        return smote(self.minority_, n, self.k_neighbors, derive_seed(self.random_state, "smote"))
