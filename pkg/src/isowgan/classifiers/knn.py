"""k-nearest-neighbour vote."""

import numpy as np

from ..exceptions import RejectedInputError
from .base import BinaryClassifier


def neighbor_indices(train, queries, k, chunk=256):
    """Indices of the ``k`` training rows nearest to each query (Euclidean).

    Distance ties go to the lower training index.
    """
    out = np.empty((queries.shape[0], k), dtype=np.intp)
    for lo in range(0, queries.shape[0], chunk):
        q = queries[lo:lo + chunk]
        diff = q[:, None, :] - train[None, :, :]
        dist = np.einsum("ijk,ijk->ij", diff, diff)
        out[lo:lo + chunk] = np.argsort(dist, axis=1, kind="stable")[:, :k]
    return out


class KNNClassifier(BinaryClassifier):
    """Score is the fraction of the ``k`` nearest training rows that are positive."""

    def __init__(self, n_neighbors=5):
        self.n_neighbors = n_neighbors

    def _fit(self, X, t):
        if not 1 <= self.n_neighbors <= X.shape[0]:
            raise RejectedInputError(f"n_neighbors must be in [1, {X.shape[0]}], got {self.n_neighbors}")
        self.X_train_ = X
        self.t_train_ = t

    def _score(self, X):
        idx = neighbor_indices(self.X_train_, X, self.n_neighbors)
        return self.t_train_[idx].sum(axis=1) / self.n_neighbors
