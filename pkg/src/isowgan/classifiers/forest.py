"""Bagged Gini trees."""

import numpy as np

from ..exceptions import RejectedInputError
from .._random import as_rng
from .base import BinaryClassifier
from .tree import build_tree


def resolve_max_features(max_features, d):
    if max_features is None:
        return d
    if max_features == "sqrt":
        return max(1, int(np.sqrt(d)))
    if isinstance(max_features, (int, np.integer)) and 1 <= max_features:
        return min(int(max_features), d)
    raise RejectedInputError(f"max_features must be None, 'sqrt' or a positive int, got {max_features!r}")


class RandomForestClassifier(BinaryClassifier):
    """Random forest; the score is the mean over trees of the leaf's positive fraction.

    One generator feeds every random draw, tree by tree: the bootstrap
    indices of tree ``k`` are drawn, then its per-node feature subsets, and
    only then anything for tree ``k + 1``.
    """

    def __init__(self, n_estimators=100, max_features="sqrt", max_depth=None, min_samples_split=2,
                 bootstrap=True, random_state=0):
        self.n_estimators = n_estimators
        self.max_features = max_features
        self.max_depth = max_depth
        self.min_samples_split = min_samples_split
        self.bootstrap = bootstrap
        self.random_state = random_state

    def _fit(self, X, t):
        if self.n_estimators < 1:
            raise RejectedInputError(f"n_estimators must be >= 1, got {self.n_estimators}")
        rng = as_rng(self.random_state)
        n, d = X.shape
        m = resolve_max_features(self.max_features, d)
        self.estimators_ = []
        for _ in range(self.n_estimators):
            idx = rng.integers(0, n, size=n) if self.bootstrap else np.arange(n)
            self.estimators_.append(build_tree(X[idx], t[idx], "gini", self.max_depth, self.min_samples_split,
                                               max_features=m, rng=rng))

    def _score(self, X):
        return np.mean([tree.predict(X) for tree in self.estimators_], axis=0)
