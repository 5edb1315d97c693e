"""Gradient boosting of regression trees on the logistic loss."""

import numpy as np
from scipy.special import expit

from ..exceptions import RejectedInputError
from .base import BinaryClassifier
from .tree import build_tree


def logistic_loss(t, F):
    """Mean negative log-likelihood for raw scores ``F``."""
    return float(np.mean(np.logaddexp(0.0, F) - t * F))


class GradientBoostingClassifier(BinaryClassifier):
    """Stage ``m`` fits a depth-limited tree to the residuals ``t - p`` and
    replaces each leaf value by the Newton step ``sum(r) / sum(p * (1 - p))``.

    The initial raw score is the training log-odds.  ``train_loss_[m]`` is the
    training loss after ``m`` stages.  The score is the raw log-odds.
    """

    def __init__(self, n_estimators=100, learning_rate=0.1, max_depth=3, min_samples_split=2):
        self.n_estimators = n_estimators
        self.learning_rate = learning_rate
        self.max_depth = max_depth
        self.min_samples_split = min_samples_split

    def _fit(self, X, t):
        if self.n_estimators < 0 or not self.learning_rate > 0 or self.max_depth < 1:
            raise RejectedInputError("n_estimators >= 0, learning_rate > 0 and max_depth >= 1 required")
        p0 = t.mean()
        self.init_ = float(np.log(p0 / (1.0 - p0)))
        F = np.full(t.shape[0], self.init_)
        self.estimators_ = []
        self.train_loss_ = [logistic_loss(t, F)]
        for _ in range(self.n_estimators):
            p = expit(F)
            r = t - p
            tree = build_tree(X, r, "squared_error", self.max_depth, self.min_samples_split)
            leaves = tree.apply(X)
            num = np.bincount(leaves, weights=r, minlength=tree.n_nodes)
            den = np.bincount(leaves, weights=p * (1.0 - p), minlength=tree.n_nodes)
            safe = den > 1e-150
            tree.value = np.where(safe, num / np.where(safe, den, 1.0), 0.0)
            F += self.learning_rate * tree.value[leaves]
            self.estimators_.append(tree)
            self.train_loss_.append(logistic_loss(t, F))

    def staged_decision_function(self, X):
        X = self._check_features(X)
        F = np.full(X.shape[0], self.init_)
        yield F.copy()
        for tree in self.estimators_:
            F += self.learning_rate * tree.predict(X)
            yield F.copy()

    def _score(self, X):
        F = np.full(X.shape[0], self.init_)
        for tree in self.estimators_:
            F += self.learning_rate * tree.predict(X)
        return F
