"""Common validation for the binary classifiers."""

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin
from sklearn.utils.validation import check_array, check_is_fitted, check_X_y

from ..exceptions import RejectedInputError


class BinaryClassifier(ClassifierMixin, BaseEstimator):
    """Two-class estimator with a ranking score.

    ``decision_function`` is larger for rows that look more like
    ``classes_[1]``.  ``predict`` thresholds it at :attr:`threshold_`.
    Subclasses implement ``_fit(X, t)`` with ``t`` in {0, 1} and
    ``_score(X)``.
    """

    threshold_ = 0.5

    def fit(self, X, y):
        X, y = check_X_y(X, y, dtype=np.float64)
        classes = np.unique(y)
        if classes.size != 2:
            raise RejectedInputError(f"need both classes to train, got labels {classes.tolist()}")
        self.classes_ = classes
        self.n_features_in_ = X.shape[1]
        self._fit(X, (y == classes[1]).astype(np.float64))
        return self

    def _check_features(self, X):
        check_is_fitted(self, "classes_")
        X = check_array(X, dtype=np.float64)
        if X.shape[1] != self.n_features_in_:
            raise RejectedInputError(
                f"{type(self).__name__} was trained on {self.n_features_in_} features, got {X.shape[1]}"
            )
        return X

    def decision_function(self, X):
        return self._score(self._check_features(X))

    def predict(self, X):
        return self.classes_[(self.decision_function(X) > self.threshold_).astype(int)]
