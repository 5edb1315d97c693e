"""Shared pieces of the resampler estimators."""

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_array, check_X_y

from .exceptions import RejectedInputError


def minority_label(y):
    """The rarer of the two labels in ``y``; label 1 on a tie."""
    labels, counts = np.unique(y, return_counts=True)
    if labels.size != 2:
        raise RejectedInputError(f"expected exactly two classes, got {labels.tolist()}")
    if counts[0] == counts[1]:
        return labels[1]
    return labels[np.argmin(counts)]


def check_unit_interval(X, what="X"):
    X = check_array(X, dtype=np.float64)
    if X.size and (X.min() < 0.0 or X.max() > 1.0):
        raise RejectedInputError(f"{what} entries must lie in [0, 1]; normalize the data first")
    return X


class BalancingResampler(BaseEstimator):
    """Oversample the minority class until both classes have equal counts.

    Subclasses implement ``_fit_minority(X_min)`` and ``_generate(n)``.
    Attributes set by :meth:`fit_resample`: ``minority_label_``,
    ``n_synthetic_``.
    """

    def fit_resample(self, X, y):
        X, y = check_X_y(X, y, dtype=np.float64)
        label = minority_label(y)
        X_min = X[y == label]
        n_needed = int(np.sum(y != label) - X_min.shape[0])
        self.minority_label_ = label
        self.n_synthetic_ = n_needed
        if n_needed == 0:
            return X, y
        self._fit_minority(X_min)
        synthetic = self._generate(n_needed)
        X_out = np.vstack([X, synthetic])
        y_out = np.concatenate([y, np.full(n_needed, label, dtype=y.dtype)])
        return X_out, y_out


class NoResampling(BalancingResampler):
    """Identity augmenter: returns the training data unchanged."""

    def fit_resample(self, X, y):
        X, y = check_X_y(X, y, dtype=np.float64)
        self.minority_label_ = minority_label(y)
        self.n_synthetic_ = 0
        return X, y
