"""From-scratch binary classifiers used to score augmented training sets."""

import numpy as np

from .._random import derive_seed
from ..exceptions import NumericFault, RejectedInputError
from .ann import ANNClassifier
from .base import BinaryClassifier
from .boosting import GradientBoostingClassifier
from .forest import RandomForestClassifier
from .knn import KNNClassifier
from .svm import LinearSVMClassifier

CLASSIFIER_KINDS = ("knn", "ann", "svm", "rf", "gbc")

_CLASSES = {
    "knn": KNNClassifier,
    "ann": ANNClassifier,
    "svm": LinearSVMClassifier,
    "rf": RandomForestClassifier,
    "gbc": GradientBoostingClassifier,
}


def make_classifier(kind, seed=0, **params):
    """Unfitted classifier of ``kind`` with its default parameters, overridden by ``params``."""
    if kind not in _CLASSES:
        raise RejectedInputError(f"unknown classifier {kind!r}; expected one of {CLASSIFIER_KINDS}")
    cls = _CLASSES[kind]
    if "random_state" in cls().get_params():
        params.setdefault("random_state", derive_seed(seed, kind))
    return cls(**params)


def train(kind, X, y, seed=0, **params):
    return make_classifier(kind, seed, **params).fit(X, y)


def score_batch(model, X):
    """Ranking scores; higher means more like ``model.classes_[1]``."""
    scores = model.decision_function(X)
    if not np.all(np.isfinite(scores)):
        raise NumericFault(f"{type(model).__name__} produced non-finite scores")
    return scores


__all__ = ["CLASSIFIER_KINDS", "BinaryClassifier", "KNNClassifier", "ANNClassifier", "LinearSVMClassifier",
           "RandomForestClassifier", "GradientBoostingClassifier", "make_classifier", "train", "score_batch"]
