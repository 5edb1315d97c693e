"""Stratified k-fold plans."""

from dataclasses import dataclass

import numpy as np

from .._random import make_rng
from ..exceptions import RejectedInputError


@dataclass(frozen=True, eq=False)
class FoldPlan:
    """``assignment[i]`` is the fold holding row ``i`` out for testing.

    Works as an sklearn cross-validation splitter (``split``/``get_n_splits``).
    """

    k: int
    assignment: np.ndarray
    seed: int

    def test_indices(self, fold):
        return np.flatnonzero(self.assignment == fold)

    def train_indices(self, fold):
        return np.flatnonzero(self.assignment != fold)

    def split(self, X=None, y=None, groups=None):
        for f in range(self.k):
            yield self.train_indices(f), self.test_indices(f)

    def get_n_splits(self, X=None, y=None, groups=None):
        return self.k

    def __eq__(self, other):
        return (isinstance(other, FoldPlan) and self.k == other.k and self.seed == other.seed
                and np.array_equal(self.assignment, other.assignment))

    __hash__ = None


def stratified_folds(labels, k=10, seed=0):
    """Shuffle each class with the seed, then deal its rows round-robin to folds 0, 1, ..., k-1.

    Classes are processed in sorted label order from a single generator.
    """
    labels = np.asarray(labels)
    if k < 2:
        raise RejectedInputError(f"k must be >= 2, got {k}")
    rng = make_rng(seed, "folds")
    assignment = np.empty(labels.size, dtype=np.intp)
    for label in np.unique(labels):
        members = np.flatnonzero(labels == label)
        if members.size < k:
            raise RejectedInputError(f"class {label!r} has {members.size} rows, fewer than k={k}")
        assignment[rng.permutation(members)] = np.arange(members.size) % k
    return FoldPlan(k, assignment, seed)
