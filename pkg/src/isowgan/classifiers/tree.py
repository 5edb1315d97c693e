"""Binary-split decision trees (CART) grown depth first.

Split search is vectorized over the candidate features of a node: the node's
rows are sorted once per feature and the child impurities of every boundary
between distinct values are computed from cumulative sums.  The best split
minimizes the summed child impurity; ties go to the lowest feature index,
then the lowest threshold.  A node is only split when that sum is strictly
below the node's own impurity.

Impurities are stored "weighted", i.e. multiplied by the node size:

    gini           n * (1 - p1^2 - p0^2) = 2 * n1 * n0 / n
    squared_error  sum((y - mean(y))^2)
"""

from dataclasses import dataclass

import numpy as np

from ..exceptions import RejectedInputError

CRITERIA = ("gini", "squared_error")
LEAF = -1


def _node_impurity(y, criterion):
    n = y.shape[0]
    if criterion == "gini":
        n1 = y.sum()
        return 2.0 * n1 * (n - n1) / n
    s = y.sum()
    return float(np.dot(y, y) - s * s / n)


def _split_impurities(ys, criterion):
    """Summed child impurity for a split after each position of the sorted columns ``ys``."""
    m = ys.shape[0]
    n_left = np.arange(1, m, dtype=np.float64)[:, None]
    n_right = m - n_left
    cum = np.cumsum(ys, axis=0)
    left, total = cum[:-1], cum[-1]
    right = total - left
    if criterion == "gini":
        return 2.0 * (left * (n_left - left) / n_left + right * (n_right - right) / n_right)
    sq_total = np.einsum("ij,ij->j", ys, ys)
    return sq_total - left * left / n_left - right * right / n_right


@dataclass
class Tree:
    """Flat array representation.  Node 0 is the root; the two children of a
    split are allocated together, left first."""

    feature: np.ndarray
    threshold: np.ndarray
    left: np.ndarray
    right: np.ndarray
    value: np.ndarray
    n_samples: np.ndarray
    impurity: np.ndarray
    depth: np.ndarray

    @property
    def n_nodes(self):
        return self.feature.shape[0]

    @property
    def is_leaf(self):
        return self.feature == LEAF

    def apply(self, X):
        """Leaf index reached by each row of ``X`` (rows go left when ``x <= threshold``)."""
        node = np.zeros(X.shape[0], dtype=np.intp)
        active = np.flatnonzero(self.feature[node] != LEAF)
        while active.size:
            cur = node[active]
            go_left = X[active, self.feature[cur]] <= self.threshold[cur]
            node[active] = np.where(go_left, self.left[cur], self.right[cur])
            active = active[self.feature[node[active]] != LEAF]
        return node

    def predict(self, X):
        return self.value[self.apply(X)]


def _best_split(Xn, yn, feats, criterion):
    """Best ``(score, feature, threshold, n_left)`` over ``feats`` or ``None``."""
    cols = Xn[:, feats]
    order = np.argsort(cols, axis=0, kind="stable")
    xs = cols[order, np.arange(feats.size)]
    ys = yn[order]
    scores = _split_impurities(ys, criterion)
    scores[~(xs[1:] > xs[:-1])] = np.inf
    best = scores.min()
    if not np.isfinite(best):
        return None
    pos, col = np.nonzero(scores == best)
    # lowest feature index, then lowest threshold
    cand_feat = feats[col]
    lo = xs[pos, col]
    hi = xs[pos + 1, col]
    thr = lo + (hi - lo) / 2.0
    thr = np.where(thr >= hi, lo, thr)
    pick = np.lexsort((thr, cand_feat))[0]
    return best, int(cand_feat[pick]), float(thr[pick]), int(pos[pick]) + 1


def build_tree(X, y, criterion="gini", max_depth=None, min_samples_split=2, min_samples_leaf=1,
               max_features=None, rng=None):
    """Grow a tree on ``(X, y)``.

    ``max_features`` candidate features are drawn per node, without
    replacement, from the features that are not constant within the node (in
    the order of a fresh permutation from ``rng``).  ``None`` uses every
    feature.  Leaf values are the mean of ``y`` in the leaf.
    """
    if criterion not in CRITERIA:
        raise RejectedInputError(f"criterion must be one of {CRITERIA}, got {criterion!r}")
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    n, d = X.shape
    if n == 0:
        raise RejectedInputError("cannot grow a tree on zero rows")
    if max_features is not None and max_features < d and rng is None:
        raise RejectedInputError("feature subsampling needs an rng")
    max_depth = np.inf if max_depth is None else max_depth
    all_features = np.arange(d)

    feature, threshold, left, right, value, n_samples, impurity, depth = ([] for _ in range(8))

    def new_node(idx, dep):
        yn = y[idx]
        feature.append(LEAF)
        threshold.append(np.nan)
        left.append(LEAF)
        right.append(LEAF)
        value.append(float(yn.sum() / idx.size))
        n_samples.append(idx.size)
        impurity.append(_node_impurity(yn, criterion))
        depth.append(dep)
        return len(feature) - 1

    stack = [(np.arange(n), 0, new_node(np.arange(n), 0))]
    while stack:
        idx, dep, node = stack.pop()
        m = idx.size
        if dep >= max_depth or m < min_samples_split or m < 2 * min_samples_leaf or impurity[node] <= 0.0:
            continue
        Xn, yn = X[idx], y[idx]
        is_varying = Xn.max(axis=0) > Xn.min(axis=0)
        varying = all_features[is_varying]
        if varying.size == 0:
            continue
        if max_features is not None and max_features < varying.size:
            perm = rng.permutation(d)
            feats = perm[is_varying[perm]][:max_features]
        else:
            feats = varying
        found = _best_split(Xn, yn, feats, criterion)
        if found is None:
            continue
        score, f, thr, _ = found
        if not score < impurity[node] * (1.0 - 1e-12):
            continue
        go_left = Xn[:, f] <= thr
        li, ri = idx[go_left], idx[~go_left]
        if li.size < min_samples_leaf or ri.size < min_samples_leaf:
            continue
        feature[node], threshold[node] = f, thr
        left[node] = new_node(li, dep + 1)
        right[node] = new_node(ri, dep + 1)
        # right pushed first so the left subtree is expanded first
        stack.append((ri, dep + 1, right[node]))
        stack.append((li, dep + 1, left[node]))

    return Tree(
        feature=np.array(feature, dtype=np.intp),
        threshold=np.array(threshold),
        left=np.array(left, dtype=np.intp),
        right=np.array(right, dtype=np.intp),
        value=np.array(value),
        n_samples=np.array(n_samples, dtype=np.intp),
        impurity=np.array(impurity),
        depth=np.array(depth, dtype=np.intp),
    )
