"""Area under the ROC curve."""

import numpy as np
from scipy.stats import rankdata

from ..exceptions import RejectedInputError


def auc(scores, labels):
    """Probability that a random positive outscores a random negative; ties count one half.

    Computed from the Mann-Whitney statistic with average ranks.  ``labels``
    are 0/1 (or boolean), 1 marking the positive class.
    """
    scores = np.asarray(scores, dtype=np.float64).ravel()
    labels = np.asarray(labels).ravel()
    if scores.shape != labels.shape:
        raise RejectedInputError(f"{scores.size} scores but {labels.size} labels")
    if not np.all(np.isfinite(scores)):
        raise RejectedInputError("scores must be finite")
    pos = labels == 1
    if not np.all(pos | (labels == 0)):
        raise RejectedInputError("labels must be 0 or 1")
    n_pos = int(pos.sum())
    n_neg = labels.size - n_pos
    if n_pos == 0 or n_neg == 0:
        raise RejectedInputError("AUC needs both classes present")
    ranks = rankdata(scores, method="average")
    u = ranks[pos].sum() - n_pos * (n_pos + 1) / 2.0
    return float(u / (n_pos * n_neg))


def auc_pairs(scores, labels):
    """Brute-force pair count; quadratic, meant as a reference."""
    scores = np.asarray(scores, dtype=np.float64)
    labels = np.asarray(labels)
    p, n = scores[labels == 1], scores[labels == 0]
    if p.size == 0 or n.size == 0:
        raise RejectedInputError("AUC needs both classes present")
    diff = p[:, None] - n[None, :]
    return float(((diff > 0).sum() + 0.5 * (diff == 0).sum()) / (p.size * n.size))
