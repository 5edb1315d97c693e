"""Linear soft-margin SVM trained by mini-batch Pegasos."""

import numpy as np

from ..exceptions import RejectedInputError
from .._random import as_rng
from .base import BinaryClassifier


class LinearSVMClassifier(BinaryClassifier):
    """Hinge loss with L2 penalty ``lambda = 1 / (C * n)``.

    A constant feature carries the bias.  Step ``t`` uses learning rate
    ``1 / (lambda * t)`` followed by projection onto the ball of radius
    ``1 / sqrt(lambda)``; the returned weights average the iterates of the
    second half of training.  The score is the signed margin.
    """

    def __init__(self, C=1.0, epochs=50, batch_size=32, random_state=0):
        self.C = C
        self.epochs = epochs
        self.batch_size = batch_size
        self.random_state = random_state

    def _fit(self, X, t):
        if not self.C > 0 or self.epochs < 1 or self.batch_size < 1:
            raise RejectedInputError("C > 0, epochs >= 1 and batch_size >= 1 required")
        rng = as_rng(self.random_state)
        n = X.shape[0]
        Xb = np.hstack([X, np.ones((n, 1))])
        s = 2.0 * t - 1.0
        lam = 1.0 / (self.C * n)
        radius = 1.0 / np.sqrt(lam)
        bs = min(self.batch_size, n)
        steps_per_epoch = -(-n // bs)
        total = self.epochs * steps_per_epoch
        start_avg = total // 2
        w = np.zeros(Xb.shape[1])
        w_sum = np.zeros_like(w)
        step = 0
        for _ in range(self.epochs):
            order = rng.permutation(n)
            for lo in range(0, n, bs):
                idx = order[lo:lo + bs]
                step += 1
                eta = 1.0 / (lam * step)
                viol = s[idx] * (Xb[idx] @ w) < 1.0
                w *= 1.0 - eta * lam
                if viol.any():
                    w += eta / idx.size * (s[idx][viol] @ Xb[idx][viol])
                norm = np.linalg.norm(w)
                if norm > radius:
                    w *= radius / norm
                if step > start_avg:
                    w_sum += w
        self.coef_ = w_sum[:-1] / (total - start_avg)
        self.intercept_ = float(w_sum[-1] / (total - start_avg))

    def _score(self, X):
        return np.einsum("ij,j->i", X, self.coef_) + self.intercept_
