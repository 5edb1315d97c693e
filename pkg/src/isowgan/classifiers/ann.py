"""One-hidden-layer perceptron trained with Adam on the log loss."""

import numpy as np

from ..nn import Adam, MLPParams, backward, forward
from ..exceptions import RejectedInputError
from .._random import as_rng
from .base import BinaryClassifier


def data_gradients(params, cache, t):
    """Gradients of the mean log loss, taken through the output pre-activation."""
    n = cache.output.shape[0]
    return backward(params, cache, (cache.output - t) / n, wrt="preactivation")


def regularized_loss(params, X, t, alpha):
    """Mean log loss plus ``alpha / 2 * sum(W**2) / n`` (biases unpenalized)."""
    out = forward(params, X).output
    eps = np.finfo(np.float64).tiny
    n = X.shape[0]
    ll = -np.mean(t * np.log(np.maximum(out, eps)) + (1 - t) * np.log(np.maximum(1 - out, eps)))
    return float(ll + 0.5 * alpha * sum(np.sum(w * w) for w in params.weights) / n)


class ANNClassifier(BinaryClassifier):
    """``hidden_units`` relu units and a sigmoid output.

    Each epoch visits the rows in a fresh permutation, in mini-batches of
    ``min(batch_size, n)``.  The L2 term is scaled by the batch size.
    """

    def __init__(self, hidden_units=100, learning_rate=1e-3, epochs=200, batch_size=200, alpha=1e-4,
                 random_state=0):
        self.hidden_units = hidden_units
        self.learning_rate = learning_rate
        self.epochs = epochs
        self.batch_size = batch_size
        self.alpha = alpha
        self.random_state = random_state

    def _fit(self, X, t):
        if self.hidden_units < 1 or self.epochs < 0 or self.batch_size < 1 or self.alpha < 0:
            raise RejectedInputError("hidden_units, batch_size >= 1 and epochs, alpha >= 0 required")
        rng = as_rng(self.random_state)
        n, d = X.shape
        params = MLPParams.initialize((d, self.hidden_units, 1), rng, "relu", "sigmoid")
        opt = Adam(self.learning_rate)
        t = t[:, None]
        bs = min(self.batch_size, n)
        self.loss_curve_ = []
        for _ in range(self.epochs):
            order = rng.permutation(n)
            for lo in range(0, n, bs):
                idx = order[lo:lo + bs]
                cache = forward(params, X[idx])
                grads = data_gradients(params, cache, t[idx])
                for gw, w in zip(grads.weights, params.weights):
                    gw += self.alpha * w / idx.size
                opt.step(params, grads)
            self.loss_curve_.append(regularized_loss(params, X, t, self.alpha))
        self.params_ = params

    def _score(self, X):
        # einsum instead of BLAS: blocked matrix products can round a row
        # differently depending on its position in the batch
        a = X
        for i, (W, b) in enumerate(zip(self.params_.weights, self.params_.biases)):
            z = np.einsum("ij,kj->ik", a, W) + b
            if i == self.params_.n_layers - 1:
                return z[:, 0]
            a = np.maximum(z, 0.0)
