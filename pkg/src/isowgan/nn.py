"""Dense feed-forward networks with exact backpropagation.

Everything here works on 64-bit numpy arrays.  A network is an
:class:`MLPParams` holding one ``(out, in)`` weight matrix and one bias vector
per layer; :func:`forward` returns a :class:`ForwardCache` that
:func:`backward` consumes.  Optimizers update parameters in place and keep
their accumulators on the optimizer object.
"""

from dataclasses import dataclass, field

import numpy as np
from scipy.special import expit

from .exceptions import NumericFault, RejectedInputError

ACTIVATIONS = ("relu", "sigmoid", "tanh", "identity")


def activate(kind, z):
    if kind == "relu":
        return np.maximum(z, 0.0)
    if kind == "sigmoid":
        return expit(z)
    if kind == "tanh":
        return np.tanh(z)
    if kind == "identity":
        return z.copy()
    raise RejectedInputError(f"unknown activation {kind!r}; expected one of {ACTIVATIONS}")


def activation_derivative(kind, z, a):
    """Derivative of the activation at pre-activation ``z`` (with ``a = f(z)``).

    The relu derivative at exactly 0 is 0.
    """
    if kind == "relu":
        return (z > 0.0).astype(np.float64)
    if kind == "sigmoid":
        return a * (1.0 - a)
    if kind == "tanh":
        return 1.0 - a * a
    if kind == "identity":
        return np.ones_like(z)
    raise RejectedInputError(f"unknown activation {kind!r}; expected one of {ACTIVATIONS}")


@dataclass
class MLPParams:
    """Weights and biases of a fully connected network.

    ``widths`` lists every layer width from input to output, so a network with
    ``len(widths) - 1`` affine layers.  ``weights[i]`` has shape
    ``(widths[i + 1], widths[i])``.
    """

    widths: tuple
    weights: list
    biases: list
    hidden_activation: str = "relu"
    output_activation: str = "identity"

    def __post_init__(self):
        self.widths = tuple(int(w) for w in self.widths)
        if len(self.widths) < 2:
            raise RejectedInputError("a network needs at least one layer (two widths)")
        if any(w < 1 for w in self.widths):
            raise RejectedInputError(f"all widths must be >= 1, got {self.widths}")
        for kind in (self.hidden_activation, self.output_activation):
            if kind not in ACTIVATIONS:
                raise RejectedInputError(f"unknown activation {kind!r}")
        if len(self.weights) != self.n_layers or len(self.biases) != self.n_layers:
            raise RejectedInputError("weights/biases do not match the number of layers")
        for i, (w, b) in enumerate(zip(self.weights, self.biases)):
            expected = (self.widths[i + 1], self.widths[i])
            if w.shape != expected or b.shape != (expected[0],):
                raise RejectedInputError(
                    f"layer {i}: weight {w.shape} / bias {b.shape} inconsistent with widths {self.widths}"
                )

    @classmethod
    def initialize(cls, widths, rng, hidden_activation="relu", output_activation="identity"):
        """Glorot-uniform weights, zero biases."""
        widths = tuple(int(w) for w in widths)
        weights, biases = [], []
        for fan_in, fan_out in zip(widths[:-1], widths[1:]):
            limit = np.sqrt(6.0 / (fan_in + fan_out))
            weights.append(rng.uniform(-limit, limit, size=(fan_out, fan_in)))
            biases.append(np.zeros(fan_out))
        return cls(widths, weights, biases, hidden_activation, output_activation)

    @classmethod
    def zeros(cls, widths, hidden_activation="relu", output_activation="identity"):
        widths = tuple(int(w) for w in widths)
        weights = [np.zeros((o, i)) for i, o in zip(widths[:-1], widths[1:])]
        biases = [np.zeros(o) for o in widths[1:]]
        return cls(widths, weights, biases, hidden_activation, output_activation)

    @property
    def n_layers(self):
        return len(self.widths) - 1

    @property
    def n_params(self):
        return sum(w.size + b.size for w, b in zip(self.weights, self.biases))

    def layer_activation(self, i):
        return self.output_activation if i == self.n_layers - 1 else self.hidden_activation

    def copy(self):
        return MLPParams(
            self.widths,
            [w.copy() for w in self.weights],
            [b.copy() for b in self.biases],
            self.hidden_activation,
            self.output_activation,
        )

    def arrays(self):
        """Parameter arrays in a fixed order: W0, b0, W1, b1, ..."""
        out = []
        for w, b in zip(self.weights, self.biases):
            out.extend((w, b))
        return out

    def flat(self):
        return np.concatenate([a.ravel() for a in self.arrays()])

    def set_flat(self, values):
        values = np.asarray(values, dtype=np.float64)
        if values.shape != (self.n_params,):
            raise RejectedInputError(f"expected {self.n_params} parameters, got {values.shape}")
        pos = 0
        for a in self.arrays():
            a[...] = values[pos:pos + a.size].reshape(a.shape)
            pos += a.size

    def max_abs(self):
        return max(float(np.max(np.abs(a))) for a in self.arrays())

    def is_finite(self):
        return all(np.all(np.isfinite(a)) for a in self.arrays())

    def to_dict(self):
        return {
            "widths": list(self.widths),
            "hidden_activation": self.hidden_activation,
            "output_activation": self.output_activation,
            "params": self.flat().tolist(),
        }

    @classmethod
    def from_dict(cls, d):
        net = cls.zeros(d["widths"], d["hidden_activation"], d["output_activation"])
        net.set_flat(d["params"])
        return net


@dataclass
class ForwardCache:
    """Per-layer pre-activations and the post-activations feeding each layer.

    ``inputs[0]`` is the batch itself and ``inputs[-1]`` the network output.
    """

    inputs: list = field(default_factory=list)
    pre: list = field(default_factory=list)

    @property
    def output(self):
        return self.inputs[-1]


@dataclass
class Gradients:
    weights: list
    biases: list
    inputs: np.ndarray

    def arrays(self):
        out = []
        for w, b in zip(self.weights, self.biases):
            out.extend((w, b))
        return out

    def flat(self):
        return np.concatenate([a.ravel() for a in self.arrays()])


def _as_batch(X, width, what="batch"):
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[1] != width:
        raise RejectedInputError(f"{what} must have shape (n, {width}), got {X.shape}")
    return X


def forward(params, X):
    """Evaluate the network on the rows of ``X`` and keep what backward needs."""
    a = _as_batch(X, params.widths[0])
    cache = ForwardCache(inputs=[a])
    for i, (w, b) in enumerate(zip(params.weights, params.biases)):
        z = a @ w.T + b
        a = activate(params.layer_activation(i), z)
        cache.pre.append(z)
        cache.inputs.append(a)
    return cache


def predict(params, X):
    return forward(params, X).output


def backward(params, cache, output_grad, wrt="output"):
    """Backpropagate ``output_grad`` (dL/d output) through the network.

    With ``wrt="preactivation"`` the supplied gradient is taken with respect to
    the final pre-activation instead, which avoids dividing by a saturated
    sigmoid derivative.  Returns gradients for every weight, bias and for the
    batch itself.
    """
    out = cache.output
    delta = np.asarray(output_grad, dtype=np.float64)
    if delta.shape != out.shape:
        raise RejectedInputError(f"output_grad shape {delta.shape} != output shape {out.shape}")
    last = params.n_layers - 1
    g_w = [None] * params.n_layers
    g_b = [None] * params.n_layers
    for i in range(last, -1, -1):
        if i < last or wrt == "output":
            kind = params.layer_activation(i)
            delta = delta * activation_derivative(kind, cache.pre[i], cache.inputs[i + 1])
        g_w[i] = delta.T @ cache.inputs[i]
        g_b[i] = delta.sum(axis=0)
        delta = delta @ params.weights[i]
    return Gradients(g_w, g_b, delta)


def clip_weights(params, c, inplace=False):
    """Clamp every weight and bias into ``[-c, c]``."""
    if not c > 0:
        raise RejectedInputError(f"clip constant must be positive, got {c}")
    target = params if inplace else params.copy()
    for a in target.arrays():
        np.clip(a, -c, c, out=a)
    return target


class Optimizer:
    """Base class; subclasses implement ``_update(param, grad, slot)``."""

    def __init__(self, learning_rate):
        if not learning_rate > 0:
            raise RejectedInputError(f"learning_rate must be positive, got {learning_rate}")
        self.learning_rate = learning_rate
        self.step_count = 0
        self.slots = None

    def _init_slots(self, arrays):
        return [() for _ in arrays]

    def step(self, params, grads):
        """Apply one update to ``params`` in place and return them."""
        p_arrays = params.arrays()
        g_arrays = grads.arrays()
        if len(p_arrays) != len(g_arrays):
            raise RejectedInputError("gradient structure does not match parameters")
        for j, (p, g) in enumerate(zip(p_arrays, g_arrays)):
            if p.shape != g.shape:
                raise RejectedInputError(f"layer {j // 2}: gradient shape {g.shape} != {p.shape}")
            if not np.all(np.isfinite(g)):
                part = "weights" if j % 2 == 0 else "biases"
                raise NumericFault(f"non-finite gradient in layer {j // 2} {part}")
        if self.slots is None:
            self.slots = self._init_slots(p_arrays)
        self.step_count += 1
        for p, g, slot in zip(p_arrays, g_arrays, self.slots):
            self._update(p, g, slot)
        return params


class SGD(Optimizer):
    def _update(self, p, g, slot):
        p -= self.learning_rate * g


class RMSProp(Optimizer):
    """``acc = decay * acc + (1 - decay) * g**2;  p -= lr * g / (sqrt(acc) + eps)``"""

    def __init__(self, learning_rate=1e-3, decay=0.99, epsilon=1e-8):
        super().__init__(learning_rate)
        self.decay = decay
        self.epsilon = epsilon

    def _init_slots(self, arrays):
        return [np.zeros_like(a) for a in arrays]

    def _update(self, p, g, acc):
        acc *= self.decay
        acc += (1.0 - self.decay) * g * g
        p -= self.learning_rate * g / (np.sqrt(acc) + self.epsilon)


class Adam(Optimizer):
    def __init__(self, learning_rate=1e-3, beta1=0.9, beta2=0.999, epsilon=1e-8):
        super().__init__(learning_rate)
        self.beta1 = beta1
        self.beta2 = beta2
        self.epsilon = epsilon

    def _init_slots(self, arrays):
        return [(np.zeros_like(a), np.zeros_like(a)) for a in arrays]

    def _update(self, p, g, slot):
        m, v = slot
        m *= self.beta1
        m += (1.0 - self.beta1) * g
        v *= self.beta2
        v += (1.0 - self.beta2) * g * g
        m_hat = m / (1.0 - self.beta1 ** self.step_count)
        v_hat = v / (1.0 - self.beta2 ** self.step_count)
        p -= self.learning_rate * m_hat / (np.sqrt(v_hat) + self.epsilon)


OPTIMIZERS = {"sgd": SGD, "rmsprop": RMSProp, "adam": Adam}


def make_optimizer(kind, learning_rate, **kwargs):
    try:
        cls = OPTIMIZERS[kind]
    except KeyError:
        raise RejectedInputError(f"unknown optimizer {kind!r}; expected one of {sorted(OPTIMIZERS)}") from None
    return cls(learning_rate=learning_rate, **kwargs)


# Scalar losses used by gradient_check: value(out, t) and dL/d out.
def _squared_error(out, t):
    r = out - t
    return 0.5 * np.sum(r * r, axis=(-2, -1)) / out.shape[-2], r / out.shape[-2]


def _mean_output(out, t):
    n = out.shape[-2] * out.shape[-1]
    return np.sum(out, axis=(-2, -1)) / n, np.full(out.shape, 1.0 / n)


def _log_loss(out, t):
    n = out.shape[-2]
    value = -np.sum(t * np.log(out) + (1.0 - t) * np.log1p(-out), axis=(-2, -1)) / n
    return value, (out - t) / (out * (1.0 - out)) / n


LOSSES = {"squared_error": _squared_error, "mean_output": _mean_output, "log_loss": _log_loss}


def _perturbed_losses(params, ws, bs, zs, acts, layer, unit, delta_z, loss_fn, t):
    """Loss after adding ``delta_z[p]`` (shape ``(P, n)``) to unit ``unit[p]`` of ``layer``.

    Only one unit changes in ``layer``, so the next layer needs a rank-1
    update; everything after that is a full batched forward.
    """
    P = len(unit)
    kind = params.layer_activation(layer)
    z_col = zs[layer][:, unit].T + delta_z
    a_delta = activate(kind, z_col) - acts[layer + 1][:, unit].T
    if layer == params.n_layers - 1:
        out = np.repeat(acts[-1][None], P, axis=0)
        out[np.arange(P), :, unit] += a_delta
        return loss_fn(out, t)[0]
    nxt = layer + 1
    z = zs[nxt][None] + a_delta[:, :, None] * ws[nxt][:, unit].T[:, None, :]
    a = activate(params.layer_activation(nxt), z)
    for i in range(nxt + 1, params.n_layers):
        a = activate(params.layer_activation(i), a @ ws[i].T + bs[i])
    return loss_fn(a, t)[0]


def numeric_gradient(params, X, loss="squared_error", targets=None, step=1e-5, order=4,
                     dtype=np.longdouble, chunk=256):
    """Central finite differences of ``loss`` for every parameter, ordered like ``params.flat()``.

    ``order=2`` is the plain ``(f(p+h) - f(p-h)) / 2h`` stencil, ``order=4``
    the five-point one.  The perturbed forward passes run in ``dtype``:
    extended precision keeps the cancellation error of the differences well
    below the smallest gradients of a randomly initialized net.
    """
    if order not in (2, 4):
        raise RejectedInputError(f"order must be 2 or 4, got {order}")
    offsets = (1, -1) if order == 2 else (1, -1, 2, -2)
    loss_fn = LOSSES[loss]
    ws = [w.astype(dtype) for w in params.weights]
    bs = [b.astype(dtype) for b in params.biases]
    a = _as_batch(X, params.widths[0]).astype(dtype)
    acts, zs = [a], []
    for i in range(params.n_layers):
        zs.append(a @ ws[i].T + bs[i])
        a = activate(params.layer_activation(i), zs[-1])
        acts.append(a)
    t = np.zeros_like(a) if targets is None else np.asarray(targets, dtype=np.float64).astype(dtype)
    h = dtype(step)
    out = []
    for layer in range(params.n_layers):
        n_out, n_in = ws[layer].shape
        a_prev = acts[layer]
        # weights in row-major order, then biases
        for is_bias, size in ((False, n_out * n_in), (True, n_out)):
            grads = np.empty(size, dtype=dtype)
            for lo in range(0, size, chunk):
                idx = np.arange(lo, min(lo + chunk, size))
                unit = idx if is_bias else idx // n_in
                base = np.ones((idx.size, a_prev.shape[0]), dtype=dtype) if is_bias else a_prev[:, idx % n_in].T
                f = {k: _perturbed_losses(params, ws, bs, zs, acts, layer, unit, k * h * base, loss_fn, t)
                     for k in offsets}
                if order == 2:
                    grads[idx] = (f[1] - f[-1]) / (2 * h)
                else:
                    grads[idx] = (8 * (f[1] - f[-1]) - (f[2] - f[-2])) / (12 * h)
            out.append(grads.astype(np.float64))
    return np.concatenate(out)


def analytic_gradient(params, X, loss="squared_error", targets=None, backward_fn=None):
    loss_fn = LOSSES[loss]
    backward_fn = backward if backward_fn is None else backward_fn
    cache = forward(params, X)
    t = np.zeros_like(cache.output) if targets is None else np.asarray(targets, dtype=np.float64)
    _, g_out = loss_fn(cache.output, t)
    return backward_fn(params, cache, g_out).flat()


def gradient_check(params, X, loss="squared_error", targets=None, step=1e-5, order=4, backward_fn=None):
    """Max relative error between backprop and central finite differences.

    Relative error per parameter is ``|a - n| / max(|a|, |n|, 1e-8)``.
    ``backward_fn`` lets tests substitute a deliberately broken backward pass.
    """
    if params.n_params > 10_000:
        raise RejectedInputError(f"gradient_check is limited to 10k parameters, got {params.n_params}")
    analytic = analytic_gradient(params, X, loss, targets, backward_fn)
    numeric = numeric_gradient(params, X, loss, targets, step, order)
    denom = np.maximum(np.maximum(np.abs(analytic), np.abs(numeric)), 1e-8)
    return float(np.max(np.abs(analytic - numeric) / denom))
