"""GAN and WGAN training on tabular rows scaled to [0, 1].

The generator maps uniform noise on ``[-1, 1]^noise_dim`` through relu hidden
layers to a sigmoid output.  The WGAN critic has an unbounded (identity)
output and its weights are clipped to ``[-clip_c, clip_c]`` after every update;
the vanilla GAN discriminator ends in a sigmoid and is trained with the usual
cross-entropy game, the generator using the non-saturating objective.

Training consumes one PCG64 stream seeded from ``TrainConfig.seed`` in a fixed
order (generator init, critic init, then batches and noise), so a run is a
pure function of ``(data, spec, cfg)``.
"""

import csv
import io
import json
from dataclasses import asdict, dataclass, field, replace

import numpy as np
from sklearn.utils.validation import check_is_fitted

from . import arch
from ._random import as_rng, derive_seed
from .base import BalancingResampler, check_unit_interval
from .exceptions import NumericFault, RejectedInputError
from .nn import MLPParams, backward, clip_weights, forward, make_optimizer, predict

LOSS_KINDS = ("gan", "wgan")
DIVERGENCE_LIMIT = 1e6


@dataclass
class TrainConfig:
    iterations: int = 2000
    batch_size: int = 64
    n_critic: int = 5
    clip_c: float = 0.01
    learning_rate: float = 5e-5
    optimizer: str = "rmsprop"
    seed: int = 0
    loss_kind: str = "wgan"

    def __post_init__(self):
        if self.loss_kind not in LOSS_KINDS:
            raise RejectedInputError(f"loss_kind must be one of {LOSS_KINDS}, got {self.loss_kind!r}")
        if self.iterations < 0:
            raise RejectedInputError("iterations must be >= 0")
        if self.batch_size < 2:
            raise RejectedInputError(f"batch_size must be >= 2, got {self.batch_size}")
        if self.n_critic < 1:
            raise RejectedInputError(f"n_critic must be >= 1, got {self.n_critic}")
        if not self.clip_c > 0:
            raise RejectedInputError(f"clip_c must be positive, got {self.clip_c}")
        if not self.learning_rate > 0:
            raise RejectedInputError(f"learning_rate must be positive, got {self.learning_rate}")

    @classmethod
    def defaults(cls, loss_kind="wgan", **overrides):
        """WGAN: RMSProp 5e-5, n_critic 5, clip 0.01.  GAN: Adam 2e-4, one D step per G step."""
        if loss_kind == "gan":
            base = cls(loss_kind="gan", optimizer="adam", learning_rate=2e-4, n_critic=1)
        else:
            base = cls(loss_kind=loss_kind)
        return replace(base, **overrides)

    def to_dict(self):
        return asdict(self)


def _make_optimizer(cfg):
    if cfg.optimizer == "adam" and cfg.loss_kind == "gan":
        return make_optimizer("adam", cfg.learning_rate, beta1=0.5)
    return make_optimizer(cfg.optimizer, cfg.learning_rate)


@dataclass
class LossTrace:
    """One record per outer iteration: critic objective and generator loss.

    For WGAN the critic objective is ``mean f(real) - mean f(fake)`` and the
    generator loss ``-mean f(G(z))``.  For GAN they are the value function
    ``mean log D(x) + mean log(1 - D(G(z)))`` and ``-mean log D(G(z))``.
    """

    iteration: list = field(default_factory=list)
    critic_obj: list = field(default_factory=list)
    gen_loss: list = field(default_factory=list)

    def append(self, i, critic_obj, gen_loss):
        self.iteration.append(int(i))
        self.critic_obj.append(float(critic_obj))
        self.gen_loss.append(float(gen_loss))

    def __len__(self):
        return len(self.iteration)

    def to_csv(self, comment=None):
        buf = io.StringIO()
        if comment:
            buf.write(f"# {comment}\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["iter", "critic_obj", "gen_loss"])
        for i, c, g in zip(self.iteration, self.critic_obj, self.gen_loss):
            w.writerow([i, f"{c:.6f}", f"{g:.6f}"])
        return buf.getvalue()


@dataclass
class GanModel:
    generator: MLPParams
    critic: MLPParams
    spec: arch.ArchSpec
    loss_kind: str = "wgan"
    trained_for: int = 0

    def to_dict(self):
        return {
            "spec": self.spec.to_dict(),
            "loss_kind": self.loss_kind,
            "trained_for": self.trained_for,
            "generator": self.generator.to_dict(),
            "critic": self.critic.to_dict(),
        }

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, d):
        return cls(
            generator=MLPParams.from_dict(d["generator"]),
            critic=MLPParams.from_dict(d["critic"]),
            spec=arch.ArchSpec.from_dict(d["spec"]),
            loss_kind=d["loss_kind"],
            trained_for=int(d["trained_for"]),
        )

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))


def init_model(spec, loss_kind, rng):
    problems = arch.validate(spec)
    if problems:
        raise RejectedInputError("invalid architecture: " + "; ".join(problems))
    generator = MLPParams.initialize(spec.g_widths, rng, "relu", "sigmoid")
    critic = MLPParams.initialize(spec.d_widths, rng, "relu", "identity" if loss_kind == "wgan" else "sigmoid")
    return GanModel(generator, critic, spec, loss_kind)


def noise(rng, n, dim):
    return rng.uniform(-1.0, 1.0, size=(n, dim))


def _check_data(data, spec, batch_size):
    data = check_unit_interval(data, "training data")
    if data.shape[1] != spec.data_dim:
        raise RejectedInputError(f"data has {data.shape[1]} columns, architecture expects {spec.data_dim}")
    if data.shape[0] < batch_size:
        raise RejectedInputError(f"need at least batch_size={batch_size} rows, got {data.shape[0]}")
    return data


def _guard(i, *values):
    for v in values:
        if not np.isfinite(v) or abs(v) > DIVERGENCE_LIMIT:
            raise NumericFault(f"training diverged at iteration {i}: loss value {v!r}")


def _softplus(a):
    return np.logaddexp(0.0, a)


def _sigmoid(a):
    return 1.0 / (1.0 + np.exp(-a))


def train(data, spec, cfg, callback=None, trace=None):
    """Train according to ``cfg.loss_kind``; returns ``(GanModel, LossTrace)``.

    ``callback(event, model)`` is invoked after every critic update
    (``"critic"``) and every generator update (``"generator"``).  Records
    are appended to ``trace`` when one is passed, so a caller keeps the
    iterations completed before a divergence.
    """
    if cfg.loss_kind == "wgan":
        return train_wgan(data, spec, cfg, callback, trace)
    return train_gan(data, spec, cfg, callback, trace)


def train_wgan(data, spec, cfg, callback=None, trace=None):
    if cfg.loss_kind != "wgan":
        raise RejectedInputError("train_wgan needs cfg.loss_kind == 'wgan'")
    data = _check_data(data, spec, cfg.batch_size)
    rng = as_rng(cfg.seed)
    model = init_model(spec, "wgan", rng)
    gen, critic = model.generator, model.critic
    opt_g, opt_c = _make_optimizer(cfg), _make_optimizer(cfg)
    trace = LossTrace() if trace is None else trace
    B = cfg.batch_size
    up = np.full((B, 1), -1.0 / B)
    down = np.full((B, 1), 1.0 / B)
    for i in range(cfg.iterations):
        for _ in range(cfg.n_critic):
            real = data[rng.choice(data.shape[0], B, replace=False)]
            fake = predict(gen, noise(rng, B, spec.noise_dim))
            c_real, c_fake = forward(critic, real), forward(critic, fake)
            critic_obj = c_real.output.mean() - c_fake.output.mean()
            # ascend mean f(real) - mean f(fake)
            g_real = backward(critic, c_real, up)
            g_fake = backward(critic, c_fake, down)
            for a, b in zip(g_real.arrays(), g_fake.arrays()):
                a += b
            try:
                opt_c.step(critic, g_real)
            except NumericFault as exc:
                raise NumericFault(f"iteration {i}: critic update: {exc}") from None
            clip_weights(critic, cfg.clip_c, inplace=True)
            if callback is not None:
                callback("critic", model)

        g_cache = forward(gen, noise(rng, B, spec.noise_dim))
        c_fake = forward(critic, g_cache.output)
        gen_loss = -c_fake.output.mean()
        grad_fake = backward(critic, c_fake, up).inputs
        try:
            opt_g.step(gen, backward(gen, g_cache, grad_fake))
        except NumericFault as exc:
            raise NumericFault(f"iteration {i}: generator update: {exc}") from None
        _guard(i, critic_obj, gen_loss)
        trace.append(i, critic_obj, gen_loss)
        model.trained_for = i + 1
        if callback is not None:
            callback("generator", model)
    return model, trace


def train_gan(data, spec, cfg, callback=None, trace=None):
    if cfg.loss_kind != "gan":
        raise RejectedInputError("train_gan needs cfg.loss_kind == 'gan'")
    data = _check_data(data, spec, cfg.batch_size)
    rng = as_rng(cfg.seed)
    model = init_model(spec, "gan", rng)
    gen, disc = model.generator, model.critic
    opt_g, opt_d = _make_optimizer(cfg), _make_optimizer(cfg)
    trace = LossTrace() if trace is None else trace
    B = cfg.batch_size
    for i in range(cfg.iterations):
        for _ in range(cfg.n_critic):
            real = data[rng.choice(data.shape[0], B, replace=False)]
            fake = predict(gen, noise(rng, B, spec.noise_dim))
            d_real, d_fake = forward(disc, real), forward(disc, fake)
            a_real, a_fake = d_real.pre[-1], d_fake.pre[-1]
            value = -_softplus(-a_real).mean() - _softplus(a_fake).mean()
            # minimize -[log D(x) + log(1 - D(G(z)))], gradients w.r.t. the logits
            g_real = backward(disc, d_real, -(1.0 - _sigmoid(a_real)) / B, wrt="preactivation")
            g_fake = backward(disc, d_fake, _sigmoid(a_fake) / B, wrt="preactivation")
            for a, b in zip(g_real.arrays(), g_fake.arrays()):
                a += b
            try:
                opt_d.step(disc, g_real)
            except NumericFault as exc:
                raise NumericFault(f"iteration {i}: discriminator update: {exc}") from None
            if callback is not None:
                callback("critic", model)

        g_cache = forward(gen, noise(rng, B, spec.noise_dim))
        d_fake = forward(disc, g_cache.output)
        a_fake = d_fake.pre[-1]
        gen_loss = _softplus(-a_fake).mean()
        grad_fake = backward(disc, d_fake, -(1.0 - _sigmoid(a_fake)) / B, wrt="preactivation").inputs
        try:
            opt_g.step(gen, backward(gen, g_cache, grad_fake))
        except NumericFault as exc:
            raise NumericFault(f"iteration {i}: generator update: {exc}") from None
        _guard(i, value, gen_loss)
        trace.append(i, value, gen_loss)
        model.trained_for = i + 1
        if callback is not None:
            callback("generator", model)
    return model, trace


def train_critic(real, fake, spec, cfg, callback=None):
    """Fit only the WGAN critic to separate two fixed samples.

    The generator keeps its initialization.  Used to probe how the dual
    estimate responds to a known shift between distributions.
    """
    real = _check_data(real, spec, cfg.batch_size)
    fake = _check_data(fake, spec, cfg.batch_size)
    rng = as_rng(cfg.seed)
    model = init_model(spec, "wgan", rng)
    critic = model.critic
    opt = _make_optimizer(replace(cfg, loss_kind="wgan"))
    B = cfg.batch_size
    up = np.full((B, 1), -1.0 / B)
    down = np.full((B, 1), 1.0 / B)
    for i in range(cfg.iterations * cfg.n_critic):
        c_real = forward(critic, real[rng.choice(real.shape[0], B, replace=False)])
        c_fake = forward(critic, fake[rng.choice(fake.shape[0], B, replace=False)])
        g = backward(critic, c_real, up)
        for a, b in zip(g.arrays(), backward(critic, c_fake, down).arrays()):
            a += b
        opt.step(critic, g)
        clip_weights(critic, cfg.clip_c, inplace=True)
        if callback is not None:
            callback("critic", model)
    model.trained_for = cfg.iterations
    return model


def sample(model, n, seed=0):
    """Draw ``n`` synthetic rows; entries lie in [0, 1]."""
    if n < 0:
        raise RejectedInputError(f"n must be >= 0, got {n}")
    rng = as_rng(seed)
    return predict(model.generator, noise(rng, n, model.spec.noise_dim))


def critic_estimate(model, real, fake):
    """``mean f(real) - mean f(fake)``: the dual estimate of the Wasserstein-1 distance, up to scale."""
    real = np.asarray(real, dtype=np.float64)
    fake = np.asarray(fake, dtype=np.float64)
    if real.shape[0] == 0 or fake.shape[0] == 0:
        raise RejectedInputError("both batches must be non-empty")
    return float(predict(model.critic, real).mean() - predict(model.critic, fake).mean())


class WGANAugmenter(BalancingResampler):
    """Oversample the minority class with rows from a WGAN generator.

    ``constraint`` chooses the generator/critic pairing
    (see :mod:`isowgan.arch`).  ``fit`` trains on the rows it is given;
    ``fit_resample`` trains on the minority rows only and returns the balanced
    training set.  When fewer rows than ``batch_size`` are available the batch
    is shrunk to the row count.
    """

    loss_kind = "wgan"

    def __init__(self, constraint="isomorphic", hidden=arch.DEFAULT_HIDDEN, d_hidden=None, delta=None,
                 iterations=2000, batch_size=64, n_critic=5, clip_c=0.01, learning_rate=5e-5,
                 optimizer="rmsprop", random_state=0):
        self.constraint = constraint
        self.hidden = hidden
        self.d_hidden = d_hidden
        self.delta = delta
        self.iterations = iterations
        self.batch_size = batch_size
        self.n_critic = n_critic
        self.clip_c = clip_c
        self.learning_rate = learning_rate
        self.optimizer = optimizer
        self.random_state = random_state

    def _config(self, n_rows):
        return TrainConfig(
            iterations=self.iterations,
            batch_size=max(2, min(self.batch_size, n_rows)),
            n_critic=self.n_critic,
            clip_c=self.clip_c,
            learning_rate=self.learning_rate,
            optimizer=self.optimizer,
            seed=derive_seed(self.random_state, "train"),
            loss_kind=self.loss_kind,
        )

    def fit(self, X, y=None):
        X = check_unit_interval(X)
        self.spec_ = arch.build(self.constraint, X.shape[1], self.hidden, self.delta, self.d_hidden)
        self.config_ = self._config(X.shape[0])
        self.model_, self.trace_ = train(X, self.spec_, self.config_)
        self._n_sampled = 0
        return self

    def sample(self, n, random_state=None):
        check_is_fitted(self, "model_")
        if random_state is None:
            random_state = derive_seed(self.random_state, "sample", self._n_sampled)
            self._n_sampled += 1
        return sample(self.model_, n, random_state)

    def _fit_minority(self, X_min):
        self.fit(X_min)

    def _generate(self, n):
        return self.sample(n)


class GANAugmenter(WGANAugmenter):
    """Vanilla GAN counterpart of :class:`WGANAugmenter` (Adam 2e-4, one D step per G step)."""

    loss_kind = "gan"

    def __init__(self, constraint="unconstrained", hidden=arch.DEFAULT_HIDDEN, d_hidden=None, delta=None,
                 iterations=2000, batch_size=64, n_critic=1, clip_c=0.01, learning_rate=2e-4,
                 optimizer="adam", random_state=0):
        super().__init__(constraint, hidden, d_hidden, delta, iterations, batch_size, n_critic, clip_c,
                         learning_rate, optimizer, random_state)
