"""Quick self-test behind ``isowgan check``.

Each check returns ``(name, passed, detail)``.  The checks are small
versions of the library's property tests and take a few seconds.
"""

import numpy as np

from . import arch
from ._random import make_rng
from .eval.metrics import auc, auc_pairs
from .gan import TrainConfig, train
from .nn import ACTIVATIONS, MLPParams, forward, gradient_check
from .smote import nearest_neighbors, smote


def check_gradients(seed, n_nets=10, tol=1e-6):
    rng = make_rng(seed, "check", "gradients")
    worst = 0.0
    for k in range(n_nets):
        n_layers = int(rng.integers(1, 5))
        widths = [int(w) for w in rng.integers(1, 17, size=n_layers + 1)]
        hidden = ACTIVATIONS[k % len(ACTIVATIONS)]
        out = ACTIVATIONS[(k + 1) % len(ACTIVATIONS)]
        params = MLPParams.initialize(widths, rng, hidden, out)
        for b in params.biases:
            b[:] = rng.normal(0.0, 0.1, size=b.shape)
        X = rng.uniform(-1.0, 1.0, size=(4, widths[0]))
        targets = forward(params, X).output + 0.1 * rng.standard_normal((4, widths[-1]))
        worst = max(worst, gradient_check(params, X, "squared_error", targets))
    return "gradient check", worst < tol, f"max relative error {worst:.2e} over {n_nets} nets (limit {tol:g})"


def check_auc(seed, n=200):
    rng = make_rng(seed, "check", "auc")
    worst = 0.0
    for _ in range(n):
        m = int(rng.integers(2, 120))
        labels = np.r_[0, 1, rng.integers(0, 2, size=m - 2)]
        scores = np.round(rng.random(m), int(rng.integers(1, 4)))
        worst = max(worst, abs(auc(scores, labels) - auc_pairs(scores, labels)))
    return "auc oracle", worst < 1e-12, f"max |rank - pairs| {worst:.1e} over {n} instances"


def check_architectures(seed, n=200):
    rng = make_rng(seed, "check", "arch")
    bad = 0
    for _ in range(n):
        d = int(rng.integers(1, 40))
        hidden = [int(w) for w in rng.integers(1, 129, size=int(rng.integers(1, 5)))]
        specs = [arch.build_isomorphic(d, hidden), arch.build_mirror(d, hidden),
                 arch.build_self_symmetric(d, hidden), arch.build_unconstrained(d, hidden, hidden[::-1])]
        specs += [arch.build_relative_isomorphic(d, hidden, delta) for delta in arch.RELATIVE_DELTAS]
        for s in specs:
            bad += bool(arch.validate(s)) or arch.ArchSpec.from_json(s.to_json()) != s
    worked = (arch.build_relative_isomorphic(8, (64, 32), 0.10).d_hidden == (70, 35)
              and arch.build_relative_isomorphic(8, (64, 32), -0.30).d_hidden == (45, 22))
    return "architecture validators", bad == 0 and worked, f"{bad} invalid round trips; worked widths ok={worked}"


def check_smote(seed, n=50):
    rng = make_rng(seed, "check", "smote")
    bad = 0
    for k in range(n):
        rows, d = int(rng.integers(2, 30)), int(rng.integers(1, 6))
        X = rng.random((rows, d))
        kk = int(rng.integers(1, rows))
        syn = smote(X, int(rng.integers(1, 60)), kk, seed=k)
        lo, hi = X.min(axis=0), X.max(axis=0)
        bad += int(np.sum(np.any((syn < lo - 1e-12) | (syn > hi + 1e-12), axis=1)))
        nn = nearest_neighbors(X, kk)
        base = np.arange(syn.shape[0]) % rows
        for i, b in enumerate(base):
            p, qs = X[b], X[nn[b]]
            # some neighbour must put the row on the segment p -> q
            ok = False
            for q in qs:
                v = q - p
                lam = float(v @ (syn[i] - p) / (v @ v)) if v @ v > 0 else 0.0
                ok |= -1e-12 <= lam <= 1 + 1e-12 and np.linalg.norm(p + lam * v - syn[i]) < 1e-9
            bad += not ok
    return "smote geometry", bad == 0, f"{bad} synthetic rows off their segment or outside the box"


def check_clipping(seed, iterations=50):
    rng = make_rng(seed, "check", "clip")
    data = np.clip(rng.normal(0.5, 0.1, size=(128, 2)), 0, 1)
    spec = arch.build_isomorphic(2, (8, 4))
    cfg = TrainConfig(iterations=iterations, batch_size=32, seed=int(rng.integers(2**31)))
    worst = []
    train(data, spec, cfg, callback=lambda ev, m: ev == "critic" and worst.append(m.critic.max_abs()))
    top = max(worst)
    return "critic clipping", top <= cfg.clip_c, f"max |critic parameter| {top:.4g} after {len(worst)} critic steps"


def run_checks(seed=0):
    return [check_gradients(seed), check_auc(seed), check_architectures(seed), check_smote(seed),
            check_clipping(seed)]
