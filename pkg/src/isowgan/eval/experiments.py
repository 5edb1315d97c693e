"""Convergence comparison and the relative-isomorphism sweep."""

import logging
from dataclasses import dataclass, field

import numpy as np
from scipy.stats import spearmanr

from .. import arch
from .._random import derive_seed
from ..classifiers import CLASSIFIER_KINDS
from ..data import split_by_class
from ..exceptions import NumericFault
from ..gan import LossTrace, TrainConfig, train
from .folds import stratified_folds
from .grid import AugmentationCache, ExperimentConfig, augmenter_name, run_cell

log = logging.getLogger(__name__)


@dataclass
class ConvergenceResult:
    dataset: str
    wgan: LossTrace
    iwgan: LossTrace
    iterations: int
    diagnostics: dict = field(default_factory=dict)

    @property
    def initial_ratio(self):
        """``iwgan / wgan`` generator loss at iteration 0 (magnitudes)."""
        if not self.wgan.gen_loss or not self.iwgan.gen_loss or self.wgan.gen_loss[0] == 0:
            return float("nan")
        return abs(self.iwgan.gen_loss[0]) / abs(self.wgan.gen_loss[0])

    def aligned(self):
        """Rows ``(iter, wgan_gen_loss, iwgan_gen_loss)``; NaN past a divergence."""
        def column(trace):
            col = np.full(self.iterations, np.nan)
            col[:len(trace)] = trace.gen_loss
            return col

        w, i = column(self.wgan), column(self.iwgan)
        return [(k, w[k], i[k]) for k in range(self.iterations)]


def convergence_compare(dataset, cfg=None):
    """Train plain WGAN and IWGAN on the minority rows with one shared config and seed.

    Both generators have the hidden widths ``cfg.hidden``; the plain WGAN
    critic uses ``cfg.d_hidden`` and the IWGAN critic mirrors the generator.
    """
    cfg = ExperimentConfig() if cfg is None else cfg
    minority, _ = split_by_class(dataset)
    train_cfg = TrainConfig(iterations=cfg.iterations, batch_size=max(2, min(cfg.batch_size, minority.shape[0])),
                            n_critic=cfg.n_critic, clip_c=cfg.clip_c, learning_rate=cfg.learning_rate,
                            optimizer=cfg.optimizer, seed=derive_seed(cfg.seed, dataset.name, "convergence"))
    d = dataset.n_features
    specs = {"wgan": arch.build_unconstrained(d, cfg.hidden, cfg.d_hidden),
             "iwgan": arch.build_isomorphic(d, cfg.hidden)}
    traces, diagnostics = {}, {}
    for name, spec in specs.items():
        traces[name] = LossTrace()
        try:
            train(minority, spec, train_cfg, trace=traces[name])
        except NumericFault as exc:
            diagnostics[name] = str(exc)
            log.warning("%s on %s diverged: %s", name, dataset.name, exc)
    return ConvergenceResult(dataset.name, traces["wgan"], traces["iwgan"], cfg.iterations, diagnostics)


@dataclass
class SweepResult:
    dataset: str
    rows: list  # (delta, classifier, mean_auc), sorted by |delta| then delta
    trend: dict  # classifier -> Spearman correlation of |delta| against mean AUC
    cells: list


def sweep_order(deltas):
    return sorted(deltas, key=lambda d: (abs(d), d))


def relative_iso_sweep(dataset, classifiers=CLASSIFIER_KINDS, deltas=arch.RELATIVE_DELTAS, cfg=None,
                       progress=None):
    """Mean AUC of r-IWGAN for each delta, plus exact IWGAN as delta 0.

    A negative trend statistic means AUC falls as the critic's widths move
    away from the generator's.
    """
    cfg = ExperimentConfig() if cfg is None else cfg
    plan = stratified_folds(dataset.y, cfg.folds, derive_seed(cfg.seed, dataset.name))
    deltas = sweep_order([0.0, *deltas])
    cells, rows = [], []
    for delta in deltas:
        name = "iwgan" if delta == 0 else augmenter_name("r_iwgan", delta)
        cache = AugmentationCache()
        for kind in classifiers:
            cell = run_cell(dataset, name, kind, plan, cfg, cache)
            cells.append(cell)
            rows.append((delta, kind, cell.mean_auc))
            if progress is not None:
                progress(cell)
    rows.sort(key=lambda r: (abs(r[0]), r[0], r[1]))
    trend = {}
    for kind in classifiers:
        pts = [(abs(d), m) for d, k, m in rows if k == kind and np.isfinite(m)]
        if len(pts) < 3 or len({p[1] for p in pts}) < 2:
            trend[kind] = float("nan")
        else:
            trend[kind] = float(spearmanr([p[0] for p in pts], [p[1] for p in pts]).statistic)
    return SweepResult(dataset.name, rows, trend, cells)
