"""Cross-validated comparison of augmenters and classifiers.

Randomness is keyed, never sequential, so any cell can be rerun alone:

    fold plan      (seed, dataset, "folds")
    augmenter      (seed, dataset, augmenter, fold)
    classifier     (seed, dataset, classifier, fold)

The classifier key leaves out the augmenter on purpose.  Within a
``(dataset, classifier)`` group every augmenter is compared on the same
folds and the same classifier randomness, so differences come from the
training data alone.
"""

import hashlib
import json
import logging
import re
from dataclasses import asdict, dataclass, field, replace

import numpy as np

from .. import arch
from .._random import derive_seed
from ..base import NoResampling
from ..classifiers import CLASSIFIER_KINDS, score_batch, train
from ..exceptions import IsowganError, RejectedInputError
from ..gan import GANAugmenter, WGANAugmenter
from ..smote import SMOTE
from .folds import stratified_folds
from .metrics import auc

log = logging.getLogger(__name__)

BASE_AUGMENTERS = ("none", "smote", "gan", "wgan", "iwgan", "mwgan", "swgan", "r_iwgan")
CONSTRAINED = ("iwgan", "mwgan", "swgan")
# the comparators named alongside IWGAN in the published comparison (GAN-DAE is not implemented)
PUBLISHED_COMPARATORS = ("smote", "gan", "wgan")
PUBLISHED_COUNTS = {"improved": 17, "iwgan_best": 15, "groups": 20}

_R_IWGAN = re.compile(r"^r_iwgan\(([+-]?\d*\.?\d+)\)$")


@dataclass(frozen=True)
class ExperimentConfig:
    """Every knob of an experiment run; its JSON form is the fingerprint source."""

    seed: int = 0
    folds: int = 10
    iterations: int = 2000
    batch_size: int = 64
    n_critic: int = 5
    clip_c: float = 0.01
    learning_rate: float = 5e-5
    optimizer: str = "rmsprop"
    hidden: tuple = arch.DEFAULT_HIDDEN
    d_hidden: tuple = arch.UNCONSTRAINED_CRITIC_HIDDEN
    delta: float = 0.10
    smote_k: int = 5

    def __post_init__(self):
        object.__setattr__(self, "hidden", tuple(int(w) for w in self.hidden))
        object.__setattr__(self, "d_hidden", tuple(int(w) for w in self.d_hidden))
        if self.folds < 2:
            raise RejectedInputError(f"folds must be >= 2, got {self.folds}")
        if self.iterations < 1:
            raise RejectedInputError(f"iterations must be >= 1, got {self.iterations}")
        arch.scale_width(1, self.delta)

    @classmethod
    def from_dict(cls, d):
        known = set(cls.__dataclass_fields__)
        unknown = sorted(set(d) - known)
        if unknown:
            raise RejectedInputError(f"unknown config keys {unknown}; expected a subset of {sorted(known)}")
        return cls(**d)

    def to_dict(self):
        d = asdict(self)
        d["hidden"] = list(self.hidden)
        d["d_hidden"] = list(self.d_hidden)
        return d

    def fingerprint(self, **extra):
        """``config=<json> sha256=<first 16 hex>`` over the config plus ``extra``."""
        payload = json.dumps({**self.to_dict(), **extra}, sort_keys=True, separators=(",", ":"))
        return f"config={payload} sha256={hashlib.sha256(payload.encode()).hexdigest()[:16]}"


def augmenter_name(kind, delta=None):
    return f"r_iwgan({delta:+.2f})" if kind == "r_iwgan" else kind


def parse_augmenter(name, cfg=None):
    """``(kind, delta)`` for an augmenter name; ``r_iwgan`` alone takes ``cfg.delta``."""
    m = _R_IWGAN.match(name)
    if m:
        delta = float(m.group(1))
        arch.scale_width(1, delta)
        return "r_iwgan", delta
    if name == "r_iwgan":
        return "r_iwgan", (cfg or ExperimentConfig()).delta
    if name in BASE_AUGMENTERS:
        return name, None
    raise RejectedInputError(f"unknown augmenter {name!r}; expected one of {BASE_AUGMENTERS} or r_iwgan(<delta>)")


def make_augmenter(name, cfg, seed):
    """Unfitted resampler for ``name`` seeded with ``seed``."""
    kind, delta = parse_augmenter(name, cfg)
    if kind == "none":
        return NoResampling()
    if kind == "smote":
        return SMOTE(k_neighbors=cfg.smote_k, random_state=seed)
    shared = dict(hidden=cfg.hidden, iterations=cfg.iterations, batch_size=cfg.batch_size, random_state=seed)
    if kind == "gan":
        return GANAugmenter(constraint="unconstrained", d_hidden=cfg.d_hidden, **shared)
    constraint = {"wgan": "unconstrained", "iwgan": "isomorphic", "mwgan": "mirror",
                  "swgan": "self_symmetric", "r_iwgan": "relative_isomorphic"}[kind]
    return WGANAugmenter(constraint=constraint, d_hidden=cfg.d_hidden if kind == "wgan" else None,
                         delta=delta, n_critic=cfg.n_critic, clip_c=cfg.clip_c,
                         learning_rate=cfg.learning_rate, optimizer=cfg.optimizer, **shared)


def rows_digest(X):
    """Order-independent hash of the rows of ``X``."""
    X = np.ascontiguousarray(X, dtype=np.float64)
    hashes = sorted(hashlib.sha256(row.tobytes()).hexdigest() for row in X)
    return hashlib.sha256("".join(hashes).encode()).hexdigest()


@dataclass
class CellResult:
    dataset: str
    augmenter: str
    classifier: str
    fold_aucs: list = field(default_factory=list)
    status: str = "ok"
    diagnostic: str = ""
    n_synthetic: list = field(default_factory=list)
    test_digests: list = field(default_factory=list)

    @property
    def key(self):
        return (self.dataset, self.augmenter, self.classifier)

    @property
    def ok(self):
        return self.status == "ok"

    @property
    def mean_auc(self):
        return float(np.mean(self.fold_aucs)) if self.ok else float("nan")

    @property
    def std_auc(self):
        """Population standard deviation over folds."""
        return float(np.std(self.fold_aucs)) if self.ok else float("nan")


class AugmentationCache:
    """Augmented training folds, computed once per ``(dataset, augmenter, fold)``."""

    def __init__(self):
        self._store = {}

    def get(self, dataset, name, fold, X_train, y_train, cfg):
        key = (dataset, name, fold)
        if key not in self._store:
            seed = derive_seed(cfg.seed, dataset, name, fold)
            try:
                aug = make_augmenter(name, cfg, seed)
                X_aug, y_aug = aug.fit_resample(X_train, y_train)
                self._store[key] = (X_aug, y_aug, aug.n_synthetic_, None)
            except IsowganError as exc:
                self._store[key] = (None, None, 0, f"{name} fold {fold}: {exc}")
        return self._store[key]


def run_cell(dataset, augmenter, classifier, plan, cfg, cache=None):
    """Cross-validate one ``(dataset, augmenter, classifier)`` combination.

    Synthetic rows are generated from each training split only; test splits
    are scored untouched.  An augmenter failure marks the cell failed rather
    than raising.
    """
    cache = AugmentationCache() if cache is None else cache
    if plan.assignment.shape[0] != dataset.n_rows:
        raise RejectedInputError(f"fold plan covers {plan.assignment.shape[0]} rows, dataset has {dataset.n_rows}")
    result = CellResult(dataset.name, augmenter, classifier)
    for fold in range(plan.k):
        tr, te = plan.train_indices(fold), plan.test_indices(fold)
        X_aug, y_aug, n_syn, err = cache.get(dataset.name, augmenter, fold, dataset.X[tr], dataset.y[tr], cfg)
        if err is not None:
            result.status, result.diagnostic = "failed", err
            result.fold_aucs.append(float("nan"))
            result.n_synthetic.append(0)
            result.test_digests.append("")
            continue
        X_test = dataset.X[te]
        model = train(classifier, X_aug, y_aug, derive_seed(cfg.seed, dataset.name, classifier, fold))
        scores = score_batch(model, X_test)
        result.fold_aucs.append(auc(scores, (dataset.y[te] == model.classes_[1]).astype(int)))
        result.n_synthetic.append(int(n_syn))
        result.test_digests.append(rows_digest(X_test))
    if not result.ok:
        log.warning("cell %s failed: %s", result.key, result.diagnostic)
    return result


@dataclass
class ExperimentGrid:
    cells: list
    config: ExperimentConfig
    plans: dict = field(default_factory=dict)

    def cell(self, dataset, augmenter, classifier):
        for c in self.cells:
            if c.key == (dataset, augmenter, classifier):
                return c
        raise KeyError((dataset, augmenter, classifier))

    def fingerprint(self):
        return self.config.fingerprint(datasets=sorted({c.dataset for c in self.cells}),
                                       augmenters=sorted({c.augmenter for c in self.cells}),
                                       classifiers=sorted({c.classifier for c in self.cells}))


def default_augmenters(cfg):
    return [augmenter_name(k, cfg.delta) if k == "r_iwgan" else k for k in BASE_AUGMENTERS]


def run_grid(datasets, augmenters=None, classifiers=CLASSIFIER_KINDS, cfg=None, progress=None):
    """Every dataset x augmenter x classifier, each cell on the dataset's one fold plan."""
    cfg = ExperimentConfig() if cfg is None else cfg
    augmenters = default_augmenters(cfg) if augmenters is None else list(augmenters)
    for name in augmenters:
        parse_augmenter(name, cfg)
    for kind in classifiers:
        if kind not in CLASSIFIER_KINDS:
            raise RejectedInputError(f"unknown classifier {kind!r}; expected one of {CLASSIFIER_KINDS}")
    cells, plans = [], {}
    for ds in datasets:
        plan = stratified_folds(ds.y, cfg.folds, derive_seed(cfg.seed, ds.name))
        plans[ds.name] = plan
        for name in augmenters:
            # the cache only needs to outlive one augmenter's classifiers
            cache = AugmentationCache()
            for kind in classifiers:
                cells.append(run_cell(ds, name, kind, plan, cfg, cache))
                if progress is not None:
                    progress(cells[-1])
    cells.sort(key=lambda c: c.key)
    return ExperimentGrid(cells, cfg, plans)


def summarize(means, failed=frozenset()):
    """Win counts per ``(dataset, classifier)`` group from mean AUCs.

    ``means`` maps ``(dataset, augmenter, classifier)`` to mean AUC and
    ``failed`` holds the keys of failed cells.  A group counts as
    *improved* when some constrained WGAN beats plain WGAN, and *iwgan_best*
    when IWGAN beats every other augmenter except ``none``.  Comparisons are
    strict.  Groups whose needed cells failed or are absent are left out of
    that count and listed as excluded.
    """
    groups = sorted({(d, c) for d, _, c in means} | {(d, c) for d, _, c in failed})
    augs = sorted({a for _, a, _ in means} | {a for _, a, _ in failed})
    rows = []
    for d, c in groups:
        def get(a):
            key = (d, a, c)
            return None if key in failed or key not in means else means[key]

        row = {"dataset": d, "classifier": c}
        wgan = get("wgan")
        constrained = [get(a) for a in CONSTRAINED if a in augs]
        row["improved"] = (None if wgan is None or not constrained or None in constrained
                           else max(constrained) > wgan)
        iw = get("iwgan")
        others = [get(a) for a in augs if a not in ("iwgan", "none")]
        row["iwgan_best"] = None if iw is None or not others or None in others else iw > max(others)
        published = [get(a) for a in PUBLISHED_COMPARATORS if a in augs]
        row["iwgan_best_published"] = (None if iw is None or not published or None in published
                                       else iw > max(published))
        rows.append(row)
    totals = {}
    for name in ("improved", "iwgan_best", "iwgan_best_published"):
        decided = [r[name] for r in rows if r[name] is not None]
        totals[name] = (sum(decided), len(decided), len(rows) - len(decided))
    return rows, totals


def grid_summary(grid):
    means = {c.key: c.mean_auc for c in grid.cells if c.ok}
    failed = {c.key for c in grid.cells if not c.ok}
    return summarize(means, failed)


def with_overrides(cfg, **overrides):
    """``cfg`` with every non-None override applied."""
    return replace(cfg, **{k: v for k, v in overrides.items() if v is not None})
