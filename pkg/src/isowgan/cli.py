"""Command-line entry point.

Exit codes: 0 success, 1 usage or invalid input, 2 data error, 3 numeric
fault.  Settings resolve as command-line flag, then ``--config`` JSON file,
then built-in default.
"""

import argparse
import json
import logging
import sys
from pathlib import Path

from . import arch
from ._random import derive_seed
from .classifiers import CLASSIFIER_KINDS
from .data import DATA_DIR_ENV, registry, resolve
from .eval import reports
from .eval.experiments import convergence_compare, relative_iso_sweep
from .eval.grid import (ExperimentConfig, default_augmenters, make_augmenter, parse_augmenter, run_grid,
                        with_overrides)
from .exceptions import DataError, IsowganError, NumericFault, RejectedInputError
from .gan import TrainConfig, train

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_NUMERIC = 0, 1, 2, 3
GAN_METHODS = ("gan", "wgan", "iwgan", "mwgan", "swgan", "r_iwgan")

log = logging.getLogger("isowgan")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}\n{self.format_usage().rstrip()}")


def _int_list(text):
    try:
        values = tuple(int(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None
    return values


def _common(p, dataset=True):
    if dataset:
        p.add_argument("--dataset", required=True, help="registry name or path to a CSV file (label last)")
    p.add_argument("--seed", type=int, help="root seed (default 0)")
    p.add_argument("--config", type=Path, help="JSON file with experiment settings")
    p.add_argument("--iterations", type=int, help="GAN generator iterations (default 2000)")
    p.add_argument("--batch-size", type=int)
    p.add_argument("--hidden", type=_int_list, help="generator hidden widths, e.g. 64,32")
    p.add_argument("--d-hidden", type=_int_list, help="plain WGAN/GAN critic hidden widths, e.g. 48,24")
    p.add_argument("--delta", type=float, help="relative-isomorphic width offset for r_iwgan")
    p.add_argument("--data-dir", type=Path, help=f"directory with the UCI files (or set {DATA_DIR_ENV})")


def build_parser():
    parser = _Parser(prog="isowgan", description="Constrained-structure WGAN augmentation experiments.")
    parser.add_argument("--log-level", default="WARNING", choices=["DEBUG", "INFO", "WARNING", "ERROR"])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("augment", help="balance a dataset and write the augmented rows")
    _common(p)
    p.add_argument("--method", required=True, help="none, smote, gan, wgan, iwgan, mwgan, swgan, r_iwgan(<delta>)")
    p.add_argument("--out", required=True, type=Path, help="output CSV (features then label)")

    p = sub.add_parser("train", help="train a generator on the minority rows")
    _common(p)
    p.add_argument("--method", required=True, choices=GAN_METHODS)
    p.add_argument("--arch", type=Path, help="ArchSpec JSON overriding the architecture")
    p.add_argument("--out", required=True, type=Path, help="output directory")

    p = sub.add_parser("grid", help="cross-validated dataset x augmenter x classifier grid")
    _common(p, dataset=False)
    p.add_argument("--datasets", default="all", help="'all' or comma-separated registry names / paths")
    p.add_argument("--augmenters", help="comma-separated augmenter names (default: all eight)")
    p.add_argument("--classifiers", help=f"comma-separated subset of {','.join(CLASSIFIER_KINDS)}")
    p.add_argument("--folds", type=int)
    p.add_argument("--out", required=True, type=Path, help="output directory")

    p = sub.add_parser("convergence", help="generator loss traces of WGAN and IWGAN")
    _common(p)
    p.add_argument("--out", required=True, type=Path, help="output directory")

    p = sub.add_parser("sweep", help="AUC of r-IWGAN across width offsets")
    _common(p)
    p.add_argument("--classifiers", help=f"comma-separated subset of {','.join(CLASSIFIER_KINDS)}")
    p.add_argument("--folds", type=int)
    p.add_argument("--out", required=True, type=Path, help="output directory")

    p = sub.add_parser("check", help="self-test: gradients, AUC oracle, architecture validators")
    p.add_argument("--seed", type=int, default=0)
    return parser


def resolve_config(args):
    cfg = ExperimentConfig()
    if getattr(args, "config", None) is not None:
        try:
            payload = json.loads(Path(args.config).read_text(encoding="utf-8"))
        except OSError as exc:
            raise UsageError(f"cannot read config {args.config}: {exc.strerror}") from None
        except json.JSONDecodeError as exc:
            raise UsageError(f"config {args.config} is not valid JSON: {exc}") from None
        if not isinstance(payload, dict):
            raise UsageError(f"config {args.config} must hold a JSON object")
        cfg = ExperimentConfig.from_dict({**cfg.to_dict(), **payload})
    return with_overrides(cfg, seed=args.seed, iterations=args.iterations, batch_size=args.batch_size,
                          hidden=args.hidden, d_hidden=args.d_hidden, delta=args.delta,
                          folds=getattr(args, "folds", None))


def _names(text, valid, what):
    names = [t.strip() for t in text.split(",") if t.strip()]
    bad = [n for n in names if n not in valid]
    if bad:
        raise UsageError(f"unknown {what} {bad}; valid: {', '.join(valid)}")
    return names


def _out_dir(path):
    path.mkdir(parents=True, exist_ok=True)
    return path


def cmd_augment(args, cfg):
    parse_augmenter(args.method, cfg)
    ds = resolve(args.dataset, args.data_dir)
    aug = make_augmenter(args.method, cfg, derive_seed(cfg.seed, ds.name, args.method))
    X, y = aug.fit_resample(ds.X, ds.y)
    header = [*ds.feature_names, "label"]
    rows = [(*map(float, x), int(t)) for x, t in zip(X, y)]
    fp = cfg.fingerprint(command="augment", dataset=ds.name, data_sha256=ds.fingerprint, method=args.method)
    reports.write(args.out, reports.render(header, rows, f"{fp}\nsynthetic rows appended: {aug.n_synthetic_}"))
    print(f"wrote {args.out}: {len(rows)} rows ({aug.n_synthetic_} synthetic)")


def _train_spec(method, cfg, data_dim):
    kind, delta = parse_augmenter(method, cfg)
    if kind in ("gan", "wgan"):
        return arch.build_unconstrained(data_dim, cfg.hidden, cfg.d_hidden)
    constraint = {"iwgan": "isomorphic", "mwgan": "mirror", "swgan": "self_symmetric",
                  "r_iwgan": "relative_isomorphic"}[kind]
    return arch.build(constraint, data_dim, cfg.hidden, delta)


def cmd_train(args, cfg):
    ds = resolve(args.dataset, args.data_dir)
    minority = ds.X[ds.y == ds.minority_label]
    if args.arch is not None:
        try:
            spec = arch.ArchSpec.from_json(args.arch.read_text(encoding="utf-8"))
        except OSError as exc:
            raise UsageError(f"cannot read {args.arch}: {exc.strerror}") from None
        except (json.JSONDecodeError, KeyError, TypeError) as exc:
            raise UsageError(f"{args.arch} is not a valid ArchSpec JSON: {exc}") from None
    else:
        spec = _train_spec(args.method, cfg, ds.n_features)
    loss_kind = "gan" if args.method == "gan" else "wgan"
    batch = max(2, min(cfg.batch_size, minority.shape[0]))
    seed = derive_seed(cfg.seed, ds.name, args.method, "train")
    if loss_kind == "gan":
        train_cfg = TrainConfig.defaults("gan", iterations=cfg.iterations, batch_size=batch, seed=seed)
    else:
        train_cfg = TrainConfig(iterations=cfg.iterations, batch_size=batch, n_critic=cfg.n_critic,
                                clip_c=cfg.clip_c, learning_rate=cfg.learning_rate, optimizer=cfg.optimizer,
                                seed=seed)
    model, trace = train(minority, spec, train_cfg)
    out = _out_dir(args.out)
    fp = cfg.fingerprint(command="train", dataset=ds.name, data_sha256=ds.fingerprint, method=args.method,
                         train=train_cfg.to_dict(), arch=spec.to_dict())
    # JSON has no comments; the fingerprint goes under the key "#"
    reports.write(out / "arch.json", json.dumps({"#": fp, **spec.to_dict()}, indent=2, sort_keys=True) + "\n")
    reports.write(out / "model.json", json.dumps({"#": fp, **model.to_dict()}, indent=2, sort_keys=True) + "\n")
    reports.write(out / "trace.csv", trace.to_csv(fp))
    print(f"wrote {out}/arch.json, model.json, trace.csv ({len(trace)} iterations)")


def _progress(cell):
    log.info("%s/%s/%s mean AUC %.4f %s", cell.dataset, cell.augmenter, cell.classifier, cell.mean_auc, cell.status)


def cmd_grid(args, cfg):
    augmenters = default_augmenters(cfg) if args.augmenters is None else [
        t.strip() for t in args.augmenters.split(",") if t.strip()]
    for a in augmenters:
        parse_augmenter(a, cfg)
    classifiers = CLASSIFIER_KINDS if args.classifiers is None else _names(args.classifiers, CLASSIFIER_KINDS,
                                                                           "classifier")
    names = [d.name for d in registry()] if args.datasets == "all" else [
        t.strip() for t in args.datasets.split(",") if t.strip()]
    datasets = [resolve(n, args.data_dir) for n in names]
    grid = run_grid(datasets, augmenters, classifiers, cfg, progress=_progress)
    out = _out_dir(args.out)
    reports.write(out / "grid.csv", reports.grid_csv(grid))
    reports.write(out / "summary.csv", reports.summary_csv(grid))
    reports.write(out / "cells.csv", reports.cells_csv(grid.cells, grid.fingerprint()))
    failed = sum(not c.ok for c in grid.cells)
    print(f"wrote {out}/grid.csv, summary.csv, cells.csv ({len(grid.cells)} cells, {failed} failed)")


def cmd_convergence(args, cfg):
    ds = resolve(args.dataset, args.data_dir)
    result = convergence_compare(ds, cfg)
    out = _out_dir(args.out)
    fp = cfg.fingerprint(command="convergence", dataset=ds.name, data_sha256=ds.fingerprint)
    path = reports.write(out / f"convergence_{ds.name}.csv", reports.convergence_csv(result, fp))
    print(f"wrote {path}; iteration-0 generator loss ratio iwgan/wgan = {result.initial_ratio:.6f}")


def cmd_sweep(args, cfg):
    classifiers = CLASSIFIER_KINDS if args.classifiers is None else _names(args.classifiers, CLASSIFIER_KINDS,
                                                                           "classifier")
    ds = resolve(args.dataset, args.data_dir)
    result = relative_iso_sweep(ds, classifiers, arch.RELATIVE_DELTAS, cfg, progress=_progress)
    out = _out_dir(args.out)
    fp = cfg.fingerprint(command="sweep", dataset=ds.name, data_sha256=ds.fingerprint,
                         classifiers=list(classifiers))
    reports.write(out / "sweep.csv", reports.sweep_csv(result, fp))
    print(f"wrote {out}/sweep.csv; " + ", ".join(f"{k} trend {v:+.3f}" for k, v in result.trend.items()))


def cmd_check(args):
    from .selfcheck import run_checks

    failures = 0
    for name, passed, detail in run_checks(args.seed):
        print(f"{'PASS' if passed else 'FAIL'} {name}: {detail}")
        failures += not passed
    print(f"{failures} check(s) failed" if failures else "all checks passed")
    return EXIT_NUMERIC if failures else EXIT_OK


COMMANDS = {"augment": cmd_augment, "train": cmd_train, "grid": cmd_grid, "convergence": cmd_convergence,
            "sweep": cmd_sweep}


def main(argv=None):
    try:
        args = build_parser().parse_args(argv)
        logging.basicConfig(level=args.log_level, format="%(levelname)s %(name)s: %(message)s")
        if args.command == "check":
            return cmd_check(args)
        cfg = resolve_config(args)
        COMMANDS[args.command](args, cfg)
        return EXIT_OK
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except DataError as exc:
        print(f"isowgan.data: {exc}", file=sys.stderr)
        return EXIT_DATA
    except NumericFault as exc:
        print(f"isowgan.numeric: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (RejectedInputError, IsowganError) as exc:
        print(f"isowgan: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return exc.code if isinstance(exc.code, int) else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
