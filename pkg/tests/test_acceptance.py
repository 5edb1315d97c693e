"""Acceptance criteria, one test each.

Every test prints a single ``ACCEPTANCE <n> PASS|FAIL <name>: <detail>``
line (visible under ``pytest -v``) and then asserts the verdict.  Tolerances
and runtime limits are the stated ones; nothing is relaxed when a criterion
cannot be met.
"""

import time

import numpy as np
import pytest
from scipy.stats import spearmanr

from isowgan import arch
from isowgan._random import make_rng
from isowgan.cli import main
from isowgan.data import load_dataset, registry
from isowgan.eval import ExperimentConfig, auc, run_cell, run_grid, stratified_folds
from isowgan.eval import reports
from isowgan.eval.experiments import convergence_compare
from isowgan.exceptions import DataError
from isowgan.gan import TrainConfig, critic_estimate, sample, train, train_critic
from isowgan.nn import gradient_check
from isowgan.smote import nearest_neighbors, smote
from oracles import random_gradcheck_case, segment_residual

# published smote + rf mean AUCs
TABLE1_SMOTE_RF = {"australian": 0.9201, "german": 0.7600, "pima": 0.8052, "spect": 0.8092}


@pytest.fixture
def verdict(capsys):
    def report(number, name, passed, detail):
        with capsys.disabled():
            print(f"\nACCEPTANCE {number} {'PASS' if passed else 'FAIL'} {name}: {detail}")
        assert passed, detail

    return report


def _pairs_auc(scores, labels):
    p, n = scores[labels == 1], scores[labels == 0]
    diff = p[:, None] - n[None, :]
    return ((diff > 0).sum() + 0.5 * (diff == 0).sum()) / (p.size * n.size)


def test_01_auc_oracle_equivalence(verdict):
    rng = np.random.default_rng(1)
    start = time.perf_counter()
    worst = 0.0
    for _ in range(1000):
        n = int(rng.integers(2, 501))
        labels = rng.integers(0, 2, n)
        labels[:2] = [0, 1]
        scores = rng.random(n)
        # inject ties: copy a random subset of scores onto other rows
        k = int(rng.integers(0, n))
        scores[rng.integers(0, n, k)] = scores[rng.integers(0, n, k)]
        worst = max(worst, abs(auc(scores, labels) - _pairs_auc(scores, labels)))
    elapsed = time.perf_counter() - start
    verdict(1, "auc oracle", worst < 1e-12 and elapsed < 10,
            f"max difference {worst:.2e} (limit 1e-12), {elapsed:.2f}s (limit 10s)")


def test_02_gradient_correctness(verdict):
    start = time.perf_counter()
    errors = []
    for k in range(50):
        params, X, targets = random_gradcheck_case(np.random.default_rng(2000 + k), k)
        errors.append(gradient_check(params, X, "squared_error", targets))
    elapsed = time.perf_counter() - start
    worst = max(errors)
    verdict(2, "gradient check", worst < 1e-6 and elapsed < 30,
            f"max relative error {worst:.2e} over 50 nets (limit 1e-6), {elapsed:.1f}s (limit 30s)")


def test_03_smote_geometry(verdict):
    rng = np.random.default_rng(3)
    total = on_segment = in_box = 0
    for s in range(200):
        n, d = int(rng.integers(2, 40)), int(rng.integers(1, 10))
        X = rng.random((n, d))
        if s % 5 == 0:
            X[1] = X[0]  # duplicates
        k = int(rng.integers(1, min(n, 6)))
        out = smote(X, int(rng.integers(1, 80)), k, seed=s)
        nn = nearest_neighbors(X, k)
        lo, hi = X.min(axis=0), X.max(axis=0)
        for i, row in enumerate(out):
            base = X[i % n]
            on_segment += min(segment_residual(base, X[q], row)[0] for q in nn[i % n]) < 1e-9
            in_box += bool(np.all(row >= lo) and np.all(row <= hi))
            total += 1
    verdict(3, "smote geometry", on_segment == total and in_box == total,
            f"{on_segment}/{total} rows on a neighbour segment, {in_box}/{total} inside the bounding box")


def test_04_architecture_invariants(verdict):
    rng = np.random.default_rng(4)
    failures = 0
    builders = {
        "isomorphic": lambda d, h: arch.build_isomorphic(d, h),
        "mirror": lambda d, h: arch.build_mirror(d, h),
        "self_symmetric": lambda d, h: arch.build_self_symmetric(d, h),
        "relative_isomorphic": lambda d, h: arch.build_relative_isomorphic(
            d, h, arch.RELATIVE_DELTAS[int(rng.integers(0, 6))]),
        "unconstrained": lambda d, h: arch.build_unconstrained(d, h, rng.integers(1, 129, len(h) + 1)),
    }
    for kind, build in builders.items():
        for _ in range(1000):
            d = int(rng.integers(1, 65))
            hidden = [int(w) for w in rng.integers(1, 257, int(rng.integers(1, 6)))]
            spec = build(d, hidden)
            ok = spec.constraint.kind == kind and arch.validate(spec) == []
            ok &= arch.ArchSpec.from_json(spec.to_json()) == spec
            if kind == "mirror":
                ok &= arch.build_mirror(d, spec.d_hidden).d_hidden == tuple(hidden)
            if kind == "self_symmetric":
                ok &= spec.g_hidden == spec.g_hidden[::-1] == spec.d_hidden
            failures += not ok
    worked = (arch.build_relative_isomorphic(8, [64, 32], 0.10).d_hidden == (70, 35),
              arch.build_relative_isomorphic(8, [64, 32], -0.30).d_hidden == (45, 22))
    verdict(4, "architecture invariants", failures == 0 and all(worked),
            f"{failures} failures over 5000 specs; +10% -> [70,35] {worked[0]}, -30% -> [45,22] {worked[1]}")


def test_05_lipschitz_clamp(verdict):
    rng = np.random.default_rng(5)
    data = np.clip(rng.normal(0.5, 0.05, (500, 1)), 0, 1)
    steps, worst = [], 0.0

    def watch(event, model):
        nonlocal worst
        if event == "critic":
            steps.append(1)
            worst = max(worst, model.critic.max_abs())

    train(data, arch.build_isomorphic(1), TrainConfig(iterations=500, seed=5), callback=watch)
    verdict(5, "critic clamp", worst <= 0.01 and len(steps) == 2500,
            f"max |critic parameter| {worst:.6f} over {len(steps)} critic steps (limit 0.01)")


def test_06_wasserstein_monotonicity(verdict):
    shifts = (0.0, 0.1, 0.2, 0.4)
    spec = arch.build_isomorphic(1)
    start = time.perf_counter()
    correlations = []
    for seed in range(5):
        rng = make_rng(seed, "acceptance", "monotonicity")
        est = []
        for d in shifts:
            fake = np.clip(rng.normal(0.3, 0.05, (500, 1)), 0, 1)
            real = np.clip(rng.normal(0.3 + d, 0.05, (500, 1)), 0, 1)
            model = train_critic(real, fake, spec, TrainConfig(iterations=200, seed=seed))
            probe_fake = np.clip(rng.normal(0.3, 0.05, (5000, 1)), 0, 1)
            probe_real = np.clip(rng.normal(0.3 + d, 0.05, (5000, 1)), 0, 1)
            est.append(critic_estimate(model, probe_real, probe_fake))
        correlations.append(float(spearmanr(shifts, est).statistic))
    elapsed = time.perf_counter() - start
    votes = sum(c == 1.0 for c in correlations)
    verdict(6, "wasserstein monotonicity", votes >= 3 and elapsed < 120,
            f"rank correlation 1.0 in {votes}/5 seeds {correlations}, {elapsed:.1f}s (limit 120s)")


def test_07_moment_recovery(verdict):
    rng = np.random.default_rng(7)
    data = np.clip(rng.normal(0.5, 0.05, (500, 1)), 0, 1)
    start = time.perf_counter()
    model, trace = train(data, arch.build_isomorphic(1), TrainConfig(iterations=2000, seed=7))
    elapsed = time.perf_counter() - start
    gap = abs(sample(model, 1000, seed=8).mean() - data.mean())
    verdict(7, "moment recovery", gap < 0.05 and elapsed < 60 and len(trace) == 2000,
            f"|sample mean - data mean| {gap:.4f} (limit 0.05), {elapsed:.1f}s (limit 60s)")


def test_08_smote_rf_reproduction(verdict):
    cfg = ExperimentConfig()
    lines, passed = [], True
    for name, target in TABLE1_SMOTE_RF.items():
        start = time.perf_counter()
        try:
            ds = load_dataset(name)
        except DataError as exc:
            lines.append(f"{name}: not evaluated ({exc})")
            passed = False
            continue
        plan = stratified_folds(ds.y, 10, cfg.seed)
        cell = run_cell(ds, "smote", "rf", plan, cfg)
        elapsed = time.perf_counter() - start
        ok = cell.ok and abs(cell.mean_auc - target) <= 0.05 and elapsed < 600
        passed &= ok
        lines.append(f"{name}: {cell.mean_auc:.4f} vs {target:.4f} (|diff| {abs(cell.mean_auc - target):.4f}), "
                     f"{elapsed:.0f}s")
    verdict(8, "smote+rf within 0.05", passed, "; ".join(lines))


def test_09_grid_protocol(verdict, tmp_path):
    try:
        datasets = [load_dataset(d) for d in registry()]
    except DataError as exc:
        verdict(9, "full grid", False, f"cannot run on all 4 registry datasets: {exc}")
        return
    start = time.perf_counter()
    grid = run_grid(datasets)
    elapsed = time.perf_counter() - start
    reports.write(tmp_path / "grid.csv", reports.grid_csv(grid))
    reports.write(tmp_path / "summary.csv", reports.summary_csv(grid))
    rows = reports.read_rows(tmp_path / "grid.csv")
    folds = {}
    for r in rows:
        folds.setdefault((r["dataset"], r["augmenter"], r["classifier"]), []).append(float(r["auc"]))
    means = {k: np.mean(v) for k, v in folds.items() if np.all(np.isfinite(v))}
    groups = sorted({(d, c) for d, _, c in folds})
    improved = best = decided_i = decided_b = 0
    for d, c in groups:
        m = {a: v for (dd, a, cc), v in means.items() if (dd, cc) == (d, c)}
        if all(a in m for a in ("wgan", "iwgan", "mwgan", "swgan")):
            decided_i += 1
            improved += max(m["iwgan"], m["mwgan"], m["swgan"]) > m["wgan"]
        others = [a for (dd, a, cc) in folds if (dd, cc) == (d, c) and a not in ("iwgan", "none")]
        if "iwgan" in m and all(a in m for a in others):
            decided_b += 1
            best += all(m["iwgan"] > m[a] for a in others)
    summary = {r["dataset"]: r["classifier"] for r in reports.read_rows(tmp_path / "summary.csv")}
    match = (summary["total:improved"] == f"{improved}/{decided_i}"
             and summary["total:iwgan_best"] == f"{best}/{decided_b}")
    passed = len(rows) == 1600 and len(groups) == 20 and match and elapsed < 7200
    verdict(9, "full grid", passed,
            f"{len(rows)} fold rows, {len(groups)} groups, improved {improved}/{decided_i} (published 17/20), "
            f"iwgan best {best}/{decided_b} (published 15/20), recount match {match}, {elapsed / 60:.1f} min")


def test_10_convergence_artifact(verdict):
    try:
        ds = load_dataset("german")
    except DataError as exc:
        verdict(10, "convergence", False, str(exc))
        return
    res = convergence_compare(ds, ExperimentConfig())
    rows = res.aligned()
    aligned = len(rows) == 2000 and [r[0] for r in rows] == list(range(2000))
    finite = np.isfinite(res.initial_ratio)
    text = reports.convergence_csv(res, ExperimentConfig().fingerprint(dataset="german"))
    verdict(10, "convergence", aligned and finite and not res.diagnostics and "ratio" in text,
            f"aligned {aligned}, iteration-0 gen loss wgan {res.wgan.gen_loss[0]:.6f} iwgan "
            f"{res.iwgan.gen_loss[0]:.6f}, measured ratio {res.initial_ratio:.4f} (published about 0.1)")


def test_11_determinism(verdict, tmp_path):
    commands = [
        ["augment", "--dataset", "pima", "--method", "iwgan", "--iterations", "50", "--out", "{d}/aug.csv"],
        ["augment", "--dataset", "spect", "--method", "smote", "--out", "{d}/smote.csv"],
        ["train", "--dataset", "german", "--method", "r_iwgan", "--delta", "-0.2", "--iterations", "50",
         "--out", "{d}/train"],
        ["grid", "--datasets", "spect,pima", "--augmenters", "none,smote,gan,wgan,iwgan,mwgan,swgan,r_iwgan",
         "--classifiers", "knn,ann,svm,rf,gbc", "--iterations", "20", "--folds", "3", "--out", "{d}/grid"],
        ["convergence", "--dataset", "german", "--iterations", "100", "--out", "{d}/conv"],
        ["sweep", "--dataset", "spect", "--classifiers", "knn,svm", "--iterations", "20", "--folds", "3",
         "--out", "{d}/sweep"],
    ]
    snapshots, codes = [], []
    for run in ("a", "b"):
        root = tmp_path / run
        for cmd in commands:
            codes.append(main([c.format(d=root) for c in cmd]))
        snapshots.append({str(p.relative_to(root)): p.read_bytes() for p in sorted(root.rglob("*")) if p.is_file()})
    same = snapshots[0] == snapshots[1]
    headed = all(b.startswith(b"# ") or b.startswith(b'{\n  "#"') for b in snapshots[0].values())
    verdict(11, "determinism", same and headed and set(codes) == {0},
            f"{len(snapshots[0])} artifacts byte-identical {same}, fingerprint headers {headed}, exit codes {set(codes)}")
