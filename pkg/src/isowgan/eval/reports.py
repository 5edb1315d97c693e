"""CSV artifacts.  Floats carry 6 decimals; the first line is a ``#`` comment with the config fingerprint."""

import csv
import io
from pathlib import Path

from .grid import PUBLISHED_COUNTS, grid_summary


def _fmt(v):
    if isinstance(v, float):
        return f"{v:.6f}"
    if isinstance(v, bool):
        return {True: "1", False: "0"}[v]
    return "" if v is None else str(v)


def render(header, rows, comment):
    buf = io.StringIO()
    for line in comment.splitlines():
        buf.write(f"# {line}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def write(path, text):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")
    return path


def read_rows(path):
    """Rows of a CSV artifact as dicts, skipping ``#`` comment lines."""
    lines = [ln for ln in Path(path).read_text(encoding="utf-8").splitlines() if not ln.startswith("#")]
    return list(csv.DictReader(lines))


def grid_csv(grid):
    rows = [(c.dataset, c.augmenter, c.classifier, f, a)
            for c in grid.cells for f, a in enumerate(c.fold_aucs)]
    return render(["dataset", "augmenter", "classifier", "fold", "auc"], rows, grid.fingerprint())


def summary_csv(grid):
    """Per-group flags, then total lines whose ``dataset`` column starts with ``total:``."""
    rows, totals = grid_summary(grid)
    out = [(r["dataset"], r["classifier"], r["improved"], r["iwgan_best"], r["iwgan_best_published"])
           for r in rows]
    for name in ("improved", "iwgan_best", "iwgan_best_published"):
        wins, decided, excluded = totals[name]
        out.append((f"total:{name}", f"{wins}/{decided}", "", "", f"excluded={excluded}"))
    published = ", ".join(f"{k}={v}" for k, v in PUBLISHED_COUNTS.items())
    failed = [c for c in grid.cells if not c.ok]
    comment = (f"{grid.fingerprint()}\n"
               f"published counts for reference, not reproduced exactly: {published}\n"
               f"failed cells excluded from counts: {len(failed)}")
    for c in failed:
        comment += f"\nfailed {c.dataset}/{c.augmenter}/{c.classifier}: {c.diagnostic}"
    return render(["dataset", "classifier", "improved", "iwgan_best", "iwgan_best_published"], out, comment)


def cells_csv(cells, fingerprint):
    rows = [(c.dataset, c.augmenter, c.classifier, c.mean_auc, c.std_auc, c.status) for c in cells]
    return render(["dataset", "augmenter", "classifier", "mean_auc", "std_auc", "status"], rows, fingerprint)


def convergence_csv(result, fingerprint):
    comment = f"{fingerprint}\niteration-0 generator loss ratio iwgan/wgan = {result.initial_ratio:.6f}"
    for name, msg in sorted(result.diagnostics.items()):
        comment += f"\n{name} diverged: {msg}"
    return render(["iter", "wgan_gen_loss", "iwgan_gen_loss"], result.aligned(), comment)


def sweep_csv(result, fingerprint):
    trend = ", ".join(f"{k}={v:.6f}" for k, v in result.trend.items())
    comment = f"{fingerprint}\nspearman(|delta|, mean_auc): {trend}"
    rows = [(f"{d:+.2f}", k, m) for d, k, m in result.rows]
    return render(["delta", "classifier", "mean_auc"], rows, comment)
