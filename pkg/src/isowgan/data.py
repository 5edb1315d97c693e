"""Loading, validating and normalizing the tabular datasets.

Files are read from a local directory; nothing is downloaded.  The
directory is, in order of precedence, the ``data_dir`` argument, the
``ISOWGAN_DATA_DIR`` environment variable, and ``data/uci`` in the source
checkout.
"""

import hashlib
import os
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .base import minority_label
from .exceptions import DataError, RejectedInputError

DATA_DIR_ENV = "ISOWGAN_DATA_DIR"
_BUNDLED = Path(__file__).resolve().parents[2] / "data" / "uci"


@dataclass(frozen=True)
class DatasetDescriptor:
    """Where a dataset lives and what its files must contain.

    ``positive_label`` is the raw label mapped to 1; every other label maps
    to 0.  ``delimiter=None`` splits on runs of whitespace.
    """

    name: str
    files: tuple
    n_rows: int
    n_features: int
    delimiter: str = None
    label_column: int = -1
    positive_label: str = "1"
    reported_features: int = None
    notes: str = ""

    @property
    def caveat(self):
        """True when the file's feature count differs from the published attribute count."""
        return self.reported_features is not None and self.reported_features != self.n_features


_REGISTRY = (
    DatasetDescriptor(
        name="australian",
        files=("australian.dat",),
        n_rows=690,
        n_features=14,
        notes="Statlog Australian credit approval; whitespace separated, label (0/1) last.",
    ),
    DatasetDescriptor(
        name="german",
        files=("german.data-numeric",),
        n_rows=1000,
        n_features=24,
        positive_label="2",
        reported_features=20,
        notes=("Statlog German credit, numeric encoding; whitespace separated, label (1 good, 2 bad) last. "
               "The raw file has 20 attributes; the numeric file expands the categorical ones to 24."),
    ),
    DatasetDescriptor(
        name="pima",
        files=("pima-indians-diabetes.data",),
        n_rows=768,
        n_features=8,
        delimiter=",",
        notes="Pima Indians diabetes; comma separated, label (0/1) last. Zero-coded missing values kept.",
    ),
    DatasetDescriptor(
        name="spect",
        files=("SPECT.train", "SPECT.test"),
        n_rows=267,
        n_features=22,
        delimiter=",",
        label_column=0,
        notes="SPECT heart (binary features, not SPECTF); comma separated, label (0/1) first; train + test.",
    ),
)


def registry():
    """Descriptors of the four benchmark datasets."""
    return list(_REGISTRY)


def descriptor(name):
    for d in _REGISTRY:
        if d.name == name:
            return d
    raise RejectedInputError(f"unknown dataset {name!r}; expected one of {[d.name for d in _REGISTRY]}")


def data_dir(override=None):
    if override is not None:
        return Path(override)
    env = os.environ.get(DATA_DIR_ENV)
    return Path(env) if env else _BUNDLED


@dataclass(frozen=True, eq=False)
class Dataset:
    name: str
    X: np.ndarray
    y: np.ndarray
    feature_names: tuple
    minority_label: int
    fingerprint: str
    descriptor: DatasetDescriptor = field(default=None, repr=False)

    @property
    def n_rows(self):
        return self.X.shape[0]

    @property
    def n_features(self):
        return self.X.shape[1]


def minmax_normalize(X):
    """Scale every column to [0, 1]; constant columns become 0."""
    X = np.asarray(X, dtype=np.float64)
    lo = X.min(axis=0)
    span = X.max(axis=0) - lo
    safe = np.where(span > 0, span, 1.0)
    out = (X - lo) / safe
    out[:, span == 0] = 0.0
    return out


def _parse(path, delimiter):
    """Rows of raw string cells; blank lines are skipped."""
    try:
        raw = Path(path).read_bytes()
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc.strerror}") from exc
    rows = []
    for lineno, line in enumerate(raw.decode("utf-8", errors="replace").splitlines(), start=1):
        line = line.strip()
        if not line:
            continue
        cells = [c.strip() for c in line.split(delimiter)] if delimiter else line.split()
        rows.append((lineno, cells))
    return raw, rows


def _to_matrix(path, rows, n_cols):
    out = np.empty((len(rows), n_cols))
    for r, (lineno, cells) in enumerate(rows):
        if len(cells) != n_cols:
            raise DataError(f"{path}: line {lineno}: expected {n_cols} columns, found {len(cells)}")
        for c, cell in enumerate(cells):
            try:
                out[r, c] = float(cell)
            except ValueError:
                raise DataError(f"{path}: line {lineno}, column {c + 1}: cannot parse {cell!r}") from None
            if not np.isfinite(out[r, c]):
                raise DataError(f"{path}: line {lineno}, column {c + 1}: non-finite value {cell!r}")
    return out


def _assemble(name, paths, delimiter, label_column, positive_label, expect_rows=None, expect_features=None,
              desc=None):
    digest = hashlib.sha256()
    blocks = []
    n_cols = None
    for path in paths:
        raw, rows = _parse(path, delimiter)
        digest.update(raw)
        if not rows:
            raise DataError(f"{path}: no data rows")
        n_cols = n_cols or len(rows[0][1])
        blocks.append(_to_matrix(path, rows, n_cols))
    table = np.vstack(blocks)
    labels = table[:, label_column]
    X = np.delete(table, label_column % n_cols, axis=1)
    where = ", ".join(str(p) for p in paths)
    if expect_rows is not None and X.shape[0] != expect_rows:
        raise DataError(f"{name}: expected {expect_rows} rows, found {X.shape[0]} in {where}")
    if expect_features is not None and X.shape[1] != expect_features:
        raise DataError(f"{name}: expected {expect_features} features, found {X.shape[1]} in {where}")
    y = (labels == float(positive_label)).astype(np.int64)
    if np.unique(y).size != 2:
        raise DataError(f"{name}: need both classes, labels found {np.unique(labels).tolist()}")
    X = minmax_normalize(X)
    return Dataset(
        name=name,
        X=X,
        y=y,
        feature_names=tuple(f"x{i}" for i in range(X.shape[1])),
        minority_label=int(minority_label(y)),
        fingerprint=digest.hexdigest(),
        descriptor=desc,
    )


def load_dataset(desc, path=None):
    """Load a registry dataset from the directory ``path`` and verify its counts."""
    if isinstance(desc, str):
        desc = descriptor(desc)
    root = data_dir(path)
    files = [root / f for f in desc.files]
    missing = [str(f) for f in files if not f.is_file()]
    if missing:
        raise DataError(f"{desc.name}: missing file(s) {', '.join(missing)}; "
                        f"place the UCI files there or set {DATA_DIR_ENV}")
    return _assemble(desc.name, files, desc.delimiter, desc.label_column, desc.positive_label,
                     desc.n_rows, desc.n_features, desc)


def load_csv(path, label_column=-1, positive_label="1", delimiter=","):
    """Load an arbitrary delimited file with a 0/1 (or ``positive_label``) label column."""
    path = Path(path)
    return _assemble(path.stem, [path], delimiter, label_column, positive_label)


def resolve(name_or_path, path=None):
    """Registry name, or a path to a comma-separated file with the label last."""
    if any(d.name == name_or_path for d in _REGISTRY):
        return load_dataset(name_or_path, path)
    if Path(name_or_path).is_file():
        return load_csv(name_or_path)
    raise DataError(f"{name_or_path!r} is neither a registry dataset {[d.name for d in _REGISTRY]} nor a file")


def split_by_class(ds):
    """``(minority rows, majority rows)``."""
    is_min = ds.y == ds.minority_label
    return ds.X[is_min], ds.X[~is_min]
