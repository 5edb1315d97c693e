import hashlib

import numpy as np
import pytest

from isowgan.data import (DATA_DIR_ENV, Dataset, data_dir, descriptor, load_csv, load_dataset, minmax_normalize,
                          registry, resolve, split_by_class)
from isowgan.exceptions import DataError, RejectedInputError

AVAILABLE = [d.name for d in registry() if all((data_dir() / f).is_file() for f in d.files)]


def test_registry_counts():
    reg = registry()
    assert len(reg) == 4
    counts = {d.name: (d.n_rows, d.reported_features or d.n_features) for d in reg}
    assert counts == {"australian": (690, 14), "german": (1000, 20), "pima": (768, 8), "spect": (267, 22)}


def test_german_caveat_flag():
    assert descriptor("german").caveat
    assert descriptor("german").n_features == 24
    assert not any(descriptor(n).caveat for n in ("australian", "pima", "spect"))


@pytest.mark.parametrize("name", AVAILABLE)
def test_bundled_files_load_with_expected_counts(name):
    ds = load_dataset(name)
    d = descriptor(name)
    assert ds.X.shape == (d.n_rows, d.n_features)
    assert ds.X.min() >= 0 and ds.X.max() <= 1
    assert set(np.unique(ds.y)) == {0, 1}
    counts = np.bincount(ds.y)
    assert counts[ds.minority_label] < counts[1 - ds.minority_label]


def test_pima_and_spect_shapes():
    if "pima" in AVAILABLE:
        assert load_dataset("pima").X.shape == (768, 8)
    if "spect" in AVAILABLE:
        assert load_dataset("spect").X.shape == (267, 22)


@pytest.mark.parametrize("name", AVAILABLE)
def test_loading_is_deterministic(name):
    a, b = load_dataset(name), load_dataset(name)
    assert a.fingerprint == b.fingerprint
    assert np.array_equal(a.X, b.X)
    raw = b"".join((data_dir() / f).read_bytes() for f in descriptor(name).files)
    assert a.fingerprint == hashlib.sha256(raw).hexdigest()


def test_normalization_rules_and_idempotence(rng):
    X = np.c_[rng.normal(size=20) * 50, np.full(20, 7.0), rng.integers(0, 3, 20)]
    N = minmax_normalize(X)
    assert np.all(N[:, 1] == 0)
    assert N[:, 0].min() == 0 and N[:, 0].max() == 1
    assert np.array_equal(minmax_normalize(N), N)


def _write(path, text):
    path.write_text(text)
    return path


def test_unparseable_cell_reports_position(tmp_path):
    f = _write(tmp_path / "bad.csv", "1,2,0\n3,x,1\n")
    with pytest.raises(DataError, match=r"line 2, column 2"):
        load_csv(f)


def test_count_mismatch_reports_expected_and_found(tmp_path):
    lines = "\n".join(f"{i},{i % 3},{i % 2}" for i in range(10))
    _write(tmp_path / "pima-indians-diabetes.data", lines)
    with pytest.raises(DataError, match="expected 768 rows, found 10"):
        load_dataset("pima", tmp_path)


def test_missing_file_is_a_data_error(tmp_path):
    with pytest.raises(DataError, match="missing"):
        load_dataset("australian", tmp_path)


def test_data_dir_from_environment(tmp_path, monkeypatch):
    monkeypatch.setenv(DATA_DIR_ENV, str(tmp_path))
    assert data_dir() == tmp_path
    assert data_dir("/elsewhere") != tmp_path


def test_ragged_rows_rejected(tmp_path):
    f = _write(tmp_path / "r.csv", "1,2,0\n3,1\n")
    with pytest.raises(DataError, match="line 2"):
        load_csv(f)


def test_single_class_file_rejected(tmp_path):
    with pytest.raises(DataError, match="both classes"):
        load_csv(_write(tmp_path / "one.csv", "1,2,1\n3,4,1\n"))


def test_resolve_unknown_name():
    with pytest.raises(DataError):
        resolve("no-such-dataset")
    with pytest.raises(RejectedInputError):
        descriptor("no-such-dataset")


def _dataset(X, y):
    from isowgan.base import minority_label
    return Dataset("t", X, y, tuple(f"x{i}" for i in range(X.shape[1])), int(minority_label(y)), "")


def test_split_by_class_balanced_uses_label_one(rng):
    X = rng.random((10, 2))
    y = np.arange(10) % 2
    ds = _dataset(X, y)
    mino, majo = split_by_class(ds)
    assert ds.minority_label == 1
    assert np.array_equal(mino, X[y == 1]) and len(majo) == 5


def test_split_by_class_is_a_row_multiset_partition(rng):
    X = rng.integers(0, 3, size=(40, 2)).astype(float) / 2  # duplicates on purpose
    y = (rng.random(40) < 0.3).astype(int)
    y[:2] = [0, 1]
    mino, majo = split_by_class(_dataset(X, y))
    assert len(mino) + len(majo) == 40 and len(mino) <= len(majo)

    def rows(M):
        return sorted(map(bytes, np.ascontiguousarray(M).view(np.uint8).reshape(len(M), -1)))

    assert rows(np.vstack([mino, majo])) == rows(X)
