"""Tabular binary-classification data: loading, validation, generation, splitting."""

from __future__ import annotations

import csv
import math
import os
from dataclasses import dataclass
from typing import Sequence

import numpy as np


class DataError(ValueError):
    """Raised when input data violates the dataset contract."""


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class Dataset:
    """Immutable table of finite numeric features with 0/1 labels (1 = fraud)."""

    feature_names: tuple[str, ...]
    rows: np.ndarray
    labels: np.ndarray
    label_name: str = "Class"

    def __post_init__(self) -> None:
        names = tuple(str(n) for n in self.feature_names)
        rows = np.asarray(self.rows, dtype=np.float64)
        labels = np.asarray(self.labels)
        if rows.ndim == 1 and rows.size == 0:
            rows = rows.reshape(0, len(names))
        if rows.ndim != 2:
            raise DataError(f"rows must be a 2-D matrix, got shape {rows.shape}")
        if rows.shape[1] != len(names):
            raise DataError(f"{rows.shape[1]} columns but {len(names)} feature names")
        if len(set(names)) != len(names):
            raise DataError("duplicate feature names")
        if labels.shape != (rows.shape[0],):
            raise DataError(f"{labels.shape[0] if labels.ndim else 0} labels for {rows.shape[0]} rows")
        if labels.size and not np.all((labels == 0) | (labels == 1)):
            raise DataError("labels must be 0 or 1")
        if not np.all(np.isfinite(rows)):
            r, c = np.argwhere(~np.isfinite(rows))[0]
            raise DataError(f"non-finite value at row {r}, column {names[c]!r}")
        object.__setattr__(self, "feature_names", names)
        object.__setattr__(self, "rows", _frozen(rows))
        object.__setattr__(self, "labels", _frozen(labels.astype(np.int8)))

    @property
    def n(self) -> int:
        return self.rows.shape[0]

    @property
    def d(self) -> int:
        return self.rows.shape[1]

    def take(self, index: np.ndarray | Sequence[int]) -> "Dataset":
        index = np.asarray(index, dtype=np.intp)
        return Dataset(self.feature_names, self.rows[index], self.labels[index], self.label_name)

    def column(self, name: str) -> np.ndarray:
        try:
            return self.rows[:, self.feature_names.index(name)]
        except ValueError:
            raise DataError(f"unknown feature {name!r}") from None

    def with_rows(self, rows: np.ndarray) -> "Dataset":
        return Dataset(self.feature_names, rows, self.labels, self.label_name)

    def equals(self, other: "Dataset") -> bool:
        return (
            self.feature_names == other.feature_names
            and self.label_name == other.label_name
            and np.array_equal(self.rows, other.rows)
            and np.array_equal(self.labels, other.labels)
        )


@dataclass(frozen=True)
class SyntheticSpec:
    """Two isotropic Gaussian classes; used when the real transaction data is unavailable."""

    n_total: int = 20000
    positive_fraction: float = 0.00219
    d: int = 8
    class_mean_separation: float = 2.5
    noise_stddev: float = 1.0

    def validate(self) -> None:
        if self.n_total < 10:
            raise DataError("n_total must be >= 10")
        if not 0.0 < self.positive_fraction < 1.0:
            raise DataError("positive_fraction must lie in (0, 1)")
        if self.d < 1:
            raise DataError("d must be >= 1")
        if not self.class_mean_separation >= 0.0:
            raise DataError("class_mean_separation must be nonnegative")
        if not self.noise_stddev > 0.0:
            raise DataError("noise_stddev must be positive")
        n_pos = self.n_positive
        if n_pos < 1 or n_pos >= self.n_total:
            raise DataError(f"spec yields {n_pos} positives out of {self.n_total}")

    @property
    def n_positive(self) -> int:
        return int(round(self.n_total * self.positive_fraction))

    def bayes_auc(self) -> float:
        """AUC of the optimal linear score: Phi(sep / (sigma * sqrt(2)))."""
        z = self.class_mean_separation / (self.noise_stddev * math.sqrt(2.0))
        return 0.5 * math.erfc(-z / math.sqrt(2.0))


def generate_synthetic(spec: SyntheticSpec, seed: int) -> Dataset:
    """Draw a shuffled two-class Gaussian dataset.

    Negatives are centred at the origin, positives at ``sep / sqrt(d)`` on every
    axis, so the distance between class means is exactly the separation.
    """
    spec.validate()
    rng = np.random.default_rng(seed)
    n_pos = spec.n_positive
    n_neg = spec.n_total - n_pos
    shift = spec.class_mean_separation / math.sqrt(spec.d)
    neg = rng.normal(0.0, spec.noise_stddev, size=(n_neg, spec.d))
    pos = rng.normal(shift, spec.noise_stddev, size=(n_pos, spec.d))
    rows = np.vstack([neg, pos])
    labels = np.concatenate([np.zeros(n_neg, np.int8), np.ones(n_pos, np.int8)])
    order = rng.permutation(spec.n_total)
    names = tuple(f"V{i + 1}" for i in range(spec.d))
    return Dataset(names, rows[order], labels[order])


def class_counts(data: Dataset) -> tuple[int, int]:
    """Return ``(negatives, positives)``."""
    pos = int(np.count_nonzero(data.labels))
    return data.n - pos, pos


def load_csv(path: str | os.PathLike, label_column: str = "Class") -> Dataset:
    """Read a comma-separated file with a header row into a Dataset.

    Every column other than ``label_column`` becomes a feature, in file order.
    Errors name the 1-based data row and the column of the offending cell.
    """
    path = os.fspath(path)
    if not os.path.isfile(path):
        raise DataError(f"no such file: {path}")
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if not header:
            raise DataError(f"{path}: missing header row")
        header = [h.strip() for h in header]
        if len(set(header)) != len(header):
            dup = sorted({h for h in header if header.count(h) > 1})
            raise DataError(f"{path}: duplicate header(s) {dup}")
        if label_column not in header:
            raise DataError(f"{path}: label column {label_column!r} not in header")
        cells = []
        for lineno, rec in enumerate(reader, start=1):
            if not rec:
                continue
            if len(rec) != len(header):
                raise DataError(f"{path}: row {lineno} has {len(rec)} cells, expected {len(header)}")
            cells.append(rec)
    if not cells:
        raise DataError(f"{path}: no data rows")

    try:
        table = np.array(cells, dtype=np.float64)
    except ValueError:
        table = None
    if table is None or not np.all(np.isfinite(table)):
        _raise_bad_cell(path, header, cells)

    li = header.index(label_column)
    labels = table[:, li]
    bad = np.flatnonzero((labels != 0) & (labels != 1))
    if bad.size:
        r = bad[0]
        raise DataError(f"{path}: row {r + 1}, column {label_column!r}: label {cells[r][li]!r} not in {{0, 1}}")
    names = [h for i, h in enumerate(header) if i != li]
    rows = np.delete(table, li, axis=1)
    return Dataset(tuple(names), rows, labels.astype(np.int8), label_column)


def _raise_bad_cell(path: str, header: list[str], cells: list[list[str]]) -> None:
    for r, rec in enumerate(cells, start=1):
        for c, cell in enumerate(rec):
            try:
                v = float(cell)
            except ValueError:
                raise DataError(f"{path}: row {r}, column {header[c]!r}: non-numeric cell {cell!r}") from None
            if not math.isfinite(v):
                raise DataError(f"{path}: row {r}, column {header[c]!r}: non-finite cell {cell!r}")
    raise DataError(f"{path}: unparseable table")  # pragma: no cover


def write_csv(data: Dataset, path: str | os.PathLike) -> None:
    """Write features then the label column; floats use their shortest exact repr."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow([*data.feature_names, data.label_name])
        for row, lab in zip(data.rows.tolist(), data.labels.tolist()):
            w.writerow([*map(repr, row), lab])


def stratified_split(data: Dataset, test_fraction: float, seed: int) -> tuple[Dataset, Dataset]:
    """Per-class random split; each class sends ``round(n_c * test_fraction)`` rows to test.

    Rows keep their original relative order on both sides.
    """
    if not 0.0 < test_fraction < 1.0:
        raise DataError("test_fraction must lie in (0, 1)")
    rng = np.random.default_rng(seed)
    test_idx = []
    for cls in (0, 1):
        members = np.flatnonzero(data.labels == cls)
        if members.size < 2:
            raise DataError(f"class {cls} has {members.size} rows; need at least 2 to split")
        n_test = int(math.floor(members.size * test_fraction + 0.5))
        if n_test < 1:
            raise DataError(f"class {cls} would receive 0 test rows")
        if n_test >= members.size:
            raise DataError(f"class {cls} would receive 0 training rows")
        test_idx.append(rng.permutation(members)[:n_test])
    in_test = np.zeros(data.n, dtype=bool)
    in_test[np.concatenate(test_idx)] = True
    return data.take(np.flatnonzero(~in_test)), data.take(np.flatnonzero(in_test))
