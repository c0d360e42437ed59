"""Scaling, correlation analysis, random undersampling and IQR outlier removal."""

from __future__ import annotations

import csv
import enum
import math
import os
import warnings
from dataclasses import dataclass

import numpy as np

from .dataset import DataError, Dataset, class_counts


class ScalingMethod(str, enum.Enum):
    MIN_MAX = "minmax"
    MEAN_NORM = "meannorm"
    STANDARDIZE = "standardize"

    @classmethod
    def parse(cls, value: "str | ScalingMethod") -> "ScalingMethod":
        try:
            return cls(str(getattr(value, "value", value)).lower())
        except ValueError:
            choices = ", ".join(m.value for m in cls)
            raise ValueError(f"unknown scaling method {value!r} (choose from {choices})") from None


class DegenerateFeatureWarning(UserWarning):
    """A feature has zero range or zero variance and was mapped to 0."""


@dataclass(frozen=True, eq=False)
class ScalerParams:
    method: ScalingMethod
    feature_names: tuple[str, ...]
    minimum: np.ndarray
    maximum: np.ndarray
    mean: np.ndarray
    stddev: np.ndarray  # population form

    def degenerate(self) -> np.ndarray:
        """Boolean mask of features the chosen formula cannot scale."""
        if self.method is ScalingMethod.STANDARDIZE:
            return self.stddev == 0.0
        return self.maximum == self.minimum

    def to_dict(self) -> dict:
        return {
            "method": self.method.value,
            "feature_names": list(self.feature_names),
            "min": self.minimum.tolist(),
            "max": self.maximum.tolist(),
            "mean": self.mean.tolist(),
            "stddev": self.stddev.tolist(),
        }


def fit_scaler(data: Dataset, method: str | ScalingMethod = ScalingMethod.STANDARDIZE) -> ScalerParams:
    method = ScalingMethod.parse(method)
    if data.n < 2:
        raise DataError(f"need at least 2 rows to fit a scaler, got {data.n}")
    x = data.rows
    return ScalerParams(
        method=method,
        feature_names=data.feature_names,
        minimum=x.min(axis=0),
        maximum=x.max(axis=0),
        mean=x.mean(axis=0),
        stddev=x.std(axis=0),
    )


def apply_scaler(data: Dataset, params: ScalerParams) -> Dataset:
    """Apply min-max, mean normalisation or standardisation column by column.

    min-max:      (m - min) / (max - min)
    mean norm:    (m - mean) / (max - min)
    standardise:  (m - mean) / stddev

    Degenerate columns come out as 0.0 and raise a DegenerateFeatureWarning.
    """
    if data.feature_names != params.feature_names:
        raise DataError("scaler was fitted on different feature names")
    if params.method is ScalingMethod.MIN_MAX:
        shift, denom = params.minimum, params.maximum - params.minimum
    elif params.method is ScalingMethod.MEAN_NORM:
        shift, denom = params.mean, params.maximum - params.minimum
    else:
        shift, denom = params.mean, params.stddev
    bad = denom == 0.0
    safe = np.where(bad, 1.0, denom)
    out = (data.rows - shift) / safe
    if bad.any():
        names = [n for n, b in zip(params.feature_names, bad) if b]
        warnings.warn(f"degenerate feature(s) {names} set to 0.0", DegenerateFeatureWarning, stacklevel=2)
        out[:, bad] = 0.0
    return data.with_rows(out)


@dataclass(frozen=True, eq=False)
class CorrelationMatrix:
    """Pearson coefficients over the features plus the 0/1 label column.

    Entries that involve a zero-variance column are undefined: ``defined`` is
    False there and ``values`` holds NaN. Other entries are unaffected.
    """

    names: tuple[str, ...]
    values: np.ndarray
    defined: np.ndarray

    @property
    def label_name(self) -> str:
        return self.names[-1]

    def label_correlations(self) -> dict[str, float]:
        return dict(zip(self.names[:-1], self.values[-1, :-1].tolist()))

    def get(self, a: str, b: str) -> float:
        return float(self.values[self.names.index(a), self.names.index(b)])

    def write_csv(self, path: str | os.PathLike) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["", *self.names])
            for name, row, ok in zip(self.names, self.values.tolist(), self.defined.tolist()):
                w.writerow([name, *(repr(v) if d else "NA" for v, d in zip(row, ok))])


def correlation_matrix(data: Dataset) -> CorrelationMatrix:
    if data.n < 2:
        raise DataError(f"need at least 2 rows for correlations, got {data.n}")
    z = np.column_stack([data.rows, data.labels.astype(np.float64)])
    z = z - z.mean(axis=0)
    norms = np.sqrt(np.einsum("ij,ij->j", z, z))
    ok = norms > 0.0
    safe = np.where(ok, norms, 1.0)
    r = (z.T @ z) / np.outer(safe, safe)
    r = np.clip(0.5 * (r + r.T), -1.0, 1.0)
    defined = np.outer(ok, ok)
    r[~defined] = np.nan
    np.fill_diagonal(r, np.where(ok, 1.0, np.nan))
    r.setflags(write=False)
    defined.setflags(write=False)
    return CorrelationMatrix((*data.feature_names, data.label_name), r, defined)


def top_correlated_features(cm: CorrelationMatrix, k: int) -> list[str]:
    """The k features with the largest |r| against the label.

    Ties go to the name that sorts first; undefined correlations rank last.
    """
    names = cm.names[:-1]
    if not 0 <= k <= len(names):
        raise ValueError(f"k={k} outside [0, {len(names)}]")
    row = cm.values[-1, :-1]
    keyed = []
    for name, r, ok in zip(names, row.tolist(), cm.defined[-1, :-1].tolist()):
        keyed.append((0 if ok else 1, -abs(r) if ok else 0.0, name))
    keyed.sort()
    return [name for _, _, name in keyed[:k]]


def random_undersample(data: Dataset, ratio: float = 1.0, seed: int = 0) -> Dataset:
    """Keep every minority row plus ``round(ratio * n_minority)`` random majority rows.

    ``ratio`` is majority:minority in the output (1.0 = balanced). The result
    is shuffled with the same generator.
    """
    neg, pos = class_counts(data)
    if neg == 0 or pos == 0:
        raise DataError("undersampling needs both classes present")
    if not ratio > 0:
        raise DataError("ratio must be positive")
    minority = 1 if pos <= neg else 0
    n_min, n_maj = min(neg, pos), max(neg, pos)
    keep = int(math.floor(ratio * n_min + 0.5))
    if keep < 1 or keep > n_maj:
        raise DataError(f"ratio {ratio} needs {keep} majority rows but only {n_maj} exist")
    rng = np.random.default_rng(seed)
    min_idx = np.flatnonzero(data.labels == minority)
    maj_idx = np.flatnonzero(data.labels != minority)
    chosen = rng.choice(maj_idx, size=keep, replace=False)
    idx = np.concatenate([min_idx, chosen])
    return data.take(idx[rng.permutation(idx.size)])


@dataclass(frozen=True)
class OutlierReport:
    fences: dict[str, tuple[float, float]]
    flagged: dict[str, int]  # rows outside each feature's fence (may overlap)
    removed: int


def remove_extreme_outliers(
    data: Dataset, features: list[str] | tuple[str, ...], iqr_multiplier: float = 2.5
) -> tuple[Dataset, OutlierReport]:
    """Single-pass Tukey-fence filter.

    Fences ``[Q1 - mult*IQR, Q3 + mult*IQR]`` are computed once on the input
    (linear-interpolated quartiles) and are inclusive. A row outside the fence
    of any listed feature is dropped.
    """
    if data.n < 4:
        raise DataError(f"need at least 4 rows for quartiles, got {data.n}")
    if not iqr_multiplier > 0:
        raise ValueError("iqr_multiplier must be positive")
    keep = np.ones(data.n, dtype=bool)
    fences, flagged = {}, {}
    for name in features:
        col = data.column(name)
        q1, q3 = np.percentile(col, [25.0, 75.0])
        iqr = q3 - q1
        lo, hi = q1 - iqr_multiplier * iqr, q3 + iqr_multiplier * iqr
        out = (col < lo) | (col > hi)
        fences[name] = (float(lo), float(hi))
        flagged[name] = int(out.sum())
        keep &= ~out
    removed = int(data.n - keep.sum())
    return data.take(np.flatnonzero(keep)), OutlierReport(fences, flagged, removed)
