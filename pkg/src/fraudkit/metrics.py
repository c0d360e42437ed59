"""Confusion matrix, precision/recall/F1, ROC curve, AUC and report rendering."""

from __future__ import annotations

import csv
import io
import json
import os
from dataclasses import dataclass, field
from decimal import ROUND_HALF_EVEN, Decimal

import numpy as np

REPORT_SCHEMA = "fraudkit.report/1"


@dataclass(frozen=True)
class ConfusionMatrix:
    tp: int
    fp: int
    fn: int
    tn: int

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.fn + self.tn


def confusion_matrix(labels, preds) -> ConfusionMatrix:
    labels = np.asarray(labels).astype(bool)
    preds = np.asarray(preds).astype(bool)
    if labels.shape != preds.shape:
        raise ValueError(f"length mismatch: {labels.size} labels vs {preds.size} predictions")
    if labels.size == 0:
        raise ValueError("no rows to evaluate")
    return ConfusionMatrix(
        tp=int(np.sum(labels & preds)),
        fp=int(np.sum(~labels & preds)),
        fn=int(np.sum(labels & ~preds)),
        tn=int(np.sum(~labels & ~preds)),
    )


@dataclass(frozen=True)
class PrecisionRecallF1:
    precision: float
    recall: float
    f1: float
    degenerate: tuple[str, ...] = ()  # metrics whose denominator was 0 (reported as 0.0)


def precision_recall_f1(cm: ConfusionMatrix) -> PrecisionRecallF1:
    flags = []

    def ratio(num, den, name):
        if den == 0:
            flags.append(name)
            return 0.0
        return num / den

    p = ratio(cm.tp, cm.tp + cm.fp, "precision")
    r = ratio(cm.tp, cm.tp + cm.fn, "recall")
    f1 = ratio(2.0 * p * r, p + r, "f1")
    return PrecisionRecallF1(p, r, f1, tuple(flags))


@dataclass(frozen=True, eq=False)
class RocCurve:
    """ROC polyline from (0, 0) to (1, 1).

    ``thresholds[i]`` is the cut producing point i (predict 1 iff score >= cut);
    the first entry is +inf.
    """

    fpr: np.ndarray
    tpr: np.ndarray
    thresholds: np.ndarray

    @property
    def points(self) -> list[tuple[float, float]]:
        return list(zip(self.fpr.tolist(), self.tpr.tolist()))

    @property
    def auc(self) -> float:
        return auc(self)

    def write_csv(self, path: str | os.PathLike) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["threshold", "fpr", "tpr"])
            for row in zip(self.thresholds.tolist(), self.fpr.tolist(), self.tpr.tolist()):
                w.writerow([repr(v) for v in row])


def roc_curve(labels, scores) -> RocCurve:
    """One point per distinct score, swept from high to low.

    Tied scores move FPR and TPR together, giving a diagonal segment.
    """
    labels = np.asarray(labels).astype(bool)
    scores = np.asarray(scores, dtype=np.float64)
    if labels.shape != scores.shape:
        raise ValueError("labels and scores differ in length")
    n_pos = int(labels.sum())
    n_neg = labels.size - n_pos
    if n_pos == 0 or n_neg == 0:
        raise ValueError("ROC needs at least one positive and one negative")
    order = np.argsort(-scores, kind="stable")
    s, lab = scores[order], labels[order]
    tp = np.cumsum(lab)
    fp = np.cumsum(~lab)
    # last index of each tie block
    ends = np.flatnonzero(np.r_[s[1:] != s[:-1], True])
    fpr = np.r_[0.0, fp[ends] / n_neg]
    tpr = np.r_[0.0, tp[ends] / n_pos]
    thresholds = np.r_[np.inf, s[ends]]
    return RocCurve(fpr, tpr, thresholds)


def auc(curve: RocCurve) -> float:
    """Trapezoidal area under the ROC polyline."""
    return float(np.sum(np.diff(curve.fpr) * (curve.tpr[1:] + curve.tpr[:-1])) / 2.0)


def roc_auc(labels, scores) -> float:
    return auc(roc_curve(labels, scores))


@dataclass(frozen=True, eq=False)
class EvalReport:
    model: str
    confusion: ConfusionMatrix
    precision: float
    recall: float
    f1: float
    auc: float
    threshold: float
    roc: RocCurve | None = field(default=None, repr=False)
    degenerate: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        cm = self.confusion
        return {
            "model": self.model,
            "threshold": self.threshold,
            "tp": cm.tp, "fp": cm.fp, "fn": cm.fn, "tn": cm.tn,
            "precision": self.precision,
            "recall": self.recall,
            "f1": self.f1,
            "auc": self.auc,
            "degenerate": list(self.degenerate),
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "EvalReport":
        cm = ConfusionMatrix(int(doc["tp"]), int(doc["fp"]), int(doc["fn"]), int(doc["tn"]))
        return cls(doc["model"], cm, float(doc["precision"]), float(doc["recall"]), float(doc["f1"]),
                   float(doc["auc"]), float(doc["threshold"]), None, tuple(doc.get("degenerate", ())))


def evaluate(name: str, labels, scores, threshold: float) -> EvalReport:
    labels = np.asarray(labels)
    scores = np.asarray(scores, dtype=np.float64)
    cm = confusion_matrix(labels, scores >= threshold)
    prf = precision_recall_f1(cm)
    curve = roc_curve(labels, scores)
    return EvalReport(name, cm, prf.precision, prf.recall, prf.f1, auc(curve), threshold, curve, prf.degenerate)


def round_half_even(x: float, places: int) -> str:
    q = Decimal(1).scaleb(-places)
    return str(Decimal(repr(float(x))).quantize(q, rounding=ROUND_HALF_EVEN))


COLUMNS = ("precision", "recall", "f1", "auc")


def render_report(reports: list[EvalReport], fmt: str = "table", prf_places: int = 2, auc_places: int = 3) -> str:
    """Render one row per model.

    ``table`` rounds half-even (P/R/F1 to ``prf_places``, AUC to
    ``auc_places``); ``json`` and ``csv`` keep full precision.
    """
    if not reports:
        raise ValueError("no reports to render")
    if fmt == "json":
        doc = {"schema": REPORT_SCHEMA, "models": [r.to_dict() for r in reports]}
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["model", *COLUMNS, "threshold", "tp", "fp", "fn", "tn"])
        for r in reports:
            cm = r.confusion
            w.writerow([r.model, *(repr(getattr(r, c)) for c in COLUMNS), repr(r.threshold),
                        cm.tp, cm.fp, cm.fn, cm.tn])
        return buf.getvalue()
    if fmt != "table":
        raise ValueError(f"unknown report format {fmt!r}")
    header = ["model", "precision", "recall", "F1", "AUC"]
    body = [
        [r.model, round_half_even(r.precision, prf_places), round_half_even(r.recall, prf_places),
         round_half_even(r.f1, prf_places), round_half_even(r.auc, auc_places)]
        for r in reports
    ]
    widths = [max(len(row[i]) for row in [header, *body]) for i in range(len(header))]
    lines = []
    for row in [header, *body]:
        cells = [row[0].ljust(widths[0])] + [c.rjust(wd) for c, wd in zip(row[1:], widths[1:])]
        lines.append("  ".join(cells).rstrip())
    lines.insert(1, "  ".join("-" * wd for wd in widths))
    return "\n".join(lines) + "\n"
