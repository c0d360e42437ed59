import csv
import io
import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fraudkit.metrics import (
    ConfusionMatrix,
    EvalReport,
    auc,
    confusion_matrix,
    evaluate,
    precision_recall_f1,
    render_report,
    roc_auc,
    roc_curve,
    round_half_even,
)

from conftest import pair_statistic


def test_confusion_examples():
    assert confusion_matrix([1, 1, 0, 0], [1, 0, 0, 1]) == ConfusionMatrix(tp=1, fp=1, fn=1, tn=1)
    cm = confusion_matrix([1, 0, 1, 1], [1, 0, 1, 1])
    assert cm.fp == cm.fn == 0
    cm = confusion_matrix([1, 0, 1], [0, 0, 0])
    assert cm.tp == cm.fp == 0


def test_confusion_errors():
    with pytest.raises(ValueError):
        confusion_matrix([1, 0], [1])
    with pytest.raises(ValueError):
        confusion_matrix([], [])


@settings(max_examples=50, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 1), st.integers(0, 1)), min_size=1, max_size=60))
def test_confusion_sums_to_n(pairs):
    labels, preds = zip(*pairs)
    assert confusion_matrix(labels, preds).total == len(pairs)


def test_prf_example():
    r = precision_recall_f1(ConfusionMatrix(tp=50, fp=10, fn=20, tn=0))
    assert r.precision == pytest.approx(50 / 60) and round(r.precision, 4) == 0.8333
    assert r.recall == pytest.approx(50 / 70) and round(r.recall, 4) == 0.7143
    assert round(r.f1, 4) == 0.7692
    assert r.degenerate == ()


def test_prf_degenerate():
    r = precision_recall_f1(ConfusionMatrix(tp=0, fp=0, fn=5, tn=5))
    assert r.precision == 0.0 and "precision" in r.degenerate
    assert r.f1 == 0.0 and "f1" in r.degenerate


@settings(max_examples=100, deadline=None)
@given(tp=st.integers(0, 50), fp=st.integers(0, 50), fn=st.integers(0, 50))
def test_prf_bounds(tp, fp, fn):
    r = precision_recall_f1(ConfusionMatrix(tp, fp, fn, 0))
    for v in (r.precision, r.recall, r.f1):
        assert 0.0 <= v <= 1.0
    assert r.f1 <= 2 * min(r.precision, r.recall) + 1e-15
    assert r.f1 <= (r.precision + r.recall) / 2 + 1e-15


@pytest.mark.parametrize("x", [0.1, 0.37, 0.5, 0.99, 1.0])
def test_prf_equal_p_and_r(x):
    # tp/(tp+fp) = tp/(tp+fn) = x
    tp = 100 * x
    cm = ConfusionMatrix(int(round(tp)), int(round(100 - tp)), int(round(100 - tp)), 0)
    r = precision_recall_f1(cm)
    assert r.f1 == pytest.approx(r.precision) == pytest.approx(x)


def test_roc_worked_example():
    curve = roc_curve([1, 0, 1, 0], [0.9, 0.8, 0.7, 0.1])
    assert curve.points == [(0.0, 0.0), (0.0, 0.5), (0.5, 0.5), (0.5, 1.0), (1.0, 1.0)]
    assert auc(curve) == 0.75
    assert pair_statistic([1, 0, 1, 0], [0.9, 0.8, 0.7, 0.1]) == 0.75


def test_roc_perfect_and_reversed():
    curve = roc_curve([1, 1, 0, 0], [4, 3, 2, 1])
    assert (0.0, 1.0) in curve.points and auc(curve) == 1.0
    assert roc_auc([1, 1, 0, 0], [1, 2, 3, 4]) == 0.0


def test_roc_all_tied():
    curve = roc_curve([1, 0, 0, 1, 0], [0.3] * 5)
    assert curve.points == [(0.0, 0.0), (1.0, 1.0)]
    assert auc(curve) == 0.5


def test_roc_single_class():
    with pytest.raises(ValueError):
        roc_curve([1, 1], [0.1, 0.2])


@settings(max_examples=200, deadline=None)
@given(st.integers(2, 120).flatmap(lambda n: st.tuples(
    st.lists(st.integers(0, 1), min_size=n, max_size=n),
    st.lists(st.integers(0, 6).map(lambda v: v / 3.0), min_size=n, max_size=n),
)))
def test_auc_equals_pair_statistic(case):
    labels, scores = case
    if len(set(labels)) < 2:
        return
    curve = roc_curve(labels, scores)
    assert abs(auc(curve) - pair_statistic(labels, scores)) <= 1e-12
    assert curve.points[0] == (0.0, 0.0) and curve.points[-1] == (1.0, 1.0)
    assert np.all(np.diff(curve.fpr) >= 0) and np.all(np.diff(curve.tpr) >= 0)


def test_roc_invariant_under_monotone_transform():
    rng = np.random.default_rng(3)
    labels = rng.integers(0, 2, 150)
    labels[:2] = [0, 1]
    scores = np.round(rng.normal(size=150), 2)
    base = roc_curve(labels, scores)
    for f in (lambda s: 2 * s + 1, np.exp):
        other = roc_curve(labels, f(scores))
        assert np.array_equal(base.fpr, other.fpr) and np.array_equal(base.tpr, other.tpr)


def test_random_scores_average_half():
    rng = np.random.default_rng(10)
    aucs = []
    for _ in range(10_000):
        labels = rng.integers(0, 2, 50)
        if labels.min() == labels.max():
            continue
        aucs.append(roc_auc(labels, rng.random(50)))
    assert abs(np.mean(aucs) - 0.5) < 0.02


def test_roc_csv(tmp_path):
    curve = roc_curve([1, 0, 1, 0], [0.9, 0.8, 0.7, 0.1])
    p = tmp_path / "roc.csv"
    curve.write_csv(p)
    rows = list(csv.reader(p.open()))
    assert rows[0] == ["threshold", "fpr", "tpr"]
    assert rows[1] == ["inf", "0.0", "0.0"]
    assert [float(v) for v in rows[-1]] == [0.1, 1.0, 1.0]


def _report(name="logistic regression", p=0.8612, r=0.8349, f1=0.85, a=0.98912):
    return EvalReport(name, ConfusionMatrix(10, 2, 2, 10), p, r, f1, a, 0.5)


def test_table_rounding():
    text = render_report([_report()], "table")
    row = text.splitlines()[2].split()
    assert row[-4:] == ["0.86", "0.83", "0.85", "0.989"]
    assert len(text.splitlines()) == 3


def test_round_half_even():
    assert round_half_even(0.125, 2) == "0.12"
    assert round_half_even(0.135, 2) == "0.14"
    assert round_half_even(0.9885, 3) == "0.988"


def test_json_and_csv_full_precision():
    reps = [_report(), _report("decision tree", 1 / 3, 2 / 7, 0.3, 0.7123456789)]
    doc = json.loads(render_report(reps, "json"))
    assert doc["schema"] == "fraudkit.report/1"
    back = [EvalReport.from_dict(m) for m in doc["models"]]
    assert back[1].precision == 1 / 3 and back[1].auc == 0.7123456789
    rows = list(csv.DictReader(io.StringIO(render_report(reps, "csv"))))
    assert float(rows[1]["recall"]) == 2 / 7


def test_render_errors():
    with pytest.raises(ValueError):
        render_report([], "table")
    with pytest.raises(ValueError):
        render_report([_report()], "xml")


def test_evaluate():
    rep = evaluate("m", [1, 0, 1, 0], [0.9, 0.8, 0.7, 0.1], 0.75)
    assert rep.confusion == ConfusionMatrix(tp=1, fp=1, fn=1, tn=1)
    assert rep.auc == 0.75 and rep.roc is not None
