"""Exit criteria for the toolkit, each at its pinned tolerance.

Criterion 6 needs the public 31-column credit-card transaction CSV
(Time, V1..V28, Amount, Class). Point ``FRAUDKIT_CREDITCARD_CSV`` at it to
enable; otherwise it is skipped.
"""

import os
import time
import warnings

import numpy as np
import pytest

from fraudkit import models as mdl
from fraudkit.cli import main
from fraudkit.config import PipelineConfig, parse_config
from fraudkit.dataset import Dataset, SyntheticSpec, class_counts, generate_synthetic, load_csv, stratified_split
from fraudkit.metrics import auc, roc_auc, roc_curve
from fraudkit.models import logreg_gradient, logreg_loss
from fraudkit.pipeline import run_pipeline
from fraudkit.preprocess import DegenerateFeatureWarning, apply_scaler, fit_scaler, random_undersample

from conftest import bayes_auc, pair_statistic

BAYES_AUC = bayes_auc(2.0)  # Phi(sqrt 2) ~ 0.921


@pytest.mark.acceptance("1 trapezoidal AUC == Mann-Whitney pair statistic (100 sets, 1e-12, <5 s)")
def test_c1_auc_matches_pair_statistic():
    rng = np.random.default_rng(1)
    start = time.perf_counter()
    worst = 0.0
    for trial in range(100):
        n = int(rng.integers(2, 201))
        labels = rng.integers(0, 2, n)
        labels[0], labels[-1] = 0, 1
        # half the trials use coarse scores to exercise ties
        scores = rng.normal(size=n) if trial % 2 else rng.integers(0, 5, n).astype(float)
        worst = max(worst, abs(auc(roc_curve(labels, scores)) - pair_statistic(labels, scores)))
    assert worst <= 1e-12
    assert time.perf_counter() - start < 5.0


@pytest.mark.acceptance("2 scaling invariants on 50 random datasets (1e-9)")
def test_c2_scaling_invariants():
    rng = np.random.default_rng(2)
    for _ in range(50):
        n, d = int(rng.integers(2, 300)), int(rng.integers(1, 10))
        scale = 10.0 ** rng.uniform(-3, 4, d)
        x = rng.normal(size=(n, d)) * scale + rng.uniform(-1e3, 1e3, d)
        data = Dataset(tuple(f"f{i}" for i in range(d)), x, rng.integers(0, 2, n))
        with warnings.catch_warnings():
            warnings.simplefilter("error", DegenerateFeatureWarning)
            st = apply_scaler(data, fit_scaler(data, "standardize")).rows
            mm = apply_scaler(data, fit_scaler(data, "minmax")).rows
            mn = apply_scaler(data, fit_scaler(data, "meannorm")).rows
        assert np.all(np.abs(st.mean(0)) < 1e-9)
        assert np.all(np.abs(st.var(0) - 1.0) < 1e-9)
        assert np.all((mm >= 0.0) & (mm <= 1.0))
        assert np.all((mn >= -1.0) & (mn <= 1.0))
        assert np.all(np.abs(mn.mean(0)) < 1e-9)


@pytest.mark.acceptance("3 logistic-regression gradient vs central differences (20 points, rel < 1e-5, <5 s)")
def test_c3_gradient_check():
    rng = np.random.default_rng(3)
    start = time.perf_counter()
    for _ in range(20):
        n, d = int(rng.integers(5, 50)), int(rng.integers(1, 8))
        X = rng.normal(size=(n, d))
        y = rng.integers(0, 2, n).astype(float)
        w, b, l2 = rng.normal(size=d), float(rng.normal()), 1e-4
        theta = np.r_[w, b]

        def f(t):
            return logreg_loss(t[:-1], t[-1], X, y, l2)

        h = 1e-6
        numeric = np.array([(f(theta + h * e) - f(theta - h * e)) / (2 * h) for e in np.eye(d + 1)])
        gw, gb = logreg_gradient(w, b, X, y, l2)
        analytic = np.r_[gw, gb]
        assert np.linalg.norm(analytic - numeric) / np.linalg.norm(numeric) < 1e-5
    assert time.perf_counter() - start < 5.0


@pytest.mark.acceptance("4 1:1 undersampling gives exactly equal class counts")
@pytest.mark.parametrize("neg,pos", [(1000, 10), (284315, 492), (50, 49), (3, 3), (10, 1000), (5000, 1)])
def test_c4_undersample_balance(neg, pos):
    labels = np.r_[np.zeros(neg, int), np.ones(pos, int)]
    data = Dataset(("x",), np.arange(neg + pos, dtype=float)[:, None], labels)
    for seed in range(3):
        assert class_counts(random_undersample(data, 1.0, seed)) == (min(neg, pos), min(neg, pos))


@pytest.mark.acceptance("5 synthetic Bayes-AUC recovery: logreg & SVM mean AUC within 0.03 of 0.921 (<60 s)")
def test_c5_bayes_auc_recovery():
    start = time.perf_counter()
    spec = SyntheticSpec(4000, 0.5, 4, 2.0, 1.0)
    assert spec.bayes_auc() == pytest.approx(BAYES_AUC, abs=1e-15)
    got = {"logreg": [], "svm": []}
    for seed in range(5):
        train, test = stratified_split(generate_synthetic(spec, seed), 0.3, seed + 100)
        for kind in got:
            model = mdl.train(kind, train, seed=seed)
            got[kind].append(roc_auc(test.labels, mdl.score_many(model, test.rows)))
    for kind, aucs in got.items():
        assert abs(np.mean(aucs) - BAYES_AUC) <= 0.03, (kind, aucs)
    assert time.perf_counter() - start < 60.0


CREDITCARD = os.environ.get("FRAUDKIT_CREDITCARD_CSV")


@pytest.mark.acceptance("6 public credit-card CSV: LR recall >= 0.80, AUC >= 0.95, LR best in >= 3/5 seeds (<5 min)")
@pytest.mark.skipif(not CREDITCARD, reason="set FRAUDKIT_CREDITCARD_CSV to the public 31-column credit-card CSV")
def test_c6_paper_tables_soft(tmp_path):
    start = time.perf_counter()
    base = PipelineConfig(seed=0, input=os.path.abspath(CREDITCARD), label_column="Class")
    recalls, aucs, lr_best = [], [], 0
    for seed in range(5):
        manifest = run_pipeline(base.with_overrides(seed=seed, out_dir=str(tmp_path / f"s{seed}")))
        by_kind = {m["kind"]: m for m in manifest["models"]}
        lr = by_kind["logreg"]
        recalls.append(lr["recall"])
        aucs.append(lr["auc"])
        others = [m for k, m in by_kind.items() if k != "logreg"]
        if all(lr[key] >= max(o[key] for o in others) for key in ("recall", "f1", "auc")):
            lr_best += 1
    assert np.mean(recalls) >= 0.80, recalls
    assert np.mean(aucs) >= 0.95, aucs
    assert lr_best >= 3, lr_best
    assert time.perf_counter() - start < 300.0


SYNTH_CFG = """\
seed = 2024
input = synthetic
synthetic.n_total = 20000
synthetic.positive_fraction = 0.01
synthetic.d = 8
synthetic.separation = 2.5
"""


@pytest.mark.acceptance("7 determinism: identical config+seed gives byte-identical report and manifest")
def test_c7_determinism(tmp_path):
    cfg = tmp_path / "c.cfg"
    cfg.write_text(SYNTH_CFG)
    for run in ("a", "b"):
        assert main(["run", "--config", str(cfg), "--seed", "99", "--out", str(tmp_path / run)]) == 0
    for name in ("report.table", "report.json", "report.csv", "manifest.json"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes(), name


@pytest.mark.acceptance("8 desk-scale end-to-end: n=20000, all four models, < 60 s")
def test_c8_end_to_end(tmp_path):
    start = time.perf_counter()
    manifest = run_pipeline(parse_config(SYNTH_CFG).with_overrides(out_dir=str(tmp_path / "e2e")))
    elapsed = time.perf_counter() - start
    assert [m["kind"] for m in manifest["models"]] == ["logreg", "knn", "tree", "svm"]
    assert manifest["stages"][0]["rows"] == 20000
    for m in manifest["models"]:
        assert all(0.0 <= m[k] <= 1.0 for k in ("precision", "recall", "f1"))
        assert m["auc"] > 0.5
    assert elapsed < 60.0
