import importlib
import math

import numpy as np
import pytest

from fraudkit import _pykernels


def _available_backends():
    backends = [pytest.param(_pykernels, id="python")]
    try:
        backends.append(pytest.param(importlib.import_module("fraudkit._ckernels"), id="cython"))
    except ImportError:
        backends.append(pytest.param(None, id="cython", marks=pytest.mark.skip("extension not built")))
    return backends


@pytest.fixture(params=_available_backends())
def kernels(request, monkeypatch):
    """Run a test once per kernel backend by patching the model modules."""
    from fraudkit.models import knn, svm, tree

    for mod in (knn, svm, tree):
        monkeypatch.setattr(mod, "kernels", request.param)
    return request.param


def pair_statistic(labels, scores):
    """Exhaustive Mann-Whitney oracle: P(score_pos > score_neg) + 0.5 P(tie)."""
    pos = [s for s, y in zip(scores, labels) if y == 1]
    neg = [s for s, y in zip(scores, labels) if y == 0]
    total = 0.0
    for p in pos:
        for q in neg:
            total += 1.0 if p > q else 0.5 if p == q else 0.0
    return total / (len(pos) * len(neg))


def bayes_auc(separation, noise=1.0):
    return 0.5 * math.erfc(-(separation / (noise * math.sqrt(2))) / math.sqrt(2))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


# ---- acceptance summary: one PASS/FAIL/SKIP line per criterion ----

_ACCEPTANCE: dict[str, tuple[str, str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(label): acceptance criterion with a human-readable label")


def pytest_runtest_logreport(report):
    marker = getattr(report, "acceptance_label", None)
    if marker is None:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _ACCEPTANCE[report.nodeid] = (marker, report.outcome)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    m = item.get_closest_marker("acceptance")
    if m is not None:
        rep.acceptance_label = m.args[0]


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    # parametrized criteria collapse to one line: any failure fails, all skipped skips
    merged: dict[str, set[str]] = {}
    for label, outcome in _ACCEPTANCE.values():
        merged.setdefault(label, set()).add(outcome)
    for label in sorted(merged):
        outcomes = merged[label]
        status = "FAIL" if "failed" in outcomes else "SKIP" if outcomes == {"skipped"} else "PASS"
        terminalreporter.write_line(f"{status}  {label}")
