"""The compiled kernels and the pure-Python fallback must agree exactly."""

import numpy as np
import pytest

from fraudkit import _pykernels

ck = pytest.importorskip("fraudkit._ckernels")


@pytest.mark.parametrize("seed", range(5))
def test_pegasos_identical(seed):
    rng = np.random.default_rng(seed)
    n, d = 60, 4
    X = np.ascontiguousarray(np.column_stack([rng.normal(size=(n, d)), np.ones(n)]))
    y = np.where(rng.random(n) < 0.4, 1.0, -1.0)
    order = np.concatenate([rng.permutation(n) for _ in range(7)]).astype(np.intp)
    for constant in (False, True):
        a = ck.pegasos_train(X, y, order, 1 / 60, 0.05, constant)
        b = _pykernels.pegasos_train(X, y, order, 1 / 60, 0.05, constant)
        assert np.asarray(a).tobytes() == b.tobytes()


@pytest.mark.parametrize("seed", range(10))
@pytest.mark.parametrize("min_leaf", [1, 3])
def test_best_split_identical(seed, min_leaf):
    rng = np.random.default_rng(seed)
    n, d = 40, 3
    # rounded values force ties inside columns
    X = np.ascontiguousarray(np.round(rng.normal(size=(n, d)), 1))
    y = (rng.random(n) < 0.5).astype(np.int8)
    order = np.ascontiguousarray(np.argsort(X, axis=0, kind="stable"), dtype=np.intp)
    a = ck.best_split(X, y, order, min_leaf)
    b = _pykernels.best_split(X, y, order, min_leaf)
    assert a[0] == b[0] and a[1] == b[1] and a[2] == b[2]


def test_best_split_no_valid_split():
    X = np.ones((6, 2))
    y = np.array([0, 1, 0, 1, 0, 1], np.int8)
    order = np.ascontiguousarray(np.argsort(X, axis=0, kind="stable"), dtype=np.intp)
    assert ck.best_split(X, y, order, 1)[0] == -1
    assert _pykernels.best_split(X, y, order, 1)[0] == -1


def test_best_split_brute_force():
    rng = np.random.default_rng(77)
    for _ in range(20):
        n, d = 25, 3
        X = np.ascontiguousarray(np.round(rng.normal(size=(n, d)), 1))
        y = (rng.random(n) < 0.5).astype(np.int8)
        order = np.ascontiguousarray(np.argsort(X, axis=0, kind="stable"), dtype=np.intp)
        f, thr, score = ck.best_split(X, y, order, 2)
        best = None
        for j in range(d):
            u = np.unique(X[:, j])
            for t in (u[:-1] + u[1:]) / 2:
                left = X[:, j] <= t
                nl, nr = left.sum(), (~left).sum()
                if nl < 2 or nr < 2:
                    continue
                g = lambda m: 2 * y[m].mean() * (1 - y[m].mean())  # noqa: E731
                wg = (nl * g(left) + nr * g(~left)) / n
                if best is None or wg < best - 1e-12:
                    best = wg
        assert 2 * score / n == pytest.approx(best, abs=1e-12)


@pytest.mark.parametrize("k", [1, 3, 8])
def test_knn_identical_with_ties(k):
    rng = np.random.default_rng(k)
    train = np.ascontiguousarray(rng.integers(0, 3, size=(30, 2)).astype(float))
    labels = (rng.random(30) < 0.5).astype(np.int8)
    queries = np.ascontiguousarray(rng.integers(0, 3, size=(15, 2)).astype(float))
    a = ck.knn_positive_counts(train, labels, queries, k)
    b = _pykernels.knn_positive_counts(train, labels, queries, k)
    assert np.array_equal(a, b)
    # brute force: sort by (distance, index)
    for q, x in enumerate(queries):
        dist = ((train - x) ** 2).sum(1)
        idx = sorted(range(30), key=lambda i: (dist[i], i))[:k]
        assert a[q] == labels[idx].sum()


def test_backend_selection_env(monkeypatch):
    import subprocess
    import sys

    code = "import fraudkit; print(fraudkit.BACKEND)"
    env = dict(__import__("os").environ, FRAUDKIT_BACKEND="python")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"
    env.pop("FRAUDKIT_BACKEND")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "cython"
