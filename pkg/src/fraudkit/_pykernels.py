"""Pure-Python/numpy versions of the compiled kernels.

Floating-point operations happen in the same order as in ``_ckernels.pyx`` so
both backends produce identical models.
"""

from __future__ import annotations

import numpy as np


def pegasos_train(X, y, order, lam, eta0, constant_rate):
    X = np.asarray(X, dtype=np.float64).tolist()
    y = np.asarray(y, dtype=np.float64).tolist()
    d = len(X[0])
    w = [0.0] * d
    for t, i in enumerate(np.asarray(order).tolist()):
        eta = eta0 if constant_rate else 1.0 / (lam * float(t + 1))
        xi = X[i]
        margin = 0.0
        for j in range(d):
            margin = margin + w[j] * xi[j]
        margin = y[i] * margin
        shrink = 1.0 - eta * lam
        w = [shrink * wj for wj in w]
        if margin < 1.0:
            step = eta * y[i]
            w = [wj + step * xj for wj, xj in zip(w, xi)]
    return np.array(w, dtype=np.float64)


def best_split(X, y, order, min_leaf):
    n, d = X.shape
    yf = y.astype(np.float64)
    total_pos = float(yf.sum())
    best_f, best_thr, best_score = -1, 0.0, 0.0
    i = np.arange(1, n)
    nl = i.astype(np.float64)
    nr = (n - i).astype(np.float64)
    size_ok = (i >= min_leaf) & (n - i >= min_leaf)
    for f in range(d):
        col = X[order[:, f], f]
        pos_l = np.cumsum(yf[order[:, f]])[:-1]
        lo, hi = col[:-1], col[1:]
        valid = size_ok & (lo < hi)
        if not valid.any():
            continue
        neg_l = nl - pos_l
        pos_r = total_pos - pos_l
        neg_r = nr - pos_r
        score = pos_l * neg_l / nl + pos_r * neg_r / nr
        score = np.where(valid, score, np.inf)
        at = int(np.argmin(score))
        if best_f < 0 or score[at] < best_score:
            mid = 0.5 * (lo[at] + hi[at])
            if not mid < hi[at]:
                mid = lo[at]
            best_f, best_thr, best_score = f, float(mid), float(score[at])
    return best_f, best_thr, best_score


def knn_positive_counts(train, labels, queries, k):
    n, d = train.shape
    out = np.zeros(queries.shape[0], dtype=np.int64)
    for q, x in enumerate(queries):
        dist = np.zeros(n)
        for j in range(d):
            diff = train[:, j] - x[j]
            dist = dist + diff * diff
        nearest = np.argsort(dist, kind="stable")[:k]
        out[q] = int(labels[nearest].sum())
    return out
