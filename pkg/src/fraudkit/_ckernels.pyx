# cython: language_level=3
"""Compiled inner loops. Must stay numerically identical to ``_pykernels``."""

import numpy as np
cimport numpy as cnp

cnp.import_array()


def pegasos_train(const double[:, ::1] X, const double[::1] y, const cnp.intp_t[::1] order,
                  double lam, double eta0, bint constant_rate):
    """Run Pegasos updates over ``order``; X carries a trailing column of ones."""
    cdef Py_ssize_t d = X.shape[1]
    cdef Py_ssize_t T = order.shape[0]
    cdef Py_ssize_t t, j, i
    cdef double eta, shrink, margin, step
    w_arr = np.zeros(d, dtype=np.float64)
    cdef double[::1] w = w_arr
    with nogil:
        for t in range(T):
            i = order[t]
            if constant_rate:
                eta = eta0
            else:
                eta = 1.0 / (lam * <double>(t + 1))
            margin = 0.0
            for j in range(d):
                margin = margin + w[j] * X[i, j]
            margin = y[i] * margin
            shrink = 1.0 - eta * lam
            for j in range(d):
                w[j] = shrink * w[j]
            if margin < 1.0:
                step = eta * y[i]
                for j in range(d):
                    w[j] = w[j] + step * X[i, j]
    return w_arr


def best_split(const double[:, ::1] X, const signed char[::1] y,
               const cnp.intp_t[:, ::1] order, Py_ssize_t min_leaf):
    """Scan every (feature, midpoint) pair; return (feature, threshold, score).

    ``order[:, f]`` sorts column f. Score is ``pos_l*neg_l/n_l + pos_r*neg_r/n_r``
    (proportional to weighted Gini); the first minimum in (feature, threshold)
    order wins. Returns feature -1 when no valid split exists.
    """
    cdef Py_ssize_t n = X.shape[0]
    cdef Py_ssize_t d = X.shape[1]
    cdef Py_ssize_t f, i, a, b
    cdef double total_pos = 0.0, pos_l, neg_l, pos_r, neg_r, nl, nr, score, lo, hi, mid
    cdef double best_score = 0.0, best_thr = 0.0
    cdef Py_ssize_t best_f = -1
    for i in range(n):
        total_pos += y[i]
    with nogil:
        for f in range(d):
            pos_l = 0.0
            for i in range(1, n):
                a = order[i - 1, f]
                b = order[i, f]
                pos_l += y[a]
                if i < min_leaf or n - i < min_leaf:
                    continue
                lo = X[a, f]
                hi = X[b, f]
                if not lo < hi:
                    continue
                nl = <double>i
                nr = <double>(n - i)
                neg_l = nl - pos_l
                pos_r = total_pos - pos_l
                neg_r = nr - pos_r
                score = pos_l * neg_l / nl + pos_r * neg_r / nr
                if best_f < 0 or score < best_score:
                    mid = 0.5 * (lo + hi)
                    if not mid < hi:
                        mid = lo
                    best_score = score
                    best_thr = mid
                    best_f = f
    return best_f, best_thr, best_score


def knn_positive_counts(const double[:, ::1] train, const signed char[::1] labels,
                        const double[:, ::1] queries, Py_ssize_t k):
    """Positive labels among each query's k nearest rows (squared Euclidean, index tiebreak)."""
    cdef Py_ssize_t n = train.shape[0]
    cdef Py_ssize_t d = train.shape[1]
    cdef Py_ssize_t m = queries.shape[0]
    cdef Py_ssize_t q, i, j, s, filled
    cdef double dist, diff
    out_arr = np.zeros(m, dtype=np.int64)
    cdef cnp.int64_t[::1] out = out_arr
    best_d_arr = np.empty(k, dtype=np.float64)
    best_i_arr = np.empty(k, dtype=np.intp)
    cdef double[::1] best_d = best_d_arr
    cdef cnp.intp_t[::1] best_i = best_i_arr
    cdef cnp.int64_t cnt
    with nogil:
        for q in range(m):
            filled = 0
            for i in range(n):
                dist = 0.0
                for j in range(d):
                    diff = train[i, j] - queries[q, j]
                    dist = dist + diff * diff
                # rows arrive in index order, so strict < keeps the lower index on ties
                if filled == k and not dist < best_d[k - 1]:
                    continue
                if filled < k:
                    s = filled
                    filled += 1
                else:
                    s = k - 1
                while s > 0 and dist < best_d[s - 1]:
                    best_d[s] = best_d[s - 1]
                    best_i[s] = best_i[s - 1]
                    s -= 1
                best_d[s] = dist
                best_i[s] = i
            cnt = 0
            for s in range(k):
                cnt += labels[best_i[s]]
            out[q] = cnt
    return out_arr
