"""Hot numeric kernels, each in two flavours.

``*_loop`` functions are explicit loops compiled with numba; ``*_np`` functions
are the vectorized numpy fallback. The public names at the bottom of the
module dispatch to one or the other according to :data:`BACKEND`. Both
flavours are always importable so tests can compare them directly.

All kernels take contiguous float64 arrays and do no validation; callers in
:mod:`loocv_r2.core` and :mod:`loocv_r2.harness` check shapes and finiteness.
"""

import math

import numpy as np

from ._accel import BACKEND, USE_NUMBA, njit

__all__ = [
    "BACKEND",
    "compensated_sum",
    "compensated_sum_sq_diff",
    "sum_sq_diff",
    "sum_sq_dev",
    "loo_means",
    "brute_loo_means",
    "knn_loo",
    "knn_predict",
]


# ---------------------------------------------------------------------------
# summation
# ---------------------------------------------------------------------------

@njit
def _compensated_sum_loop(x):
    # Neumaier's variant of Kahan summation
    s = 0.0
    c = 0.0
    for v in x:
        t = s + v
        if abs(s) >= abs(v):
            c += (s - t) + v
        else:
            c += (v - t) + s
        s = t
    return s + c


def _compensated_sum_np(x):
    return math.fsum(x.tolist())


@njit
def _compensated_sum_sq_diff_loop(a, b):
    s = 0.0
    c = 0.0
    for i in range(a.shape[0]):
        d = a[i] - b[i]
        v = d * d
        t = s + v
        if abs(s) >= v:
            c += (s - t) + v
        else:
            c += (v - t) + s
        s = t
    return s + c


def _compensated_sum_sq_diff_np(a, b):
    d = a - b
    return math.fsum((d * d).tolist())


@njit
def _sum_sq_diff_loop(a, b):
    s = 0.0
    for i in range(a.shape[0]):
        d = a[i] - b[i]
        s += d * d
    return s


def _sum_sq_diff_np(a, b):
    d = a - b
    return float(d @ d)


@njit
def _sum_sq_dev_loop(y, center):
    s = 0.0
    for v in y:
        d = v - center
        s += d * d
    return s


def _sum_sq_dev_np(y, center):
    d = y - center
    return float(d @ d)


# ---------------------------------------------------------------------------
# leave-one-out means
# ---------------------------------------------------------------------------

@njit
def _loo_means_loop(y):
    n = y.shape[0]
    total = _compensated_sum_loop(y)
    out = np.empty(n)
    for i in range(n):
        out[i] = (total - y[i]) / (n - 1)
    return out


def _loo_means_np(y):
    total = math.fsum(y.tolist())
    return (total - y) / (y.shape[0] - 1)


@njit
def _brute_loo_means_loop(y):
    # O(n^2): re-sums the n - 1 retained values for every i
    n = y.shape[0]
    out = np.empty(n)
    for i in range(n):
        s = 0.0
        c = 0.0
        for j in range(n):
            if j == i:
                continue
            v = y[j]
            t = s + v
            if abs(s) >= abs(v):
                c += (s - t) + v
            else:
                c += (v - t) + s
            s = t
        out[i] = (s + c) / (n - 1)
    return out


def _brute_loo_means_np(y):
    n = y.shape[0]
    rows = np.broadcast_to(y, (n, n)).copy()
    np.fill_diagonal(rows, 0.0)
    sums = np.array([math.fsum(r) for r in rows.tolist()])
    return sums / (n - 1)


# ---------------------------------------------------------------------------
# k nearest neighbours
# ---------------------------------------------------------------------------

@njit
def _insert_nearest(best_d, best_i, count, k, dist, j):
    # keep the k smallest (dist, index) pairs sorted; candidates arrive in
    # ascending index order, so an equal distance never displaces an earlier row
    if count == k and dist >= best_d[k - 1]:
        return count
    pos = count if count < k else k - 1
    while pos > 0 and best_d[pos - 1] > dist:
        if pos < k:
            best_d[pos] = best_d[pos - 1]
            best_i[pos] = best_i[pos - 1]
        pos -= 1
    best_d[pos] = dist
    best_i[pos] = j
    return count + 1 if count < k else count


@njit
def _knn_predict_loop(train_x, train_y, row, k):
    best_d = np.empty(k)
    best_i = np.empty(k, dtype=np.int64)
    count = 0
    for j in range(train_x.shape[0]):
        acc = 0.0
        for f in range(train_x.shape[1]):
            diff = train_x[j, f] - row[f]
            acc += diff * diff
        count = _insert_nearest(best_d, best_i, count, k, acc, j)
    s = 0.0
    for r in range(k):
        s += train_y[best_i[r]]
    return s / k


@njit
def _knn_loo_loop(x, y, k):
    n = x.shape[0]
    out = np.empty(n)
    best_d = np.empty(k)
    best_i = np.empty(k, dtype=np.int64)
    for i in range(n):
        count = 0
        for j in range(n):
            if j == i:
                continue
            acc = 0.0
            for f in range(x.shape[1]):
                diff = x[j, f] - x[i, f]
                acc += diff * diff
            count = _insert_nearest(best_d, best_i, count, k, acc, j)
        s = 0.0
        for r in range(k):
            s += y[best_i[r]]
        out[i] = s / k
    return out


def _neighbour_mean(d2, targets, k):
    order = np.argsort(d2, kind="stable")[:k]
    s = 0.0
    for v in targets[order].tolist():
        s += v
    return s / k


def _knn_predict_np(train_x, train_y, row, k):
    diff = train_x - row
    d2 = np.einsum("ij,ij->i", diff, diff)
    return _neighbour_mean(d2, train_y, k)


def _knn_loo_np(x, y, k):
    n = x.shape[0]
    out = np.empty(n)
    keep = np.ones(n, dtype=bool)
    for i in range(n):
        keep[i] = False
        out[i] = _knn_predict_np(x[keep], y[keep], x[i], k)
        keep[i] = True
    return out


# ---------------------------------------------------------------------------
# dispatch
# ---------------------------------------------------------------------------

if USE_NUMBA:
    compensated_sum = _compensated_sum_loop
    compensated_sum_sq_diff = _compensated_sum_sq_diff_loop
    sum_sq_diff = _sum_sq_diff_loop
    sum_sq_dev = _sum_sq_dev_loop
    loo_means = _loo_means_loop
    brute_loo_means = _brute_loo_means_loop
    knn_predict = _knn_predict_loop
    knn_loo = _knn_loo_loop
else:
    compensated_sum = _compensated_sum_np
    compensated_sum_sq_diff = _compensated_sum_sq_diff_np
    sum_sq_diff = _sum_sq_diff_np
    sum_sq_dev = _sum_sq_dev_np
    loo_means = _loo_means_np
    brute_loo_means = _brute_loo_means_np
    knn_predict = _knn_predict_np
    knn_loo = _knn_loo_np

# (loop, numpy) pairs, for parity tests and the benchmark
IMPLEMENTATIONS = {
    "compensated_sum": (_compensated_sum_loop, _compensated_sum_np),
    "compensated_sum_sq_diff": (_compensated_sum_sq_diff_loop, _compensated_sum_sq_diff_np),
    "sum_sq_diff": (_sum_sq_diff_loop, _sum_sq_diff_np),
    "sum_sq_dev": (_sum_sq_dev_loop, _sum_sq_dev_np),
    "loo_means": (_loo_means_loop, _loo_means_np),
    "brute_loo_means": (_brute_loo_means_loop, _brute_loo_means_np),
    "knn_predict": (_knn_predict_loop, _knn_predict_np),
    "knn_loo": (_knn_loo_loop, _knn_loo_np),
}
