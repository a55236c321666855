# cython: language_level=3
"""Compiled hot kernels: radix-2 FFT over rows and Gini split search."""
import numpy as np
cimport numpy as cnp
from libc.math cimport INFINITY

cnp.import_array()

from har_ensemble._kernels_py import bit_reverse_permutation, twiddles


def fft_rows(a):
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] src = np.ascontiguousarray(a, dtype=np.complex128)
    cdef Py_ssize_t m = src.shape[0], n = src.shape[1]
    if n & (n - 1):
        raise ValueError(f"row length {n} is not a power of two")
    if n <= 1:
        return src.copy()
    cdef double complex[:, ::1] out = np.ascontiguousarray(src[:, bit_reverse_permutation(n)])
    cdef double complex[::1] table = twiddles(n)
    cdef Py_ssize_t r, size, half, step, start, j
    cdef double complex u, t
    with nogil:
        for r in range(m):
            size = 2
            while size <= n:
                half = size // 2
                step = n // size
                start = 0
                while start < n:
                    for j in range(half):
                        u = out[r, start + j]
                        t = out[r, start + j + half] * table[j * step]
                        out[r, start + j] = u + t
                        out[r, start + j + half] = u - t
                    start += size
                size *= 2
    return np.asarray(out)


def best_split(double[:, ::1] X, cnp.intp_t[::1] y, cnp.intp_t[::1] idx,
               cnp.intp_t[::1] features, Py_ssize_t n_classes, Py_ssize_t min_leaf):
    cdef Py_ssize_t n = idx.shape[0]
    cdef Py_ssize_t best_f = -1
    cdef double best_t = 0.0, best_score = INFINITY
    if n < 2:
        return best_f, best_t, best_score
    cdef double[::1] vals = np.empty(n)
    cdef double[::1] left = np.zeros(n_classes)
    cdef double[::1] total = np.zeros(n_classes)
    cdef cnp.intp_t[::1] order
    cdef Py_ssize_t i, fi, f, c, k
    cdef double sl, sr, sq_total = 0.0, nl, nr, score, lo, hi, t
    for i in range(n):
        total[y[idx[i]]] += 1.0
    for k in range(n_classes):
        sq_total += total[k] * total[k]
    for fi in range(features.shape[0]):
        f = features[fi]
        for i in range(n):
            vals[i] = X[idx[i], f]
        order = np.argsort(vals, kind="stable")
        for k in range(n_classes):
            left[k] = 0.0
        sl = 0.0
        sr = sq_total
        for i in range(n - 1):
            c = y[idx[order[i]]]
            sl += 2.0 * left[c] + 1.0
            left[c] += 1.0
            sr -= 2.0 * (total[c] - left[c]) + 1.0
            nl = <double>(i + 1)
            nr = <double>(n - i - 1)
            if nl < min_leaf:
                continue
            if nr < min_leaf:
                break
            lo = vals[order[i]]
            hi = vals[order[i + 1]]
            if not lo < hi:
                continue
            score = (nl - sl / nl) + (nr - sr / nr)
            if score < best_score:
                best_score = score
                best_f = f
                t = (lo + hi) / 2.0
                best_t = lo if t == hi else t
    return best_f, best_t, best_score / n
