"""Pure-Python (numpy) versions of the hot kernels.

These mirror ``_kernels.pyx`` operation for operation so that both backends
pick identical splits; the compiled module is preferred when it imports.
"""
import numpy as np

__all__ = ["fft_rows", "best_split", "twiddles", "bit_reverse_permutation"]


def bit_reverse_permutation(n):
    bits = n.bit_length() - 1
    idx = np.arange(n)
    rev = np.zeros(n, dtype=np.intp)
    for b in range(bits):
        rev |= ((idx >> b) & 1) << (bits - 1 - b)
    return rev


def twiddles(n):
    """exp(-2*pi*i*k/n) for k < n/2, shared by both backends."""
    return np.exp(-2j * np.pi * np.arange(n // 2) / n)


def fft_rows(a):
    """Iterative radix-2 DIT transform of every row of a 2-D complex array.

    Row length must be a power of two. Returns a new array.
    """
    a = np.asarray(a, dtype=np.complex128)
    m, n = a.shape
    if n & (n - 1):
        raise ValueError(f"row length {n} is not a power of two")
    if n <= 1:
        return a.copy()
    table = twiddles(n)
    out = a[:, bit_reverse_permutation(n)]
    size = 2
    while size <= n:
        half = size // 2
        tw = table[:: n // size][:half]
        blocks = out.reshape(m, n // size, size)
        even = blocks[:, :, :half]
        odd = blocks[:, :, half:] * tw
        out = np.concatenate((even + odd, even - odd), axis=2).reshape(m, n)
        size *= 2
    return out


def best_split(X, y, idx, features, n_classes, min_leaf):
    """Best Gini split of the rows ``idx`` over candidate ``features``.

    Returns ``(feature, threshold, weighted_gini)``; ``feature == -1`` when no
    threshold leaves at least ``min_leaf`` samples on both sides.
    """
    n = len(idx)
    best_f, best_t, best_score = -1, 0.0, np.inf
    if n < 2:
        return best_f, best_t, best_score
    yn = y[idx]
    total = np.bincount(yn, minlength=n_classes).astype(np.float64)
    nl = np.arange(1, n, dtype=np.float64)
    nr = n - nl
    size_ok = (nl >= min_leaf) & (nr >= min_leaf)
    for f in features:
        v = X[idx, f]
        order = np.argsort(v, kind="stable")
        vs = v[order]
        onehot = np.zeros((n, n_classes))
        onehot[np.arange(n), yn[order]] = 1.0
        cl = np.cumsum(onehot, axis=0)[:-1]
        cr = total - cl
        valid = size_ok & (vs[:-1] < vs[1:])
        if not valid.any():
            continue
        sl = (cl * cl).sum(axis=1)
        sr = (cr * cr).sum(axis=1)
        score = (nl - sl / nl) + (nr - sr / nr)
        score[~valid] = np.inf
        j = int(np.argmin(score))
        if score[j] < best_score:
            best_score = score[j]
            best_f = int(f)
            lo, hi = vs[j], vs[j + 1]
            t = (lo + hi) / 2.0
            best_t = lo if t == hi else t
    return best_f, float(best_t), float(best_score / n)
