"""Pure-Python (numpy) batched LU with partial pivoting.

Same algorithm and pivot rule as the compiled ``gna._lu`` module, vectorized
across the sample axis instead of looping over it.
"""

import numpy as np


def _factor(a):
    """In-place LU of a stack (K, n, n). Returns (perm, sign, singular)."""
    K, n, _ = a.shape
    rows = np.arange(K)
    perm = np.tile(np.arange(n), (K, 1))
    sign = np.ones(K)
    singular = np.zeros(K, dtype=bool)
    for c in range(n):
        mag = np.abs(a[:, c:, c])
        p = c + np.argmax(mag, axis=1)
        best = mag[rows, p - c]
        zero = best == 0
        singular |= zero
        swap = (p != c) & ~zero
        if np.any(swap):
            idx = rows[swap]
            pc = p[swap]
            tmp = a[idx, c, :].copy()
            a[idx, c, :] = a[idx, pc, :]
            a[idx, pc, :] = tmp
            tp = perm[idx, c].copy()
            perm[idx, c] = perm[idx, pc]
            perm[idx, pc] = tp
            sign[swap] = -sign[swap]
        piv = np.where(zero, 1, a[:, c, c])
        f = a[:, c + 1:, c] / piv[:, None]
        f[zero] = 0
        a[:, c + 1:, c] = np.where(zero[:, None], a[:, c + 1:, c], f)
        a[:, c + 1:, c + 1:] -= f[:, :, None] * a[:, c, None, c + 1:]
    return perm, sign, singular


def batched_det(a):
    a = np.array(a, copy=True)
    if a.dtype.kind not in "fc":
        a = a.astype(float)
    _, sign, singular = _factor(a)
    d = sign * np.prod(np.diagonal(a, axis1=1, axis2=2), axis=1)
    d = np.where(singular, 0, d).astype(a.dtype)
    return d, singular


def batched_solve(a, b):
    a = np.array(a, copy=True)
    dtype = np.result_type(a, b, float)
    a = a.astype(dtype)
    b = np.asarray(b, dtype=dtype)
    K, n, _ = a.shape
    perm, _, singular = _factor(a)
    rows = np.arange(K)[:, None]
    x = b[rows, perm, :].copy()
    for i in range(n):
        if i:
            x[:, i, :] -= np.einsum("kj,kjc->kc", a[:, i, :i], x[:, :i, :])
    for i in range(n - 1, -1, -1):
        if i < n - 1:
            x[:, i, :] -= np.einsum("kj,kjc->kc", a[:, i, i + 1:], x[:, i + 1:, :])
        d = np.where(singular, 1, a[:, i, i])
        x[:, i, :] /= d[:, None]
    x[singular] = 0
    return x, singular
