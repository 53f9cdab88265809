"""Backend selection for the batched LU kernels.

The compiled extension is used when it was built; otherwise (or when
``GNA_PURE_PYTHON=1`` is set) the numpy implementation is used.
"""

import os

import numpy as np

from . import _lu_py

BACKEND = "python"
_impl = _lu_py

if os.environ.get("GNA_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _lu as _impl  # noqa: F811

        BACKEND = "cython"
    except ImportError:
        _impl = _lu_py


def _prepare(a):
    a = np.asarray(a)
    if a.dtype.kind == "c":
        return np.ascontiguousarray(a, dtype=np.complex128)
    return np.ascontiguousarray(a, dtype=np.float64)


def batched_det(a, impl=None):
    """Per-sample determinants of a (K, n, n) stack; returns (det, singular)."""
    a = _prepare(a)
    if a.shape[1] == 0:
        return np.ones(a.shape[0], dtype=a.dtype), np.zeros(a.shape[0], dtype=bool)
    return (impl or _impl).batched_det(a)


def batched_solve(a, b, impl=None):
    """Per-sample solve of A X = B with B of shape (K, n, r)."""
    a = _prepare(a)
    b = np.asarray(b)
    if a.dtype.kind == "c" or b.dtype.kind == "c":
        a = a.astype(np.complex128)
        b = np.ascontiguousarray(b, dtype=np.complex128)
    else:
        b = np.ascontiguousarray(b, dtype=np.float64)
    return (impl or _impl).batched_solve(a, b)


def backends():
    """All importable implementations, keyed by name."""
    out = {"python": _lu_py}
    try:
        from . import _lu

        out["cython"] = _lu
    except ImportError:
        pass
    return out
