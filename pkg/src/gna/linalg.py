"""Vectors and matrices over generalized scalars.

Entries are stored as stacked sample arrays: a matrix with n rows and m
columns on a grid of K points is a ``(K, n, m)`` array, so every classical
operation runs once per sample. Indexing returns :class:`GenScalar` entries.
"""

from __future__ import annotations

import numbers
from typing import NamedTuple

import numpy as np

from . import kernels
from .asymptotics import AsymptoticReport, all_negligible, classify
from .config import DEFAULT_CONFIG
from .errors import PostconditionError, PreconditionError, SingularMatrixError, StructuralError
from .scalar import GenScalar, Idempotent, as_scalar, check_grids


def _frozen(a):
    a = np.array(a, copy=True)
    if a.dtype.kind in "biu":
        a = a.astype(float)
    a.flags.writeable = False
    return a


def _samples_of(x, grid):
    """Broadcastable per-sample values of a scalar-like operand."""
    if isinstance(x, (GenScalar, Idempotent)):
        check_grids(grid, x.grid)
        return as_scalar(x).samples
    if isinstance(x, numbers.Number):
        return np.asarray(x)
    raise TypeError(f"not a scalar: {type(x).__name__}")


class GenVector:
    """Column vector with generalized entries; ``data`` has shape (K, n)."""

    __slots__ = ("grid", "data")
    __array_ufunc__ = None

    def __init__(self, grid, data):
        data = _frozen(data)
        if data.ndim != 2 or data.shape[0] != len(grid):
            raise StructuralError(f"vector data must have shape ({len(grid)}, n)")
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "data", data)

    def __setattr__(self, name, value):
        raise AttributeError("GenVector is immutable")

    @classmethod
    def from_entries(cls, entries, grid=None):
        entries = list(entries)
        if grid is None:
            grid = next(e.grid for e in entries if hasattr(e, "grid"))
        cols = [as_scalar(e, grid) for e in entries]
        check_grids(grid, *(c.grid for c in cols))
        if not cols:
            return cls(grid, np.zeros((len(grid), 0)))
        return cls(grid, np.stack([c.samples for c in cols], axis=1))

    @classmethod
    def constant(cls, values, grid):
        values = np.asarray(values)
        return cls(grid, np.broadcast_to(values, (len(grid),) + values.shape))

    @classmethod
    def unit(cls, j, n, grid):
        v = np.zeros(n)
        v[j] = 1.0
        return cls.constant(v, grid)

    def __len__(self):
        return self.data.shape[1]

    def __getitem__(self, j):
        return GenScalar(self.grid, self.data[:, j])

    def __iter__(self):
        return (self[j] for j in range(len(self)))

    def __repr__(self):
        return f"GenVector(n={len(self)}, K={len(self.grid)}, dtype={self.data.dtype})"

    @property
    def scalar_kind(self):
        return "complex" if np.iscomplexobj(self.data) else "real"

    @property
    def real(self):
        return GenVector(self.grid, np.real(self.data))

    @property
    def imag(self):
        return GenVector(self.grid, np.imag(self.data))

    def conj(self):
        return GenVector(self.grid, np.conj(self.data))

    def _other(self, other):
        if not isinstance(other, GenVector):
            return NotImplemented
        check_grids(self.grid, other.grid)
        if len(other) != len(self):
            raise StructuralError("vector length mismatch")
        return other.data

    def __add__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else GenVector(self.grid, self.data + o)

    def __sub__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else GenVector(self.grid, self.data - o)

    def __neg__(self):
        return GenVector(self.grid, -self.data)

    def __mul__(self, s):
        try:
            s = _samples_of(s, self.grid)
        except TypeError:
            return NotImplemented
        return GenVector(self.grid, self.data * (s[:, None] if s.ndim else s))

    __rmul__ = __mul__

    def as_column(self) -> "GenMatrix":
        return GenMatrix(self.grid, self.data[:, :, None])


class GenMatrix:
    """Matrix with generalized entries; ``data`` has shape (K, n, m)."""

    __slots__ = ("grid", "data")
    __array_ufunc__ = None

    def __init__(self, grid, data):
        data = _frozen(data)
        if data.ndim != 3 or data.shape[0] != len(grid):
            raise StructuralError(f"matrix data must have shape ({len(grid)}, n, m)")
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "data", data)

    def __setattr__(self, name, value):
        raise AttributeError("GenMatrix is immutable")

    @classmethod
    def from_entries(cls, rows, grid=None):
        rows = [list(r) for r in rows]
        if not rows or len({len(r) for r in rows}) != 1:
            raise StructuralError("matrix entries must form a non-empty rectangle")
        if grid is None:
            grid = next(e.grid for r in rows for e in r if hasattr(e, "grid"))
        cells = [[as_scalar(e, grid) for e in r] for r in rows]
        check_grids(grid, *(c.grid for r in cells for c in r))
        data = np.stack([np.stack([c.samples for c in r], axis=1) for r in cells], axis=1)
        return cls(grid, data)

    @classmethod
    def constant(cls, values, grid):
        values = np.asarray(values)
        if values.ndim != 2:
            raise StructuralError("constant matrix must be 2-D")
        return cls(grid, np.broadcast_to(values, (len(grid),) + values.shape))

    @classmethod
    def identity(cls, n, grid):
        return cls.constant(np.eye(n), grid)

    @classmethod
    def zeros(cls, n, m, grid):
        return cls.constant(np.zeros((n, m)), grid)

    @classmethod
    def diag(cls, values, grid=None):
        values = list(values)
        if grid is None:
            grid = next(v.grid for v in values if hasattr(v, "grid"))
        s = [as_scalar(v, grid).samples for v in values]
        n = len(s)
        data = np.zeros((len(grid), n, n), dtype=np.result_type(*s))
        for i, col in enumerate(s):
            data[:, i, i] = col
        return cls(grid, data)

    @classmethod
    def from_columns(cls, vectors, grid=None):
        vectors = list(vectors)
        if not vectors:
            raise StructuralError("need at least one column")
        grid = grid or vectors[0].grid
        check_grids(grid, *(v.grid for v in vectors))
        return cls(grid, np.stack([v.data for v in vectors], axis=2))

    @property
    def shape(self):
        return self.data.shape[1:]

    @property
    def scalar_kind(self):
        return "complex" if np.iscomplexobj(self.data) else "real"

    def __repr__(self):
        n, m = self.shape
        return f"GenMatrix({n}x{m}, K={len(self.grid)}, dtype={self.data.dtype})"

    def __getitem__(self, ij):
        i, j = ij
        return GenScalar(self.grid, self.data[:, i, j])

    def column(self, j) -> GenVector:
        return GenVector(self.grid, self.data[:, :, j])

    def columns(self):
        return [self.column(j) for j in range(self.shape[1])]

    def row(self, i) -> GenVector:
        return GenVector(self.grid, self.data[:, i, :])

    def sample(self, idx) -> np.ndarray:
        return np.array(self.data[idx])

    @property
    def T(self):
        return GenMatrix(self.grid, np.swapaxes(self.data, 1, 2))

    @property
    def H(self):
        return GenMatrix(self.grid, np.conj(np.swapaxes(self.data, 1, 2)))

    @property
    def real(self):
        return GenMatrix(self.grid, np.real(self.data))

    @property
    def imag(self):
        return GenMatrix(self.grid, np.imag(self.data))

    def conj(self):
        return GenMatrix(self.grid, np.conj(self.data))

    def _other(self, other):
        if not isinstance(other, GenMatrix):
            return NotImplemented
        check_grids(self.grid, other.grid)
        if other.shape != self.shape:
            raise StructuralError(f"shape mismatch {self.shape} vs {other.shape}")
        return other.data

    def __add__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else GenMatrix(self.grid, self.data + o)

    def __sub__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else GenMatrix(self.grid, self.data - o)

    def __neg__(self):
        return GenMatrix(self.grid, -self.data)

    def __mul__(self, s):
        try:
            s = _samples_of(s, self.grid)
        except TypeError:
            return NotImplemented
        return GenMatrix(self.grid, self.data * (s[:, None, None] if s.ndim else s))

    __rmul__ = __mul__

    def __matmul__(self, other):
        if isinstance(other, GenMatrix):
            return matmul(self, other)
        if isinstance(other, GenVector):
            return matvec(self, other)
        return NotImplemented

    def shift(self, lam) -> "GenMatrix":
        """``A - lam * I``."""
        n, m = self.shape
        if n != m:
            raise StructuralError("shift needs a square matrix")
        s = _samples_of(lam, self.grid)
        s = s[:, None, None] if s.ndim else s
        return GenMatrix(self.grid, self.data - s * np.eye(n))


# products


def matmul(a: GenMatrix, b: GenMatrix) -> GenMatrix:
    check_grids(a.grid, b.grid)
    if a.shape[1] != b.shape[0]:
        raise StructuralError(f"cannot multiply {a.shape} by {b.shape}")
    return GenMatrix(a.grid, a.data @ b.data)


def matvec(a: GenMatrix, v: GenVector) -> GenVector:
    check_grids(a.grid, v.grid)
    if a.shape[1] != len(v):
        raise StructuralError(f"cannot apply {a.shape} matrix to length {len(v)}")
    return GenVector(a.grid, np.einsum("kij,kj->ki", a.data, v.data))


def transpose(a: GenMatrix) -> GenMatrix:
    return a.T


def conj_transpose(a: GenMatrix) -> GenMatrix:
    return a.H


def inner(v: GenVector, w: GenVector) -> GenScalar:
    """Standard euclidean/unitary inner product, linear in the first slot."""
    check_grids(v.grid, w.grid)
    if len(v) != len(w):
        raise StructuralError("vector length mismatch")
    return GenScalar(v.grid, np.sum(v.data * np.conj(w.data), axis=1))


def norm_sq(v: GenVector) -> GenScalar:
    return GenScalar(v.grid, np.sum(np.abs(v.data) ** 2, axis=1))


def _row_norm_product(data):
    return np.prod(np.linalg.norm(data, axis=2), axis=1)


def abs_product_scale(a, b):
    """Entrywise |a| @ |b|: a roundoff scale for the product a @ b."""
    return np.abs(a) @ np.abs(b)


def normwise_scale(a, x, rhs):
    """Per-sample ||a||_inf ||x||_inf + ||rhs||_inf, broadcast to rhs's shape.

    Pivoted LU is only normwise backward stable, so solve residuals are
    measured against this rather than the entrywise |a| |x|.
    """
    na = np.abs(a).sum(axis=2).max(axis=1)
    nx = np.abs(x).max(axis=(1, 2), initial=0.0)
    nb = np.abs(rhs).max(axis=(1, 2), initial=0.0)
    return np.broadcast_to((na * nx + nb)[:, None, None], rhs.shape)


# determinants and solving


class InvertibilityResult(NamedTuple):
    invertible: bool
    report: AsymptoticReport

    def __bool__(self):
        return self.invertible


def det(a: GenMatrix) -> GenScalar:
    """Per-sample determinant via LU with partial pivoting."""
    n, m = a.shape
    if n != m:
        raise StructuralError("determinant needs a square matrix")
    d, _ = kernels.batched_det(a.data)
    return GenScalar(a.grid, d)


def det_scale(a: GenMatrix) -> np.ndarray:
    """Hadamard bound prod_i ||row_i||, the natural magnitude of det(a)."""
    return _row_norm_product(a.data)


def classify_det(a: GenMatrix, cfg=DEFAULT_CONFIG):
    return classify(det(a), cfg, scale=det_scale(a))


def is_invertible(a: GenMatrix, cfg=DEFAULT_CONFIG) -> InvertibilityResult:
    """A matrix is invertible iff its determinant is strictly nonzero."""
    if a.shape[0] != a.shape[1]:
        raise StructuralError("invertibility needs a square matrix")
    rep = classify_det(a, cfg)
    return InvertibilityResult(rep.is_strictly_nonzero, rep)


def solve(a: GenMatrix, b, cfg=DEFAULT_CONFIG):
    """Solve ``a x = b`` sample by sample; ``b`` is a GenVector or GenMatrix."""
    check_grids(a.grid, b.grid)
    ok, rep = is_invertible(a, cfg)
    if not ok:
        raise SingularMatrixError(
            f"matrix is not invertible: det is {rep.classification.value}", rep
        )
    rhs = b.data[:, :, None] if isinstance(b, GenVector) else b.data
    if rhs.shape[1] != a.shape[0]:
        raise StructuralError("right-hand side has the wrong length")
    x, _ = kernels.batched_solve(a.data, rhs)
    resid = a.data @ x - rhs
    scale = normwise_scale(a.data, x, rhs)
    good, bad = all_negligible(resid, a.grid, cfg, scale=scale)
    if not good:
        raise PostconditionError("solve residual is not negligible", bad)
    if isinstance(b, GenVector):
        return GenVector(a.grid, x[:, :, 0])
    return GenMatrix(a.grid, x)


def inverse(a: GenMatrix, cfg=DEFAULT_CONFIG) -> GenMatrix:
    return solve(a, GenMatrix.identity(a.shape[0], a.grid), cfg)


# free vectors and bases


def is_free(v: GenVector, cfg=DEFAULT_CONFIG) -> bool:
    """A vector is free iff <v, v> is strictly positive."""
    return classify(norm_sq(v), cfg, positivity=True).is_strictly_positive


def gram(vectors) -> GenMatrix:
    """Gram matrix G_ij = <v_i, v_j> of a sequence of vectors."""
    vectors = list(vectors)
    V = np.stack([v.data for v in vectors], axis=2)  # (K, n, k)
    return GenMatrix(vectors[0].grid, np.swapaxes(V, 1, 2) @ np.conj(V))


def free_set_report(vectors, cfg=DEFAULT_CONFIG) -> AsymptoticReport:
    vectors = list(vectors)
    G = gram(vectors)
    scale = np.prod([norm_sq(v).samples for v in vectors], axis=0)
    d = det(G)
    return classify(GenScalar(G.grid, np.real(d.samples)), cfg, scale=scale, positivity=True)


def is_free_set(vectors, cfg=DEFAULT_CONFIG) -> bool:
    """Gram-determinant test; for a single vector this is exactly :func:`is_free`."""
    vectors = list(vectors)
    if not vectors:
        return True
    if len(vectors) == 1:
        return is_free(vectors[0], cfg)
    return free_set_report(vectors, cfg).is_strictly_positive


def fix_phase(vecs: np.ndarray) -> np.ndarray:
    """Rotate each vector (last axis) so its largest-magnitude entry is real positive."""
    vecs = np.array(vecs)
    idx = np.argmax(np.abs(vecs), axis=-1)
    lead = np.take_along_axis(vecs, idx[..., None], axis=-1)
    mag = np.abs(lead)
    phase = np.where(mag > 0, np.conj(lead) / np.where(mag > 0, mag, 1), 1)
    out = vecs * phase
    if np.iscomplexobj(out) and not np.iscomplexobj(vecs):
        out = out.real
    return out


def orthogonal_complement_vector(rows: np.ndarray) -> np.ndarray:
    """Unit vector orthogonal to every row of each (K, k, n) stack entry.

    The least-singular-value right singular direction, phase fixed.
    """
    K, k, n = rows.shape
    if k == 0:
        w = np.zeros((K, n), dtype=rows.dtype)
        w[:, 0] = 1
        return w
    _, _, vh = np.linalg.svd(np.conj(rows), full_matrices=True)
    w = np.conj(vh[:, -1, :])
    return fix_phase(w)


def extend_to_basis(vectors, cfg=DEFAULT_CONFIG, n=None, grid=None) -> list:
    """Extend a free set to a basis by adding per-sample orthogonal unit vectors.

    Returns the input vectors followed by the added ones.
    """
    vectors = list(vectors)
    if vectors:
        grid = check_grids(*(v.grid for v in vectors))
        n = len(vectors[0]) if n is None else n
    elif n is None or grid is None:
        raise PreconditionError("extending an empty set needs n and grid")
    if any(len(v) != n for v in vectors):
        raise StructuralError("vectors have different lengths")
    if len(vectors) > n:
        raise PreconditionError("more vectors than the rank of the module")
    if not is_free_set(vectors, cfg):
        raise PreconditionError(
            "vectors are not a free set (Gram determinant not strictly positive)",
            free_set_report(vectors, cfg) if len(vectors) > 1 else None,
        )
    if not vectors:
        return [GenVector.unit(j, n, grid) for j in range(n)]
    rows = np.stack([v.data for v in vectors], axis=1)
    out = list(vectors)
    while len(out) < n:
        w = orthogonal_complement_vector(rows)
        out.append(GenVector(grid, w))
        rows = np.concatenate([rows, w[:, None, :]], axis=1)
    M = GenMatrix.from_columns(out)
    ok, rep = is_invertible(M, cfg)
    if not ok:
        raise PostconditionError("extended set is not a basis", rep)
    return out


def kernel_free_vector(b: GenMatrix, cfg=DEFAULT_CONFIG) -> GenVector:
    """Unit vector v with b v negligible, for b with negligible determinant.

    Per sample: eigenvector of the eigenvalue of smallest modulus.
    """
    n, m = b.shape
    if n != m:
        raise StructuralError("kernel vector needs a square matrix")
    rep = classify_det(b, cfg)
    if not rep.is_negligible:
        raise PreconditionError(
            f"determinant is not negligible ({rep.classification.value})", rep
        )
    w, V = np.linalg.eig(b.data)
    idx = np.argmin(np.abs(w), axis=1)
    v = np.take_along_axis(V, idx[:, None, None], axis=2)[:, :, 0]
    v = v / np.linalg.norm(v, axis=1, keepdims=True)
    v = fix_phase(v)
    if np.iscomplexobj(v) and not np.iscomplexobj(b.data) and np.all(v.imag == 0):
        v = v.real
    resid = np.einsum("kij,kj->ki", b.data, v)
    scale = np.einsum("kij,kj->ki", np.abs(b.data), np.abs(v))
    good, bad = all_negligible(resid, b.grid, cfg, scale=scale)
    if not good:
        raise PostconditionError("kernel vector residual is not negligible", bad)
    return GenVector(b.grid, v)


def realify_kernel_vector(z: GenVector, a: GenMatrix, cfg=DEFAULT_CONFIG) -> GenVector:
    """Real kernel vector of a real matrix from a complex unit kernel vector.

    With z = x + iy, take x where ||x||^2 > 1/4 and y elsewhere; the result
    has squared norm >= 1/4 and is therefore free.
    """
    check_grids(z.grid, a.grid)
    if np.iscomplexobj(a.data) and np.any(a.data.imag != 0):
        raise PreconditionError("matrix must be real")
    A = np.real(a.data)
    nz = norm_sq(z)
    rep = classify(nz - 1.0, cfg, scale=np.ones(len(z.grid)))
    if not rep.is_negligible:
        raise PreconditionError("kernel vector must have norm 1", rep)
    az = np.einsum("kij,kj->ki", A, z.data)
    scale = np.einsum("kij,kj->ki", np.abs(A), np.abs(z.data))
    good, bad = all_negligible(az, z.grid, cfg, scale=scale)
    if not good:
        raise PreconditionError("vector is not in the kernel", bad)
    x, y = np.real(z.data), np.imag(z.data)
    use_x = np.sum(x**2, axis=1) > 0.25
    v = np.where(use_x[:, None], x, y)
    tail = z.grid.tail(cfg.tail_fraction)
    if np.any(np.sum(v[tail] ** 2, axis=1) < 0.25):
        raise PostconditionError("realified vector has squared norm below 1/4")
    av = np.einsum("kij,kj->ki", A, v)
    good, bad = all_negligible(av, z.grid, cfg, scale=np.einsum("kij,kj->ki", np.abs(A), np.abs(v)))
    if not good:
        raise PostconditionError("realified vector is not in the kernel", bad)
    return GenVector(z.grid, v)
