"""Generalized scalars as nets sampled on a grid.

A :class:`GenScalar` is one representative of a class in the ring of
generalized numbers, sampled at the grid points. Ring operations act
sample by sample. Equality of classes is never decided here: compare by
classifying a difference with :func:`gna.asymptotics.classify`.
"""

from __future__ import annotations

import numbers

import numpy as np

from .asymptotics import classify
from .config import DEFAULT_CONFIG
from .errors import (
    DomainError,
    NonInvertibleScalarError,
    PreconditionError,
    SplitFailureError,
    StructuralError,
)
from .grid import EpsGrid


def _frozen(a):
    a = np.array(a, copy=True)
    a.flags.writeable = False
    return a


def check_grids(*grids):
    g0 = grids[0]
    for g in grids[1:]:
        if g is not g0 and g != g0:
            raise StructuralError("operands live on different grids")
    return g0


class GenScalar:
    """A real or complex net ``(r_eps)`` sampled on ``grid``."""

    __slots__ = ("grid", "samples")
    __array_ufunc__ = None

    def __init__(self, grid: EpsGrid, samples):
        samples = np.asarray(samples)
        if samples.dtype.kind in "biu":
            samples = samples.astype(float)
        elif samples.dtype.kind not in "fc":
            raise TypeError(f"unsupported sample dtype {samples.dtype}")
        if samples.shape != (len(grid),):
            raise StructuralError(
                f"expected {len(grid)} samples, got shape {samples.shape}"
            )
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "samples", _frozen(samples))

    def __setattr__(self, name, value):
        raise AttributeError("GenScalar is immutable")

    # constructors
    @classmethod
    def constant(cls, value, grid):
        dtype = complex if isinstance(value, complex) else float
        return cls(grid, np.full(len(grid), value, dtype=dtype))

    @classmethod
    def eps(cls, grid, power=1):
        return cls(grid, grid.eps**power)

    @property
    def scalar_kind(self) -> str:
        return "complex" if np.iscomplexobj(self.samples) else "real"

    @property
    def real(self):
        return GenScalar(self.grid, np.real(self.samples))

    @property
    def imag(self):
        return GenScalar(self.grid, np.imag(self.samples))

    def __len__(self):
        return len(self.samples)

    def __repr__(self):
        s = self.samples
        head = ", ".join(f"{x:.4g}" for x in s[:3])
        return f"GenScalar({self.scalar_kind}, [{head}, ... {s[-1]:.4g}], n={len(s)})"

    def _coerce(self, other):
        if isinstance(other, GenScalar):
            check_grids(self.grid, other.grid)
            return other.samples
        if isinstance(other, Idempotent):
            check_grids(self.grid, other.grid)
            return other.mask.astype(float)
        if isinstance(other, numbers.Number):
            return other
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else GenScalar(self.grid, self.samples + o)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else GenScalar(self.grid, self.samples - o)

    def __rsub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else GenScalar(self.grid, o - self.samples)

    def __mul__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else GenScalar(self.grid, self.samples * o)

    __rmul__ = __mul__

    def __neg__(self):
        return GenScalar(self.grid, -self.samples)

    def __pos__(self):
        return self

    def __truediv__(self, other):
        if isinstance(other, numbers.Number):
            if other == 0:
                raise NonInvertibleScalarError("division by the constant 0")
            return GenScalar(self.grid, self.samples / other)
        if isinstance(other, (GenScalar, Idempotent)):
            return scalar_arith("div", self, other)
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, numbers.Number):
            return invert(self) * other
        return NotImplemented

    def __pow__(self, n):
        return scalar_arith("pow_int", self, n)

    def __abs__(self):
        return GenScalar(self.grid, np.abs(self.samples))

    def conj(self):
        return GenScalar(self.grid, np.conj(self.samples))

    def sqrt(self):
        return scalar_arith("sqrt", self)

    def identical(self, other) -> bool:
        """Sample-for-sample equality of representatives (not of classes)."""
        o = self._coerce(other)
        return bool(np.array_equal(self.samples, np.broadcast_to(o, self.samples.shape)))

    def classify(self, cfg=DEFAULT_CONFIG, **kw):
        return classify(self, cfg, **kw)


class Idempotent:
    """The class e_S of the indicator of S, restricted to the sampled indices."""

    __slots__ = ("grid", "mask")
    __array_ufunc__ = None

    def __init__(self, grid: EpsGrid, mask):
        mask = np.asarray(mask)
        if mask.shape != (len(grid),):
            raise StructuralError(f"mask must have {len(grid)} entries")
        if mask.dtype != bool:
            if not np.all((mask == 0) | (mask == 1)):
                raise StructuralError("idempotent mask must be 0/1 valued")
            mask = mask.astype(bool)
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "mask", _frozen(mask))

    def __setattr__(self, name, value):
        raise AttributeError("Idempotent is immutable")

    @classmethod
    def from_predicate(cls, grid, pred):
        """``pred`` maps the array of grid indices k to a boolean array."""
        return cls(grid, np.asarray(pred(grid.ks), dtype=bool))

    @classmethod
    def even(cls, grid):
        return cls(grid, grid.ks % 2 == 0)

    @classmethod
    def odd(cls, grid):
        return cls(grid, grid.ks % 2 == 1)

    def complement(self):
        return Idempotent(self.grid, ~self.mask)

    def as_scalar(self):
        return GenScalar(self.grid, self.mask.astype(float))

    def __mul__(self, other):
        if isinstance(other, Idempotent):
            check_grids(self.grid, other.grid)
            return Idempotent(self.grid, self.mask & other.mask)
        return self.as_scalar() * other

    def __rmul__(self, other):
        return self.as_scalar() * other

    def __add__(self, other):
        return self.as_scalar() + other

    __radd__ = __add__

    def __sub__(self, other):
        return self.as_scalar() - other

    def __rsub__(self, other):
        return other - self.as_scalar()

    def __repr__(self):
        return f"Idempotent({''.join('1' if m else '0' for m in self.mask)})"


def as_scalar(x, grid=None) -> GenScalar:
    if isinstance(x, GenScalar):
        return x
    if isinstance(x, Idempotent):
        return x.as_scalar()
    if isinstance(x, numbers.Number):
        if grid is None:
            raise TypeError("a grid is needed to lift a number to a GenScalar")
        return GenScalar.constant(x, grid)
    raise TypeError(f"cannot interpret {type(x).__name__} as a generalized scalar")


_UNARY = {"neg", "conj", "abs", "sqrt"}
_BINARY = {"add", "sub", "mul", "div"}


def scalar_arith(op, a, b=None, cfg=DEFAULT_CONFIG) -> GenScalar:
    """Apply a ring operation sample by sample.

    ``div`` and negative powers require a strictly nonzero divisor; ``sqrt``
    of a real net requires every sample to be nonnegative.
    """
    a = as_scalar(a, getattr(b, "grid", None))
    if op in _UNARY:
        if b is not None:
            raise TypeError(f"{op} takes one operand")
        if op == "neg":
            return -a
        if op == "conj":
            return a.conj()
        if op == "abs":
            return abs(a)
        if a.scalar_kind == "real":
            bad = np.flatnonzero(a.samples < 0)
            if len(bad):
                raise DomainError(
                    f"sqrt of a negative sample at grid index k={a.grid.ks[bad[0]]}"
                )
        return GenScalar(a.grid, np.sqrt(a.samples))
    if op == "pow_int":
        if isinstance(b, bool) or not isinstance(b, numbers.Integral):
            raise TypeError("pow_int needs an integer exponent")
        if b < 0:
            return GenScalar(a.grid, invert(a, cfg).samples ** (-b))
        return GenScalar(a.grid, a.samples ** int(b))
    if op not in _BINARY:
        raise ValueError(f"unknown operation {op!r}")
    b = as_scalar(b, a.grid)
    check_grids(a.grid, b.grid)
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    return a * invert(b, cfg)


def invert(a, cfg=DEFAULT_CONFIG) -> GenScalar:
    """Multiplicative inverse of a strictly nonzero scalar.

    Samples outside the tail that happen to be exactly zero are mapped to 0;
    a representative may be changed freely away from eps -> 0.
    """
    a = as_scalar(a)
    rep = classify(a, cfg)
    if not rep.is_strictly_nonzero:
        raise NonInvertibleScalarError(
            f"scalar is not strictly nonzero ({rep.classification.value})", rep
        )
    s = a.samples
    out = np.zeros_like(s, dtype=np.result_type(s, float))
    np.divide(1.0, s, out=out, where=s != 0)
    return GenScalar(a.grid, out)


def zero_divisor_split(a, b, cfg=DEFAULT_CONFIG) -> Idempotent:
    """Given a*b negligible, find S with a*e_S and b*e_{S^c} negligible.

    Index k is put into S iff |a(eps_k)| <= |b(eps_k)|; the result is
    verified, and :class:`SplitFailureError` is raised if the check fails.
    """
    a, b = as_scalar(a), as_scalar(b)
    check_grids(a.grid, b.grid)
    prod = classify(a * b, cfg)
    if not prod.is_negligible:
        raise PreconditionError(
            f"product is not negligible ({prod.classification.value})", prod
        )
    S = Idempotent(a.grid, np.abs(a.samples) <= np.abs(b.samples))
    ra = classify(a * S.as_scalar(), cfg)
    rb = classify(b * S.complement().as_scalar(), cfg)
    if not (ra.is_negligible and rb.is_negligible):
        raise SplitFailureError(
            "magnitude split does not annihilate both factors",
            {"a_eS": ra, "b_eSc": rb},
        )
    return S


def check_partition(partition, grid=None):
    if not partition:
        raise StructuralError("empty partition")
    grid = check_grids(*(p.grid for p in partition))
    masks = np.array([p.mask for p in partition], dtype=int)
    if not np.all(masks.sum(axis=0) == 1):
        raise StructuralError("masks do not partition the grid")
    return grid


def interleave(values, partition) -> GenScalar:
    """Sum of ``values[i] * e_{S_i}`` over a partition ``S_1, ..., S_N``."""
    if len(values) != len(partition):
        raise StructuralError("need one value per partition block")
    grid = check_partition(partition)
    vals = [as_scalar(v, grid) for v in values]
    check_grids(grid, *(v.grid for v in vals))
    dtype = np.result_type(*(v.samples for v in vals))
    out = np.zeros(len(grid), dtype=dtype)
    for v, p in zip(vals, partition):
        out = np.where(p.mask, v.samples, out)
    return GenScalar(grid, out)


def random_partition(grid, parts, rng) -> list:
    """Random partition of the grid indices into ``parts`` idempotents."""
    labels = rng.integers(0, parts, size=len(grid))
    return [Idempotent(grid, labels == i) for i in range(parts)]
