"""Eigenvalues over generalized numbers.

Distinguished eigentuples exist for Hermitian and real skew-symmetric
matrices: sort each sample's classical spectrum and read the sorted lists as
nets. Per-sample eigenvectors get a deterministic phase (largest-magnitude
entry real positive).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .asymptotics import Classification, all_negligible, classify
from .config import DEFAULT_CONFIG
from .errors import (
    PostconditionError,
    PreconditionError,
    SingularMatrixError,
    StructuralError,
    SymmetryError,
    UnsupportedError,
)
from .linalg import (
    GenMatrix,
    GenVector,
    det,
    det_scale,
    fix_phase,
    kernel_free_vector,
    normwise_scale,
    realify_kernel_vector,
)
from .scalar import GenScalar, as_scalar, check_grids
from .symplectic import SymplecticForm, _norm_scale, standard_j, symplectomorphism_to_standard


class EigenKind(str, enum.Enum):
    HERMITIAN_REAL = "hermitian_real"
    SKEW_IMAGINARY = "skew_imaginary"


@dataclass(frozen=True)
class EigenTuple:
    values: tuple
    kind: EigenKind

    def __len__(self):
        return len(self.values)

    def __iter__(self):
        return iter(self.values)

    def __getitem__(self, j):
        return self.values[j]

    def samples(self) -> np.ndarray:
        """(K, n) array of the values."""
        return np.stack([v.samples for v in self.values], axis=1)


@dataclass(frozen=True)
class SkewNormalForm:
    V: GenMatrix
    lambdas: tuple
    zero_block_count: int
    reports: tuple
    warnings: tuple

    def block_matrix(self) -> GenMatrix:
        """diag(B_1, ..., B_k, 0, ..., 0) with B_j = [[0, -l_j], [l_j, 0]]."""
        grid = self.V.grid
        n = self.V.shape[0]
        out = np.zeros((len(grid), n, n))
        for j, lam in enumerate(self.lambdas):
            out[:, 2 * j + 1, 2 * j] = lam.samples
            out[:, 2 * j, 2 * j + 1] = -lam.samples
        return GenMatrix(grid, out)


def _square(a: GenMatrix):
    n, m = a.shape
    if n != m:
        raise StructuralError("square matrix required")
    return n


def _is_real(a: GenMatrix):
    return not np.iscomplexobj(a.data) or not np.any(a.data.imag != 0)


def hermitize(a: GenMatrix, cfg=DEFAULT_CONFIG) -> GenMatrix:
    """(A + A*)/2, after checking A - A* is negligible."""
    _square(a)
    A = a.data
    Ah = np.conj(np.swapaxes(A, 1, 2))
    ok, rep = all_negligible(A - Ah, a.grid, cfg, scale=_norm_scale(A))
    if not ok:
        raise SymmetryError("matrix is not Hermitian up to a negligible net", rep)
    H = 0.5 * (A + Ah)
    if _is_real(a):
        H = np.real(H)
    return GenMatrix(a.grid, H)


def skew_symmetrize(a: GenMatrix, cfg=DEFAULT_CONFIG) -> GenMatrix:
    """(A - A^t)/2 for a real A whose symmetric part is negligible."""
    _square(a)
    if not _is_real(a):
        raise SymmetryError("skew-symmetric matrices must be real")
    A = np.real(a.data)
    At = np.swapaxes(A, 1, 2)
    ok, rep = all_negligible(A + At, a.grid, cfg, scale=_norm_scale(A))
    if not ok:
        raise SymmetryError("matrix is not skew-symmetric up to a negligible net", rep)
    return GenMatrix(a.grid, 0.5 * (A - At))


# eigenvalue criterion


def eigenvalue_report(a: GenMatrix, lam, cfg=DEFAULT_CONFIG):
    """Classification of det(A - lam I) against its Hadamard scale."""
    _square(a)
    lam = as_scalar(lam, a.grid)
    check_grids(a.grid, lam.grid)
    b = a.shift(lam)
    return classify(det(b), cfg, scale=det_scale(b))


def is_eigenvalue(a: GenMatrix, lam, cfg=DEFAULT_CONFIG) -> bool:
    return eigenvalue_report(a, lam, cfg).is_negligible


def eigenpair_from_root(a: GenMatrix, lam, cfg=DEFAULT_CONFIG, *, realify=False) -> GenVector:
    """Unit vector x with A x - lam x negligible.

    With ``realify=True`` (real A and real lam) the kernel vector is made
    real and renormalized.
    """
    lam = as_scalar(lam, a.grid)
    rep = eigenvalue_report(a, lam, cfg)
    if not rep.is_negligible:
        raise PreconditionError(
            f"not an eigenvalue: det(A - lam I) is {rep.classification.value}", rep
        )
    b = a.shift(lam)
    x = kernel_free_vector(b, cfg)
    if realify:
        if not _is_real(a) or np.any(np.imag(lam.samples) != 0):
            raise PreconditionError("realify needs a real matrix and a real eigenvalue")
        br = GenMatrix(a.grid, np.real(b.data))
        x = realify_kernel_vector(GenVector(a.grid, x.data.astype(complex)), br, cfg)
        x = GenVector(a.grid, x.data / np.linalg.norm(x.data, axis=1, keepdims=True))
    r = np.einsum("kij,kj->ki", b.data, x.data)
    scale = normwise_scale(b.data, x.data[:, :, None], np.zeros_like(r)[:, :, None])[:, :, 0]
    ok, bad = all_negligible(r, a.grid, cfg, scale=scale)
    if not ok:
        raise PostconditionError("eigenvector residual is not negligible", bad)
    return x


# distinguished tuples


def _sorted_eigh(H):
    w, U = np.linalg.eigh(H)
    order = np.argsort(-w, axis=1, kind="stable")
    w = np.take_along_axis(w, order, axis=1)
    U = np.take_along_axis(U, order[:, None, :], axis=2)
    U = np.swapaxes(fix_phase(np.swapaxes(U, 1, 2)), 1, 2)
    return w, U


def hermitian_eigentuple(a: GenMatrix, cfg=DEFAULT_CONFIG):
    """Descending eigenvalues and a unitary U with U* A U = diag(values)."""
    H = hermitize(a, cfg)
    w, U = _sorted_eigh(H.data)
    Uh = np.conj(np.swapaxes(U, 1, 2))
    D = Uh @ H.data @ U
    resid = D - np.einsum("kj,ij->kij", w, np.eye(w.shape[1]))
    scale = np.abs(Uh) @ np.abs(H.data) @ np.abs(U)
    ok, rep = all_negligible(resid, a.grid, cfg, scale=scale)
    if not ok:
        raise PostconditionError("U* A U is not diagonal", rep)
    n = w.shape[1]
    ok, rep = all_negligible(Uh @ U - np.eye(n), a.grid, cfg, scale=np.abs(Uh) @ np.abs(U) + np.eye(n))
    if not ok:
        raise PostconditionError("U is not unitary", rep)
    values = tuple(GenScalar(a.grid, w[:, j]) for j in range(n))
    return EigenTuple(values, EigenKind.HERMITIAN_REAL), GenMatrix(a.grid, U)


def _skew_lambdas(S):
    """Symmetrized descending spectrum of iS: l_j = (a_j - a_{n+1-j}) / 2."""
    alpha = np.linalg.eigvalsh(1j * S)[:, ::-1]
    return 0.5 * (alpha - alpha[:, ::-1])


def skew_eigentuple(a: GenMatrix, cfg=DEFAULT_CONFIG) -> EigenTuple:
    """Values i*l_1, ..., -i*l_1 ordered by imaginary part descending."""
    S = skew_symmetrize(a, cfg)
    lam = _skew_lambdas(S.data)
    values = tuple(GenScalar(a.grid, 1j * lam[:, j]) for j in range(lam.shape[1]))
    return EigenTuple(values, EigenKind.SKEW_IMAGINARY)


def _schur_blocks(S):
    """Orthogonal Z and descending l >= 0 with Z^t S Z = diag(B_1, .., B_p, 0), p = n // 2."""
    n = S.shape[0]
    T, Z = scipy.linalg.schur(S, output="real")
    pairs, singles = [], []
    i = 0
    while i < n:
        if i + 1 < n and T[i + 1, i] != 0.0:
            b, c = T[i, i + 1], T[i + 1, i]
            if c - b >= 0:
                pairs.append(((c - b) / 2, i, i + 1))
            else:
                pairs.append(((b - c) / 2, i + 1, i))
            i += 2
        else:
            singles.append(i)
            i += 1
    for j in range(0, len(singles) - 1, 2):
        pairs.append((0.0, singles[j], singles[j + 1]))
    pairs.sort(key=lambda p: -p[0])
    cols = [c for p in pairs for c in p[1:]]
    if len(singles) % 2:
        cols.append(singles[-1])
    return Z[:, cols], np.array([p[0] for p in pairs])


def skew_normal_form(a: GenMatrix, cfg=DEFAULT_CONFIG) -> SkewNormalForm:
    """Orthogonal V with V^t A V block diagonal, blocks [[0, -l], [l, 0]] then zeros.

    Trailing pairs whose l is negligible become zero 1x1 blocks. Pairs that
    are neither negligible nor strictly positive are kept and flagged.
    """
    S = skew_symmetrize(a, cfg)
    n = S.shape[0]
    Vs, ls = zip(*(_schur_blocks(S.data[k]) for k in range(len(a.grid))))
    V = np.stack(Vs)
    L = np.stack(ls) if n >= 2 else np.zeros((len(a.grid), 0))
    reports = [classify(L[:, j], cfg, grid=a.grid, scale=np.abs(S.data).sum(axis=(1, 2)), positivity=True)
               for j in range(L.shape[1])]
    k = len(reports)
    while k and reports[k - 1].is_negligible:
        k -= 1
    warnings = tuple(
        f"lambda_{j + 1} is {r.classification.value}"
        for j, r in enumerate(reports[:k]) if not r.is_strictly_nonzero
    )
    lambdas = tuple(GenScalar(a.grid, L[:, j]) for j in range(k))
    form = SkewNormalForm(GenMatrix(a.grid, V), lambdas, n - 2 * k, tuple(reports[:k]), warnings)

    Vt = np.swapaxes(V, 1, 2)
    ok, rep = all_negligible(Vt @ V - np.eye(n), a.grid, cfg, scale=np.abs(Vt) @ np.abs(V) + np.eye(n))
    if not ok:
        raise PostconditionError("V is not orthogonal", rep)
    resid = Vt @ S.data @ V - form.block_matrix().data
    ok, rep = all_negligible(resid, a.grid, cfg, scale=np.abs(Vt) @ np.abs(S.data) @ np.abs(V))
    if not ok:
        raise PostconditionError("V^t A V does not match the block form", rep)
    return form


def skew_to_standard_J(a: GenMatrix, cfg=DEFAULT_CONFIG) -> GenMatrix:
    """Invertible V with V^t A V = J for a non-degenerate skew A."""
    S = skew_symmetrize(a, cfg)
    rep = classify(det(S), cfg, scale=det_scale(S))
    if not rep.is_strictly_nonzero:
        theta = skew_eigentuple(S, cfg)
        reports = [classify(t, cfg).to_dict() for t in theta]
        raise SingularMatrixError(
            f"skew matrix is degenerate: det is {rep.classification.value}",
            {"det": rep, "theta": reports},
        )
    V = symplectomorphism_to_standard(SymplecticForm.from_gram(S, cfg), cfg)
    Vt = np.swapaxes(V.data, 1, 2)
    J = standard_j(S.shape[0] // 2)
    ok, bad = all_negligible(Vt @ S.data @ V.data - J, a.grid, cfg,
                             scale=np.abs(Vt) @ np.abs(S.data) @ np.abs(V.data) + np.abs(J))
    if not ok:
        raise PostconditionError("V^t A V differs from J", bad)
    return V


PROBES_REAL = (0.0, 1.0, -1.0, 2.0)
PROBES_COMPLEX = (1j, -1j)


def factorization_check(a: GenMatrix, values, cfg=DEFAULT_CONFIG, probes=None):
    """Check det(A - z I) = prod_k (l_k - z) at probe points; returns (ok, reports)."""
    if probes is None:
        probes = PROBES_REAL + PROBES_COMPLEX
    vals = np.stack([as_scalar(v, a.grid).samples for v in values], axis=1)
    reports = {}
    ok = True
    for z in probes:
        b = a.shift(z)
        d = det(b).samples
        prod = np.prod(vals - z, axis=1)
        rep = classify(d - prod, cfg, grid=a.grid, scale=det_scale(b) + np.abs(prod))
        reports[str(z)] = rep
        ok = ok and rep.is_negligible
    return ok, reports


def char_poly_roots_distinguished(a: GenMatrix, kind="hermitian", cfg=DEFAULT_CONFIG) -> EigenTuple:
    """Distinguished roots of the characteristic polynomial for symmetric kinds."""
    if kind in ("hermitian", EigenKind.HERMITIAN_REAL):
        rep_a = hermitize(a, cfg)
        tup, _ = hermitian_eigentuple(rep_a, cfg)
    elif kind in ("skew", EigenKind.SKEW_IMAGINARY):
        rep_a = skew_symmetrize(a, cfg)
        tup = skew_eigentuple(rep_a, cfg)
    else:
        raise UnsupportedError(f"kind {kind!r} is not supported; use hermitian or skew")
    ok, reports = factorization_check(rep_a, tup.values, cfg)
    if not ok:
        bad = {z: r for z, r in reports.items() if not r.is_negligible}
        raise PostconditionError("characteristic polynomial does not factor over the tuple", bad)
    return tup


@dataclass(frozen=True)
class StabilityReport:
    ok: bool
    differences: tuple
    weyl_ok: bool
    max_difference: np.ndarray
    norm_difference: np.ndarray

    def __bool__(self):
        return self.ok


def representative_stability_check(a: GenMatrix, b: GenMatrix, cfg=DEFAULT_CONFIG, kind="hermitian"):
    """Compare the eigentuples of two representatives and test the Weyl bound.

    ``differences`` holds one report per index; the Weyl bound
    max_k |l_k - b_k| <= ||A - B||_2 is checked per sample with roundoff slack.
    """
    check_grids(a.grid, b.grid)
    if a.shape != b.shape:
        raise StructuralError("matrices have different shapes")
    if kind == "hermitian":
        ta, _ = hermitian_eigentuple(a, cfg)
        tb, _ = hermitian_eigentuple(b, cfg)
        A, B = hermitize(a, cfg).data, hermitize(b, cfg).data
    elif kind == "skew":
        ta, tb = skew_eigentuple(a, cfg), skew_eigentuple(b, cfg)
        A, B = skew_symmetrize(a, cfg).data, skew_symmetrize(b, cfg).data
    else:
        raise UnsupportedError(f"kind {kind!r} is not supported; use hermitian or skew")
    sa, sb = ta.samples(), tb.samples()
    scale = np.abs(sa) + np.abs(sb)
    diffs = tuple(classify(sa[:, j] - sb[:, j], cfg, grid=a.grid, scale=scale[:, j])
                  for j in range(sa.shape[1]))
    maxdiff = np.max(np.abs(sa - sb), axis=1) if sa.shape[1] else np.zeros(len(a.grid))
    normdiff = np.linalg.norm(A - B, ord=2, axis=(1, 2))
    n = A.shape[1]
    slack = 64 * n * np.finfo(float).eps * (np.linalg.norm(A, ord=2, axis=(1, 2)) +
                                            np.linalg.norm(B, ord=2, axis=(1, 2)))
    weyl = bool(np.all(maxdiff <= normdiff + slack))
    ok = all(d.is_negligible for d in diffs)
    return StabilityReport(ok, diffs, weyl, maxdiff, normdiff)


def classical_eigenvalues(a: GenMatrix) -> tuple:
    """Per-sample eigenvalues of a general matrix, sorted by (real, imag) descending.

    These nets need not be representative independent; they serve as probe
    values for the determinant criterion.
    """
    _square(a)
    w = np.linalg.eigvals(a.data)
    keys = np.lexsort((-w.imag, -w.real), axis=-1) if w.ndim == 1 else \
        np.stack([np.lexsort((-r.imag, -r.real)) for r in w])
    w = np.take_along_axis(w, keys, axis=1)
    if np.all(w.imag == 0):
        w = w.real
    return tuple(GenScalar(a.grid, w[:, j]) for j in range(w.shape[1]))


__all__ = [
    "Classification", "EigenKind", "EigenTuple", "SkewNormalForm", "StabilityReport",
    "hermitize", "skew_symmetrize", "eigenvalue_report", "is_eigenvalue", "eigenpair_from_root",
    "hermitian_eigentuple", "skew_eigentuple", "skew_normal_form", "skew_to_standard_J",
    "factorization_check", "char_poly_roots_distinguished", "representative_stability_check",
    "classical_eigenvalues",
]
