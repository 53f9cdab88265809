"""Symplectic forms on free modules of finite rank.

A form is stored as its Gramian ``G`` with respect to the working basis of
R~^m (the standard unit vectors), so ``sigma(v, w) = v^t G w``. Bases and
submodules are given by coordinate vectors in that basis.

Every public construction re-verifies its result with the classifier and
raises :class:`~gna.errors.PostconditionError` rather than returning an
unchecked answer.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .asymptotics import all_negligible, classify
from .config import DEFAULT_CONFIG
from .errors import (
    InvalidFormError,
    PostconditionError,
    PreconditionError,
    StructuralError,
)
from .linalg import (
    GenMatrix,
    GenVector,
    classify_det,
    det,
    extend_to_basis,
    free_set_report,
    is_free_set,
    normwise_scale,
    solve,
)
from .scalar import GenScalar, check_grids


def standard_j(n) -> np.ndarray:
    """The classical matrix [[0, -I_n], [I_n, 0]]."""
    eye = np.eye(n)
    z = np.zeros((n, n))
    return np.block([[z, -eye], [eye, z]])


def _norm_scale(data):
    """Per-sample Frobenius norm, the roundoff scale for symmetry checks."""
    return np.linalg.norm(data, axis=(1, 2))


def _skew_part(data):
    return 0.5 * (data - np.swapaxes(data, -1, -2))


@dataclass(frozen=True)
class SymplecticForm:
    """Non-degenerate skew-symmetric Gramian; build with :meth:`from_gram`."""

    gram: GenMatrix

    @classmethod
    def from_gram(cls, gram: GenMatrix, cfg=DEFAULT_CONFIG) -> "SymplecticForm":
        m, m2 = gram.shape
        if m != m2:
            raise StructuralError("Gramian must be square")
        if np.iscomplexobj(gram.data) and np.any(gram.data.imag != 0):
            raise InvalidFormError("symplectic Gramian must be real")
        G = np.real(gram.data)
        sym = G + np.swapaxes(G, 1, 2)
        ok, rep = all_negligible(sym, gram.grid, cfg, scale=_norm_scale(G))
        if not ok:
            raise InvalidFormError("Gramian is not skew-symmetric", rep)
        if m % 2:
            raise InvalidFormError(f"rank {m} is odd; a symplectic form needs even rank")
        skew = GenMatrix(gram.grid, _skew_part(G))
        rep = classify_det(skew, cfg)
        if not rep.is_strictly_nonzero:
            raise InvalidFormError(
                f"Gramian is degenerate: det is {rep.classification.value}", rep
            )
        return cls(skew)

    @property
    def grid(self):
        return self.gram.grid

    @property
    def rank(self) -> int:
        return self.gram.shape[0]

    @property
    def n(self) -> int:
        return self.rank // 2

    def __call__(self, v, w) -> GenScalar:
        return apply(self, v, w)


@dataclass(frozen=True)
class SymplecticBasis:
    """Vectors e_1..e_n, f_1..f_n with sigma(f_j, e_l) = delta_jl, others 0."""

    e: tuple
    f: tuple

    @property
    def n(self):
        return len(self.e)

    def matrix(self) -> GenMatrix:
        """Columns ``e_1, ..., e_n, f_1, ..., f_n``; then ``M^t G M = J``."""
        return GenMatrix.from_columns(list(self.e) + list(self.f))


@dataclass(frozen=True)
class Submodule:
    """Submodule spanned by a free generating set (possibly empty)."""

    generators: tuple
    dim: int
    grid: object = field(repr=False)

    @classmethod
    def of(cls, generators, cfg=DEFAULT_CONFIG, *, dim=None, grid=None) -> "Submodule":
        gens = tuple(generators)
        if gens:
            grid = check_grids(*(g.grid for g in gens))
            dim = len(gens[0]) if dim is None else dim
            if any(len(g) != dim for g in gens):
                raise StructuralError("generators have different lengths")
            if not is_free_set(gens, cfg):
                raise PreconditionError(
                    "generators are not a free set; non-free submodules are not supported",
                    free_set_report(gens, cfg) if len(gens) > 1 else None,
                )
        elif dim is None or grid is None:
            raise StructuralError("an empty submodule needs dim and grid")
        return cls(gens, dim, grid)

    @property
    def rank(self) -> int:
        return len(self.generators)

    def matrix(self) -> np.ndarray:
        if not self.generators:
            return np.zeros((len(self.grid), self.dim, 0))
        return np.stack([g.data for g in self.generators], axis=2)


class SubmoduleType(str, enum.Enum):
    SYMPLECTIC = "symplectic"
    ISOTROPIC = "isotropic"
    INVOLUTIVE = "involutive"
    LAGRANGIAN = "lagrangian"
    NONE = "none"


# bilinear evaluation


def _pairing(G, X, Y):
    """Matrix of sigma(x_i, y_j) for column stacks X (K,m,p), Y (K,m,q), plus a roundoff scale."""
    val = np.swapaxes(X, 1, 2) @ G @ Y
    scale = np.swapaxes(np.abs(X), 1, 2) @ np.abs(G) @ np.abs(Y)
    return val, scale


def standard_form(n, grid) -> SymplecticForm:
    """T*(R~^n) with sigma((x, xi), (y, eta)) = <y, xi> - <x, eta>."""
    if n < 1:
        raise StructuralError("n must be >= 1")
    return SymplecticForm(GenMatrix.constant(standard_j(n), grid))


def apply(form: SymplecticForm, v: GenVector, w: GenVector) -> GenScalar:
    check_grids(form.grid, v.grid, w.grid)
    if len(v) != form.rank or len(w) != form.rank:
        raise StructuralError("vector length does not match the form")
    val = np.einsum("ki,kij,kj->k", v.data, form.gram.data, w.data)
    return GenScalar(form.grid, val)


def relation_check(form: SymplecticForm, basis: SymplecticBasis, cfg=DEFAULT_CONFIG):
    """Verify all relations of a symplectic basis; returns ``(ok, failures)``.

    ``failures`` lists ``(relation, j, l, report)`` for every violated entry.
    """
    n = basis.n
    if 2 * n != form.rank:
        return False, [("rank", None, None, None)]
    M = basis.matrix().data
    val, scale = _pairing(form.gram.data, M, M)
    J = standard_j(n)
    diff = val - J
    failures = []
    names = {(0, 0): "sigma(e_j,e_l)", (1, 1): "sigma(f_j,f_l)",
             (1, 0): "sigma(f_j,e_l)-delta", (0, 1): "sigma(e_j,f_l)+delta"}
    ok, _ = all_negligible(diff, form.grid, cfg, scale=scale + np.abs(J))
    if ok:
        return True, []
    for a in range(2 * n):
        for b in range(2 * n):
            rep = classify(diff[:, a, b], cfg, grid=form.grid, scale=scale[:, a, b] + abs(J[a, b]))
            if not rep.is_negligible:
                failures.append((names[(a // n, b // n)], a % n, b % n, rep))
    return False, failures


def relation_reports(form: SymplecticForm, basis: SymplecticBasis, cfg=DEFAULT_CONFIG) -> list:
    """One ``(relation, j, l, report)`` entry for every basis relation."""
    n = basis.n
    M = basis.matrix().data
    val, scale = _pairing(form.gram.data, M, M)
    out = []
    for name, (a0, b0), target in (("sigma(e_j,e_l)", (0, 0), 0), ("sigma(f_j,f_l)", (n, n), 0),
                                   ("sigma(f_j,e_l)", (n, 0), 1)):
        for j in range(n):
            for l in range(n):
                t = float(target and j == l)
                rep = classify(val[:, a0 + j, b0 + l] - t, cfg, grid=form.grid,
                               scale=scale[:, a0 + j, b0 + l] + t)
                out.append((name, j, l, rep))
    return out


def _check_basis(form, basis, cfg, what):
    ok, failures = relation_check(form, basis, cfg)
    if not ok:
        raise PostconditionError(f"{what}: symplectic relations fail", failures)
    return basis


def _coord_basis(G, grid, cfg):
    """Symplectic basis of the form with Gramian stack G, as coordinate stacks (E, F)."""
    K, m, _ = G.shape
    if m == 0:
        return np.zeros((K, 0, 0)), np.zeros((K, 0, 0))
    if m == 1:
        raise InvalidFormError("a form of rank 1 is degenerate")
    delta = np.zeros(m)
    delta[0] = 1.0
    f1 = GenVector.constant(delta, grid)
    e1 = solve(GenMatrix(grid, G), f1, cfg)
    if m == 2:
        return e1.data[:, :, None], f1.data[:, :, None]
    ext = extend_to_basis([e1, f1], cfg)[2:]
    B = np.stack([b.data for b in ext], axis=2)  # (K, m, m-2)
    s_e = np.einsum("kil,kij,kj->kl", B, G, e1.data)  # sigma(b_l, e1)
    s_f = np.einsum("kil,kij,kj->kl", B, G, f1.data)  # sigma(b_l, f1)
    C = B - f1.data[:, :, None] * s_e[:, None, :] + e1.data[:, :, None] * s_f[:, None, :]
    G1 = _skew_part(np.swapaxes(C, 1, 2) @ G @ C)
    E1, F1 = _coord_basis(G1, grid, cfg)
    E = np.concatenate([e1.data[:, :, None], C @ E1], axis=2)
    F = np.concatenate([f1.data[:, :, None], C @ F1], axis=2)
    return E, F


def _to_basis(grid, E, F):
    e = tuple(GenVector(grid, E[:, :, j]) for j in range(E.shape[2]))
    f = tuple(GenVector(grid, F[:, :, j]) for j in range(F.shape[2]))
    return SymplecticBasis(e, f)


def symplectic_basis(form: SymplecticForm, cfg=DEFAULT_CONFIG) -> SymplecticBasis:
    """Construct a symplectic basis by repeatedly splitting off a hyperbolic plane.

    f_1 is the first working basis vector, e_1 = G^{-1} f_1 coordinates; the
    rest is built recursively on the sigma-orthogonal complement of
    span{e_1, f_1}.
    """
    E, F = _coord_basis(form.gram.data, form.grid, cfg)
    return _check_basis(form, _to_basis(form.grid, E, F), cfg, "symplectic_basis")


def _stack(vectors):
    return np.stack([v.data for v in vectors], axis=2)


def _check_partial(form, e, f, cfg):
    G = form.gram.data
    for (name, group) in (("e", e), ("f", f)):
        keys = sorted(group)
        for a in keys:
            for b in keys:
                if a < b:
                    val, sc = _pairing(G, group[a].data[:, :, None], group[b].data[:, :, None])
                    rep = classify(val[:, 0, 0], cfg, grid=form.grid, scale=sc[:, 0, 0])
                    if not rep.is_negligible:
                        raise PreconditionError(
                            f"partial basis violates sigma({name}_{a}, {name}_{b}) = 0",
                            {"pair": (f"{name}_{a}", f"{name}_{b}"), "report": rep},
                        )
    for j in sorted(f):
        for i in sorted(e):
            val, sc = _pairing(G, f[j].data[:, :, None], e[i].data[:, :, None])
            target = 1.0 if i == j else 0.0
            rep = classify(val[:, 0, 0] - target, cfg, grid=form.grid, scale=sc[:, 0, 0] + target)
            if not rep.is_negligible:
                raise PreconditionError(
                    f"partial basis violates sigma(f_{j}, e_{i}) = {int(target)}",
                    {"pair": (f"f_{j}", f"e_{i}"), "report": rep},
                )


def _solve_dual(form, known, others, rhs_known, cfg):
    """Vector x with sigma(x, b) prescribed on the basis known + others."""
    X = _stack(known + others)
    A = np.swapaxes(X, 1, 2) @ np.swapaxes(form.gram.data, 1, 2)
    rhs = np.zeros((len(form.grid), X.shape[2]))
    rhs[:, : len(rhs_known)] = rhs_known
    return solve(GenMatrix(form.grid, A), GenVector(form.grid, rhs), cfg)


def extend_symplectic_basis(form: SymplecticForm, e_partial=None, f_partial=None,
                            cfg=DEFAULT_CONFIG) -> SymplecticBasis:
    """Complete a partial symplectic basis ``{e_i: i in I} u {f_j: j in J}``.

    Indices are 0-based. Missing partners are solved for one at a time until
    I = J; the remaining symplectic complement then gets its own basis.
    """
    e = dict(e_partial or {})
    f = dict(f_partial or {})
    n = form.n
    for idx in list(e) + list(f):
        if not 0 <= idx < n:
            raise StructuralError(f"basis index {idx} outside 0..{n - 1}")
    given = [e[i] for i in sorted(e)] + [f[j] for j in sorted(f)]
    if not given:
        return symplectic_basis(form, cfg)
    check_grids(form.grid, *(v.grid for v in given))
    if any(len(v) != form.rank for v in given):
        raise StructuralError("partial basis vectors have the wrong length")
    if not is_free_set(given, cfg):
        raise PreconditionError("partial basis is not a free set")
    _check_partial(form, e, f, cfg)

    while set(e) != set(f):
        I, J = sorted(e), sorted(f)
        known = [e[i] for i in I] + [f[j] for j in J]
        others = extend_to_basis(known, cfg)[len(known):]
        missing_e = sorted(set(J) - set(I))
        if missing_e:
            j0 = missing_e[0]
            rhs = [0.0] * len(I) + [-1.0 if j == j0 else 0.0 for j in J]
            e[j0] = _solve_dual(form, known, others, rhs, cfg)
        else:
            i0 = sorted(set(I) - set(J))[0]
            rhs = [1.0 if i == i0 else 0.0 for i in I] + [0.0] * len(J)
            f[i0] = _solve_dual(form, known, others, rhs, cfg)

    missing = [j for j in range(n) if j not in e]
    if missing:
        I = sorted(e)
        known = [e[i] for i in I] + [f[i] for i in I]
        B = _stack(extend_to_basis(known, cfg)[len(known):])
        G = form.gram.data
        Ek, Fk = _stack([e[i] for i in I]), _stack([f[i] for i in I])
        s_e = np.swapaxes(B, 1, 2) @ G @ Ek  # (K, r, |I|): sigma(b_l, e_j)
        s_f = np.swapaxes(B, 1, 2) @ G @ Fk
        C = B - Fk @ np.swapaxes(s_e, 1, 2) + Ek @ np.swapaxes(s_f, 1, 2)
        G1 = _skew_part(np.swapaxes(C, 1, 2) @ G @ C)
        E1, F1 = _coord_basis(G1, form.grid, cfg)
        E, F = C @ E1, C @ F1
        for pos, j in enumerate(missing):
            e[j] = GenVector(form.grid, E[:, :, pos])
            f[j] = GenVector(form.grid, F[:, :, pos])

    basis = SymplecticBasis(tuple(e[j] for j in range(n)), tuple(f[j] for j in range(n)))
    return _check_basis(form, basis, cfg, "extend_symplectic_basis")


# submodules


def annihilator(form: SymplecticForm, U: Submodule, cfg=DEFAULT_CONFIG) -> Submodule:
    """Generators of U^sigma = {v : sigma(v, u) = 0 for all u in U}.

    Extends U's generators b_1..b_k to a basis b_1..b_m and returns the
    preimages of b_{k+1}..b_m under v -> sum_j sigma(v, b_j) b_j.
    """
    check_grids(form.grid, U.grid)
    m, k = form.rank, U.rank
    if U.dim != m:
        raise StructuralError("submodule lives in a module of different rank")
    if k == 0:
        return Submodule.of([GenVector.unit(j, m, form.grid) for j in range(m)], cfg)
    if k == m:
        return Submodule((), m, form.grid)
    try:
        basis = extend_to_basis(list(U.generators), cfg)
    except PreconditionError as exc:
        raise PreconditionError(f"cannot extend generators to a basis: {exc}") from exc
    B = _stack(basis)
    Gb = np.swapaxes(B, 1, 2) @ form.gram.data @ B
    rhs = np.zeros((len(form.grid), m, m - k))
    rhs[:, k:, :] = np.eye(m - k)
    X = solve(GenMatrix(form.grid, np.swapaxes(Gb, 1, 2)), GenMatrix(form.grid, rhs), cfg)
    V = B @ X.data
    gens = [GenVector(form.grid, V[:, :, j]) for j in range(m - k)]
    val = np.swapaxes(V, 1, 2) @ form.gram.data @ U.matrix()
    # V = B X involves cancellation, so the roundoff scale is built from X and B
    absB = np.abs(B)
    scale = (np.swapaxes(np.abs(X.data), 1, 2) @ np.swapaxes(absB, 1, 2)
             @ np.abs(form.gram.data) @ absB)[:, :, :k]
    ok, rep = all_negligible(val, form.grid, cfg, scale=scale)
    if not ok:
        raise PostconditionError("annihilator generators are not sigma-orthogonal to U", rep)
    return Submodule.of(gens, cfg)


def contains(U: Submodule, v: GenVector, cfg=DEFAULT_CONFIG) -> bool:
    """Membership v in U via a per-sample least-squares fit against the generators."""
    check_grids(U.grid, v.grid)
    if U.rank == 0:
        return all_negligible(v.data, v.grid, cfg)[0]
    A = U.matrix()
    x = np.linalg.pinv(A) @ v.data[:, :, None]
    resid = A @ x - v.data[:, :, None]
    scale = normwise_scale(A, x, v.data[:, :, None])
    return all_negligible(resid, v.grid, cfg, scale=scale)[0]


def spans_same(U: Submodule, W: Submodule, cfg=DEFAULT_CONFIG) -> bool:
    return all(contains(U, w, cfg) for w in W.generators) and \
        all(contains(W, u, cfg) for u in U.generators)


def submodule_flags(form: SymplecticForm, U: Submodule, cfg=DEFAULT_CONFIG) -> dict:
    """All defining properties of U at once."""
    A = U.matrix()
    k = U.rank
    if k:
        val, scale = _pairing(form.gram.data, A, A)
        isotropic = all_negligible(val, form.grid, cfg, scale=scale)[0]
        symplectic = k % 2 == 0 and classify_det(GenMatrix(form.grid, val), cfg).is_strictly_nonzero
    else:
        isotropic, symplectic = True, False
    ann = annihilator(form, U, cfg)
    involutive = all(contains(U, w, cfg) for w in ann.generators)
    return {
        "isotropic": isotropic,
        "symplectic": symplectic,
        "involutive": involutive,
        "lagrangian": isotropic and 2 * k == form.rank,
        "rank": k,
        "annihilator_rank": ann.rank,
    }


def classify_submodule(form: SymplecticForm, U: Submodule, cfg=DEFAULT_CONFIG) -> SubmoduleType:
    """Most specific type of U; Lagrangian is decided as isotropic with rank n."""
    flags = submodule_flags(form, U, cfg)
    if flags["lagrangian"]:
        return SubmoduleType.LAGRANGIAN
    if flags["isotropic"]:
        return SubmoduleType.ISOTROPIC
    if flags["symplectic"]:
        return SubmoduleType.SYMPLECTIC
    if flags["involutive"]:
        return SubmoduleType.INVOLUTIVE
    return SubmoduleType.NONE


# symplectic matrices


@dataclass(frozen=True)
class SymplecticMatrixCheck:
    ok: bool
    residual_report: object
    det_sq_minus_one: object
    det_sq_negligible: bool

    def __bool__(self):
        return self.ok


def is_symplectic_matrix(a: GenMatrix, cfg=DEFAULT_CONFIG) -> SymplecticMatrixCheck:
    """A^t J A = J entrywise up to negligibility; also reports det(A)^2 - 1."""
    m, m2 = a.shape
    if m != m2 or m % 2:
        raise StructuralError("symplectic matrices are square of even size")
    J = standard_j(m // 2)
    A = a.data
    val, scale = _pairing(np.broadcast_to(J, A.shape), A, A)
    ok, rep = all_negligible(val - J, a.grid, cfg, scale=scale + np.abs(J))
    d = det(a)
    hb = np.prod(np.linalg.norm(A, axis=2), axis=1)
    dsq = classify(d * d - 1.0, cfg, scale=hb**2 + 1.0)
    return SymplecticMatrixCheck(ok, rep, dsq, dsq.is_negligible)


def symplectomorphism_to_standard(form: SymplecticForm, cfg=DEFAULT_CONFIG) -> GenMatrix:
    """Change of basis M (columns e_1..e_n, f_1..f_n) with M^t G M = J."""
    M = symplectic_basis(form, cfg).matrix()
    val, scale = _pairing(form.gram.data, M.data, M.data)
    J = standard_j(form.n)
    ok, rep = all_negligible(val - J, form.grid, cfg, scale=scale + np.abs(J))
    if not ok:
        raise PostconditionError("M^t G M differs from J", rep)
    return M


def lagrangian_standard_form(form: SymplecticForm, U: Submodule, cfg=DEFAULT_CONFIG) -> SymplecticBasis:
    """Symplectic basis whose e's are U's generators (the model U + U*)."""
    kind = classify_submodule(form, U, cfg)
    if kind is not SubmoduleType.LAGRANGIAN:
        raise PreconditionError(f"submodule is {kind.value}, not Lagrangian")
    return extend_symplectic_basis(form, dict(enumerate(U.generators)), {}, cfg)
