import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gna.errors import PreconditionError, SingularMatrixError, SymmetryError, UnsupportedError
from gna.linalg import GenMatrix
from gna.scalar import GenScalar, Idempotent, interleave
from gna.spectra import (
    EigenKind,
    char_poly_roots_distinguished,
    eigenpair_from_root,
    factorization_check,
    hermitian_eigentuple,
    hermitize,
    is_eigenvalue,
    representative_stability_check,
    skew_eigentuple,
    skew_normal_form,
    skew_symmetrize,
    skew_to_standard_J,
)
from gna.symplectic import standard_j

import generators as gen

# closed-form spectrum of the tridiagonal matrix below: 3 + sqrt 3, 3, 3 - sqrt 3
TRIDIAG = np.array([[2.0, 1, 0], [1, 3, 1], [0, 1, 4]])
TRIDIAG_TOP = (4.732050807568878, np.array([1.0, 1 + np.sqrt(3), 2 + np.sqrt(3)]))

# frozen from an independent characteristic-polynomial root solve
HERM4 = np.array([[2, 1 - 1j, 0, 0.5j], [1 + 1j, -1, 2, 0], [0, 2, 0.5, 1 - 2j], [-0.5j, 0, 1 + 2j, 3]])
HERM4_SPECTRUM = [4.531302194426149, 2.7916842764173855, 0.07833444191373788, -2.901320912757276]

SKEW6 = np.array([
    [0, 1, -2, 0, 0.5, 1],
    [-1, 0, 3, 1, 0, -1],
    [2, -3, 0, 0.5, 2, 0],
    [0, -1, -0.5, 0, 1, 1],
    [-0.5, 0, -2, -1, 0, 3],
    [-1, 1, 0, -1, -3, 0],
])
SKEW6_LAMBDAS = [5.316536489478202, 2.035748010006068, 0.30028285965594953]


def diag_c(c):
    return GenMatrix.diag([1 - c, c])


def test_is_eigenvalue_examples(grid, c):
    assert is_eigenvalue(diag_c(c), c)
    assert is_eigenvalue(diag_c(c), 1 - c)
    assert not is_eigenvalue(diag_c(c), 0.5)
    assert is_eigenvalue(GenMatrix.identity(3, grid), 1.0)


def test_interleaved_roots_are_eigenvalues(grid):
    rng = np.random.default_rng(2)
    A = GenMatrix.diag([1.0, 2.0], grid)
    for _ in range(10):
        mask = rng.integers(0, 2, len(grid)).astype(bool)
        e = Idempotent(grid, mask)
        assert is_eigenvalue(A, interleave((1.0, 2.0), (e, e.complement())))


def test_eigenpair_examples(grid, c):
    x = eigenpair_from_root(diag_c(c), 1 - c)
    assert np.allclose(np.abs(x.data), [1.0, 0.0])
    x = eigenpair_from_root(GenMatrix.diag([2.0, 3.0], grid), 2.0)
    assert np.allclose(np.abs(x.data), [1.0, 0.0])
    with pytest.raises(PreconditionError):
        eigenpair_from_root(GenMatrix.diag([2.0, 3.0], grid), 2.5)


def test_eigenpair_classical_oracle(grid):
    lam, v = TRIDIAG_TOP
    v = v / np.linalg.norm(v)
    x = eigenpair_from_root(GenMatrix.constant(TRIDIAG, grid), lam, realify=True)
    assert np.isrealobj(x.data) or np.all(x.data.imag == 0)
    xs = np.real(x.data)
    assert np.max(np.abs(np.abs(xs @ v) - 1)) <= 1e-9
    assert np.max(np.abs(xs @ TRIDIAG.T - lam * xs)) <= 1e-9


def test_hermitian_tuple_examples(grid):
    tup, U = hermitian_eigentuple(GenMatrix.diag([2.0, 1.0], grid))
    assert np.array_equal(tup.samples()[0], [2.0, 1.0])
    assert np.allclose(np.abs(U.data), np.eye(2))
    e = GenScalar.eps(grid)
    tup, _ = hermitian_eigentuple(GenMatrix.diag([1 + e, 1 - e]))
    assert np.allclose(tup.samples(), np.stack([1 + grid.eps, 1 - grid.eps], axis=1))
    assert tup.kind is EigenKind.HERMITIAN_REAL


def test_hermitian_tuple_frozen_spectrum(grid):
    tup, U = hermitian_eigentuple(GenMatrix.constant(HERM4, grid))
    assert np.max(np.abs(tup.samples() - HERM4_SPECTRUM)) <= 1e-9
    Uh = np.conj(np.swapaxes(U.data, 1, 2))
    assert np.allclose(Uh @ U.data, np.eye(4), atol=1e-12)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 6))
def test_hermitian_tuple_is_descending_and_diagonalizes(seed, n):
    rng = np.random.default_rng(seed)
    A = gen.random_hermitian(rng, n, eps_dependent=True)
    tup, U = hermitian_eigentuple(A)
    s = tup.samples()
    assert np.all(np.diff(s, axis=1) <= 0)
    D = np.conj(np.swapaxes(U.data, 1, 2)) @ A.data @ U.data
    assert np.allclose(D, np.einsum("kj,ij->kij", s, np.eye(n)), atol=1e-10)


def test_symmetrizers(grid, rng):
    S = gen.random_skew(rng, 4)
    assert np.array_equal(skew_symmetrize(S).data, S.data)
    tiny = GenMatrix(grid, S.data + grid.eps[:, None, None] ** 12 * rng.normal(size=S.data.shape))
    out = skew_symmetrize(tiny).data
    assert np.array_equal(out, -np.swapaxes(out, 1, 2))
    with pytest.raises(SymmetryError):
        skew_symmetrize(GenMatrix.identity(2, grid))
    with pytest.raises(SymmetryError):
        hermitize(S)


def test_skew_tuple_examples(grid):
    tup = skew_eigentuple(GenMatrix.constant(np.array([[0.0, -3.0], [3.0, 0.0]]), grid))
    assert np.allclose(tup.samples()[0], [3j, -3j])
    assert tup.kind is EigenKind.SKEW_IMAGINARY
    tup = skew_eigentuple(GenMatrix.constant(standard_j(3), grid))
    assert np.allclose(tup.samples()[0], [1j] * 3 + [-1j] * 3)


@pytest.mark.parametrize("n", [3, 5])
def test_skew_odd_has_zero_middle(grid, rng, n):
    tup = skew_eigentuple(gen.random_skew(rng, n))
    mid = tup.samples()[:, n // 2]
    assert np.all(np.abs(mid) <= 1e-12)
    assert tup[n // 2].classify(scale=np.ones(len(grid))).is_negligible


def test_skew_tuple_is_conjugate_symmetric(grid, rng):
    s = skew_eigentuple(gen.random_skew(rng, 6, eps_dependent=True)).samples()
    assert np.allclose(s, -s[:, ::-1])


def test_normal_form_examples(grid):
    nf = skew_normal_form(GenMatrix.constant(np.array([[0.0, -3.0], [3.0, 0.0]]), grid))
    assert len(nf.lambdas) == 1 and np.allclose(nf.lambdas[0].samples, 3)
    assert np.allclose(np.abs(nf.V.data), np.eye(2))
    nf = skew_normal_form(GenMatrix.constant(np.zeros((3, 3)), grid))
    assert nf.lambdas == () and nf.zero_block_count == 3
    assert np.allclose(nf.V.data, np.eye(3))


def test_normal_form_frozen_lambdas(grid):
    nf = skew_normal_form(GenMatrix.constant(SKEW6, grid))
    got = np.stack([l.samples for l in nf.lambdas], axis=1)
    assert np.max(np.abs(got - SKEW6_LAMBDAS)) <= 1e-9
    V = nf.V.data
    assert np.allclose(np.swapaxes(V, 1, 2) @ SKEW6 @ V, nf.block_matrix().data, atol=1e-12)


def test_normal_form_rank_deficient(grid, rng):
    # rank 2 skew matrix in dimension 5
    u, v = rng.normal(size=5), rng.normal(size=5)
    S = np.outer(u, v) - np.outer(v, u)
    nf = skew_normal_form(GenMatrix.constant(S, grid))
    assert len(nf.lambdas) == 1 and nf.zero_block_count == 3


def test_normal_form_warns_on_zero_divisor(grid, c):
    A = GenMatrix.from_entries([[0.0, -c, 0.0, 0.0], [c, 0.0, 0.0, 0.0],
                                [0.0, 0.0, 0.0, -1.0], [0.0, 0.0, 1.0, 0.0]], grid)
    nf = skew_normal_form(A)
    assert any("zero_divisor_like" in w for w in nf.warnings)


def test_skew_to_standard_examples(grid, c):
    J = GenMatrix.constant(standard_j(2), grid)
    V = skew_to_standard_J(J).data
    assert np.allclose(np.swapaxes(V, 1, 2) @ standard_j(2) @ V, standard_j(2))
    A = np.array([[0.0, -2.0], [2.0, 0.0]])
    V = skew_to_standard_J(GenMatrix.constant(A, grid)).data
    assert np.allclose(V[0], [[0.0, 1.0], [-0.5, 0.0]])
    assert np.allclose(V[0].T @ A @ V[0], standard_j(1))
    with pytest.raises(SingularMatrixError) as info:
        skew_to_standard_J(GenMatrix.from_entries([[0.0, -c], [c, 0.0]], grid))
    assert "theta" in info.value.report


def test_char_poly_examples(grid, c):
    tup = char_poly_roots_distinguished(diag_c(c))
    assert np.array_equal(tup.samples()[0], [1.0, 0.0])
    assert np.array_equal(tup.samples()[1], [1.0, 0.0])
    tup = char_poly_roots_distinguished(GenMatrix.constant(HERM4, grid))
    assert np.max(np.abs(tup.samples() - HERM4_SPECTRUM)) <= 1e-9
    tup = char_poly_roots_distinguished(GenMatrix.constant(np.array([[0.0, -2.0], [2.0, 0.0]]), grid), "skew")
    assert np.allclose(tup.samples()[0], [2j, -2j])
    with pytest.raises(UnsupportedError):
        char_poly_roots_distinguished(GenMatrix.identity(2, grid), "general")


def test_factorization_is_order_free(grid, rng):
    A = gen.random_hermitian(rng, 4, eps_dependent=True)
    tup, _ = hermitian_eigentuple(A)
    assert factorization_check(A, tup.values)[0]
    assert factorization_check(A, tup.values[::-1])[0]
    assert not factorization_check(A, (0.0,) + tup.values[1:])[0]


def test_stability_examples(grid, rng):
    A = gen.random_hermitian(rng, 4, complex_=False)
    rep = representative_stability_check(A, A)
    assert rep.ok and np.all(rep.max_difference == 0)
    R = gen.random_hermitian(rng, 4, complex_=False, eps_dependent=True)
    B = GenMatrix(grid, A.data + grid.eps[:, None, None] ** 10 * R.data)
    rep = representative_stability_check(A, B)
    assert rep.ok and rep.weyl_ok
    B = gen.random_hermitian(rng, 4)
    rep = representative_stability_check(A, B)
    assert rep.weyl_ok and not rep.ok


def test_stability_skew(grid, rng):
    A = gen.random_skew(rng, 4)
    B = GenMatrix(grid, A.data + grid.eps[:, None, None] ** 12 * gen.random_skew(rng, 4, eps_dependent=True).data)
    rep = representative_stability_check(A, B, kind="skew")
    assert rep.ok and rep.weyl_ok
