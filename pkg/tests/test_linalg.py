import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gna.asymptotics import Classification, all_negligible
from gna.errors import PreconditionError, SingularMatrixError, StructuralError
from gna.linalg import (
    GenMatrix,
    GenVector,
    det,
    extend_to_basis,
    gram,
    inner,
    inverse,
    is_free,
    is_free_set,
    is_invertible,
    kernel_free_vector,
    matmul,
    norm_sq,
    realify_kernel_vector,
    solve,
    transpose,
)
from gna.scalar import GenScalar, Idempotent
from gna.symplectic import standard_j

import generators as gen


def test_identity_products(grid, rng):
    A = gen.random_matrix(rng, 3, eps_dependent=True)
    assert np.array_equal((GenMatrix.identity(3, grid) @ A).data, A.data)
    assert np.array_equal(transpose(transpose(A)).data, A.data)
    B = gen.random_matrix(rng, 3)
    assert np.array_equal(matmul(A, B).data[7], A.data[7] @ B.data[7])


def test_det_examples(grid, c):
    A = GenMatrix.diag([1 - c, c])
    assert np.array_equal(det(A).samples, np.zeros(len(grid)))
    assert np.array_equal(det(GenMatrix.identity(4, grid)).samples, np.ones(len(grid)))
    m = np.array([[2, -1, 3], [0.5, 4, -2], [1, 1, 1]])
    assert np.allclose(det(GenMatrix.constant(m, grid)).samples, 4.0, atol=1e-12)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 5))
def test_det_multiplicative(seed, n):
    rng = np.random.default_rng(seed)
    A = gen.random_matrix(rng, n, eps_dependent=True)
    B = gen.random_matrix(rng, n, eps_dependent=True)
    lhs = det(A @ B).samples
    rhs = (det(A) * det(B)).samples
    scale = np.prod(np.linalg.norm(A.data, axis=2), axis=1) * np.prod(np.linalg.norm(B.data, axis=2), axis=1)
    assert np.all(np.abs(lhs - rhs) <= 1e-12 * scale)


def test_invertibility_examples(grid, c):
    ok, rep = is_invertible(GenMatrix.constant(standard_j(2), grid))
    assert ok and np.allclose(det(GenMatrix.constant(standard_j(2), grid)).samples, 1)
    ok, rep = is_invertible(GenMatrix.diag([1 - c, c]))
    assert not ok
    e = GenScalar.eps(grid)
    ok, rep = is_invertible(GenMatrix.diag([e, 1.0], grid))
    assert ok and rep.slope == pytest.approx(1.0)


def test_solve_examples(grid, c, rng):
    b = GenVector(grid, rng.normal(size=(len(grid), 3)))
    assert np.allclose(solve(GenMatrix.identity(3, grid), b).data, b.data)
    with pytest.raises(SingularMatrixError) as info:
        solve(GenMatrix.diag([1 - c, c]), GenVector.unit(0, 2, grid))
    assert info.value.report.is_negligible


def test_solve_gramian_gives_first_coordinate_vector(grid, rng):
    Gm = gen.random_gramian(rng, 2)
    e1 = solve(Gm, GenVector.unit(0, 4, grid))
    ok, _ = all_negligible(np.einsum("kij,kj->ki", Gm.data, e1.data) - np.eye(4)[0], grid,
                           scale=np.einsum("kij,kj->ki", np.abs(Gm.data), np.abs(e1.data)) + 1)
    assert ok


def test_solve_residual_property(grid):
    rng = np.random.default_rng(5)
    for n in range(1, 7):
        A = gen.random_invertible(rng, n, eps_dependent=True)
        b = GenVector(grid, rng.normal(size=(len(grid), n)))
        x = solve(A, b)
        r = np.einsum("kij,kj->ki", A.data, x.data) - b.data
        assert np.max(np.abs(r)) < 1e-12 * (1 + np.max(np.abs(A.data)) * np.max(np.abs(x.data)))
    Ai = inverse(A)
    assert np.allclose(Ai.data @ A.data, np.eye(n), atol=1e-12)


def test_rank_example_rejected(grid):
    e = Idempotent.even(grid).as_scalar()
    A = GenMatrix.from_entries([[e, e], [1 - e, 1 - e]], grid)
    assert np.array_equal(det(A).samples, np.zeros(len(grid)))
    assert not is_invertible(A).invertible
    with pytest.raises(SingularMatrixError):
        solve(A, GenVector.unit(0, 2, grid))


def test_inner_products(grid, c, rng):
    d1 = GenVector.unit(0, 3, grid)
    assert np.array_equal(inner(d1, d1).samples, np.ones(len(grid)))
    v = GenVector.from_entries([c, 1 - c])
    assert np.array_equal(norm_sq(v).samples, np.ones(len(grid)))
    x = GenVector(grid, rng.normal(size=(len(grid), 3)) + 1j * rng.normal(size=(len(grid), 3)))
    y = GenVector(grid, rng.normal(size=(len(grid), 3)) + 1j * rng.normal(size=(len(grid), 3)))
    assert np.allclose(inner(x, y).samples, np.conj(inner(y, x).samples))
    with pytest.raises(StructuralError):
        inner(d1, GenVector.unit(0, 2, grid))


def test_free_vectors(grid, c):
    assert is_free(GenVector.from_entries([c, 1 - c]))
    assert not is_free(GenVector.from_entries([c, 0.0], grid))
    assert is_free(GenVector.unit(1, 3, grid))


def test_extend_free_vector_with_idempotents(grid, c):
    v1 = GenVector.from_entries([c, 1 - c])
    v1_, w = extend_to_basis([v1])
    assert v1_ is v1
    assert inner(w, v1).classify(scale=np.ones(len(grid))).is_negligible
    assert is_free(w)
    assert is_invertible(GenMatrix.from_columns([v1, w])).invertible


def test_extend_coordinate_plane(grid):
    out = extend_to_basis([GenVector.unit(0, 3, grid), GenVector.unit(1, 3, grid)])
    third = out[2].data
    assert np.allclose(np.abs(third), np.array([0.0, 0.0, 1.0]))


def test_extend_random_pair(grid, rng):
    vs = [GenVector(grid, rng.normal(size=(len(grid), 4))) for _ in range(2)]
    out = extend_to_basis(vs)
    assert len(out) == 4
    d = det(gram(out))
    assert d.classify().classification in (Classification.STRICTLY_NONZERO, Classification.STRICTLY_POSITIVE)


def test_extend_rejects_non_free(grid, c):
    with pytest.raises(PreconditionError):
        extend_to_basis([GenVector.from_entries([c, 0.0], grid)])


def test_free_iff_extension(grid, rng, c):
    candidates = [
        GenVector.from_entries([c, 1 - c]),
        GenVector.from_entries([c, 0.0], grid),
        GenVector(grid, rng.normal(size=(len(grid), 3))),
        GenVector(grid, np.outer(grid.eps ** 10, [1.0, 2.0])),
    ]
    for v in candidates:
        if is_free(v):
            assert is_invertible(GenMatrix.from_columns(extend_to_basis([v]))).invertible
        else:
            with pytest.raises(PreconditionError):
                extend_to_basis([v])
    assert is_free_set([])


def test_kernel_vector_examples(grid, c):
    v = kernel_free_vector(GenMatrix.diag([0.0, 1.0], grid))
    assert np.allclose(v.data, [1.0, 0.0])
    B = GenMatrix.diag([1 - c, c]).shift(c)
    v = kernel_free_vector(B)
    assert np.allclose(np.linalg.norm(v.data, axis=1), 1)
    assert all_negligible(np.einsum("kij,kj->ki", B.data, v.data), grid)[0]
    with pytest.raises(PreconditionError):
        kernel_free_vector(GenMatrix.identity(2, grid))


def test_kernel_vector_classical_oracle(grid):
    # A has eigenvalues 3 - sqrt 3, 3, 3 + sqrt 3 (closed form)
    A = np.array([[2.0, 1, 0], [1, 3, 1], [0, 1, 4]])
    lam_min = 3 - np.sqrt(3)
    v = kernel_free_vector(GenMatrix.constant(A - lam_min * np.eye(3), grid))
    expected = np.array([1.0, 1 - np.sqrt(3), 2 - np.sqrt(3)])
    expected /= np.linalg.norm(expected)
    assert np.max(np.abs(np.abs(v.data[0]) - np.abs(expected))) <= 1e-9


def test_realify(grid):
    A = GenMatrix.diag([0.0, 1.0], grid)
    x = GenVector.constant(np.array([1.0, 0.0]), grid)
    assert np.array_equal(realify_kernel_vector(x, A).data, x.data)
    z = GenVector.constant(np.array([1j, 0.0]), grid)
    assert np.array_equal(realify_kernel_vector(z, A).data, x.data)
    even = (grid.ks % 2 == 0)[:, None]
    mixed = GenVector(grid, np.where(even, [[1.0 + 0j, 0]], [[1j, 0]]))
    v = realify_kernel_vector(mixed, A)
    assert is_free(v)
