import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gna.config import DEFAULT_CONFIG
from gna.errors import (
    DomainError,
    NonInvertibleScalarError,
    PreconditionError,
    StructuralError,
)
from gna.grid import DEFAULT_GRID, make_grid
from gna.scalar import (
    GenScalar,
    Idempotent,
    check_partition,
    interleave,
    invert,
    random_partition,
    scalar_arith,
    zero_divisor_split,
)

K = len(DEFAULT_GRID)

int_samples = st.lists(st.integers(-1000, 1000), min_size=K, max_size=K)
float_samples = st.lists(st.floats(-1e6, 1e6, allow_nan=False), min_size=K, max_size=K)
masks = st.lists(st.booleans(), min_size=K, max_size=K)


def net(xs):
    return GenScalar(DEFAULT_GRID, np.array(xs, dtype=float))


@given(int_samples, int_samples, int_samples)
def test_ring_laws_exact_on_integer_nets(a, b, c):
    a, b, c = net(a), net(b), net(c)
    assert ((a + b) + c).identical(a + (b + c))
    assert (a * (b + c)).identical(a * b + a * c)
    assert (a * b).identical(b * a)
    assert (a - a).identical(GenScalar.constant(0.0, DEFAULT_GRID))


@given(float_samples, float_samples, float_samples)
def test_ring_laws_to_rounding_on_float_nets(a, b, c):
    a, b, c = net(a), net(b), net(c)
    lhs, rhs = (a * (b + c)).samples, (a * b + a * c).samples
    # two roundings per side; the absolute term covers subnormal products
    bound = 4 * np.finfo(float).eps * (np.abs(a.samples) * (np.abs(b.samples) + np.abs(c.samples))) + 1e-300
    assert np.all(np.abs(lhs - rhs) <= bound)


@given(masks)
def test_idempotent_identities(m):
    e = Idempotent(DEFAULT_GRID, m)
    assert np.array_equal((e * e).mask, e.mask)
    s = e.as_scalar()
    assert (s * s).identical(s)
    assert (e + e.complement()).identical(GenScalar.constant(1.0, DEFAULT_GRID))
    assert (s * (1 - s)).identical(GenScalar.constant(0.0, DEFAULT_GRID))


@given(float_samples)
def test_reducedness_surrogate(xs):
    a = net(xs) * GenScalar.eps(DEFAULT_GRID, 5)
    sq_cfg = DEFAULT_CONFIG.with_overrides(m_neg=2 * DEFAULT_CONFIG.m_neg)
    if (a * a).classify(sq_cfg).is_negligible:
        assert a.classify().is_negligible


@settings(max_examples=50)
@given(st.integers(1, 7), st.floats(0.5, 2.0))
def test_scale_stability(m, k):
    a = GenScalar.eps(DEFAULT_GRID, m - 1)
    cfg = DEFAULT_CONFIG.with_overrides(m_inv=m)
    if a.classify(cfg).is_strictly_nonzero:
        assert (a * k).classify(cfg.with_overrides(m_inv=m + 1)).is_strictly_nonzero


def test_add_idempotent_and_complement(c):
    assert (c + (1 - c)).identical(GenScalar.constant(1.0, c.grid))
    assert scalar_arith("mul", c, 1 - c).identical(GenScalar.constant(0.0, c.grid))


def test_div_by_eps(grid):
    r = scalar_arith("div", 1.0, GenScalar.eps(grid))
    assert np.allclose(r.samples, 1 / grid.eps)
    rep = r.classify()
    assert rep.moderate and rep.slope == pytest.approx(-1.0)


def test_div_by_zero_divisor_rejected(c):
    with pytest.raises(NonInvertibleScalarError) as info:
        scalar_arith("div", 1.0, c)
    assert info.value.report.classification.value == "zero_divisor_like"


def test_sqrt_domain(grid):
    with pytest.raises(DomainError):
        scalar_arith("sqrt", GenScalar.constant(-1.0, grid))
    assert scalar_arith("sqrt", GenScalar.constant(4.0, grid)).identical(GenScalar.constant(2.0, grid))


def test_pow_int(grid):
    e = GenScalar.eps(grid)
    assert np.allclose(scalar_arith("pow_int", e, 3).samples, grid.eps ** 3)
    assert np.allclose(scalar_arith("pow_int", e, -2).samples, grid.eps ** -2)


def test_grid_mismatch(grid):
    other = make_grid("dyadic", 4, 30)
    with pytest.raises(StructuralError):
        GenScalar.eps(grid) + GenScalar.eps(other)


def test_invert_examples(grid, c):
    assert invert(GenScalar.constant(2.0, grid)).identical(GenScalar.constant(0.5, grid))
    assert np.allclose(invert(GenScalar.eps(grid)).samples, 1 / grid.eps)
    with pytest.raises(NonInvertibleScalarError):
        invert(c)


def test_invert_round_trip(grid):
    rng = np.random.default_rng(0)
    for _ in range(50):
        a = GenScalar(grid, rng.uniform(0.5, 2, K) * rng.choice([-1, 1], K) * grid.eps ** rng.integers(-2, 6))
        r = a * invert(a) - 1.0
        assert r.classify(scale=np.ones(K)).is_negligible


def test_zero_divisor_split_examples(grid, c):
    S = zero_divisor_split(c, 1 - c)
    assert (c * S.as_scalar()).classify().is_negligible
    assert ((1 - c) * S.complement().as_scalar()).classify().is_negligible
    assert np.array_equal(S.mask, grid.ks % 2 == 1)
    b = GenScalar(grid, np.linspace(1, 2, K))
    assert zero_divisor_split(GenScalar.constant(0.0, grid), b).mask.all()


def test_zero_divisor_split_spikes(grid):
    # spikes on alternating indices with negligible cross terms
    even = grid.ks % 2 == 0
    a = GenScalar(grid, np.where(even, 1.0, grid.eps ** 12))
    b = GenScalar(grid, np.where(even, grid.eps ** 12, 3.0))
    S = zero_divisor_split(a, b)
    assert (a * S.as_scalar()).classify().is_negligible
    assert (b * S.complement().as_scalar()).classify().is_negligible


def test_zero_divisor_split_precondition(grid):
    with pytest.raises(PreconditionError):
        zero_divisor_split(GenScalar.constant(1.0, grid), GenScalar.constant(1.0, grid))


def test_interleave_examples(grid):
    even, odd = Idempotent.even(grid), Idempotent.odd(grid)
    v = interleave((0.0, 1.0), (even, odd))
    assert np.array_equal(v.samples, odd.mask.astype(float))
    lam = GenScalar.eps(grid, 2)
    full = Idempotent(grid, np.ones(K, dtype=bool))
    assert interleave((lam,), (full,)).identical(lam)


def test_interleave_rejects_non_partition(grid):
    even = Idempotent.even(grid)
    with pytest.raises(StructuralError):
        interleave((1.0, 2.0), (even, even))
    with pytest.raises(StructuralError):
        check_partition([])


def test_random_partition_is_partition(grid):
    rng = np.random.default_rng(3)
    parts = random_partition(grid, 3, rng)
    assert check_partition(parts) == grid
