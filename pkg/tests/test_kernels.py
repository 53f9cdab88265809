import numpy as np
import pytest

from gna import _lu_py, kernels
from gna.kernels import backends, batched_det, batched_solve

BACKENDS = sorted(backends())


@pytest.mark.parametrize("name", BACKENDS)
def test_frozen_leibniz_determinants(name):
    impl = backends()[name]
    # expected values from the Leibniz permutation expansion
    m3 = np.array([[2, -1, 3], [0.5, 4, -2], [1, 1, 1]], dtype=float)
    m4 = np.array([[1, 2, 0, -1], [3, -1, 2, 0.5], [0, 1, 1, 1], [2, 0, -3, 1]], dtype=float)
    d3, _ = batched_det(m3[None], impl)
    d4, _ = batched_det(m4[None], impl)
    assert d3[0] == pytest.approx(4.0, abs=1e-12)
    assert d4[0] == pytest.approx(-52.5, abs=1e-12)


@pytest.mark.parametrize("name", BACKENDS)
@pytest.mark.parametrize("dtype", [float, complex])
def test_backend_matches_reference(name, dtype):
    impl = backends()[name]
    rng = np.random.default_rng(11)
    a = rng.normal(size=(40, 5, 5))
    b = rng.normal(size=(40, 5, 2))
    if dtype is complex:
        a = a + 1j * rng.normal(size=a.shape)
        b = b + 1j * rng.normal(size=b.shape)
    d, flags = batched_det(a, impl)
    assert not flags.any()
    assert np.allclose(d, np.linalg.det(a), rtol=1e-11)
    x, flags = batched_solve(a, b, impl)
    assert np.allclose(a @ x, b, atol=1e-10)


def test_backends_agree_bitwise_on_pivots():
    if "cython" not in BACKENDS:
        pytest.skip("compiled backend not built")
    rng = np.random.default_rng(12)
    a = rng.normal(size=(30, 6, 6))
    d_c, _ = batched_det(a, backends()["cython"])
    d_p, _ = batched_det(a, _lu_py)
    assert np.allclose(d_c, d_p, rtol=1e-13)


@pytest.mark.parametrize("name", BACKENDS)
def test_singular_samples_flagged(name):
    impl = backends()[name]
    a = np.stack([np.eye(3), np.zeros((3, 3)), np.array([[1.0, 2, 3], [2, 4, 6], [0, 0, 1]])])
    d, flags = batched_det(a, impl)
    assert flags.tolist() == [False, True, True]
    assert d[0] == 1.0 and d[1] == 0.0
    x, flags = batched_solve(a, np.ones((3, 3, 1)), impl)
    assert flags.tolist() == [False, True, True]
    assert np.all(x[1] == 0)


def test_empty_matrix_det_is_one():
    d, _ = batched_det(np.zeros((4, 0, 0)))
    assert np.all(d == 1)


def test_backend_name():
    assert kernels.BACKEND in ("cython", "python")


def test_pure_python_fallback_selected_by_env():
    import os
    import subprocess
    import sys

    env = dict(os.environ, GNA_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", "import gna; print(gna.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"
