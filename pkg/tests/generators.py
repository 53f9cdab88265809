"""Random test objects shared by the module tests and the acceptance suite."""

import numpy as np

from gna.grid import DEFAULT_GRID
from gna.linalg import GenMatrix, GenVector
from gna.scalar import GenScalar
from gna.symplectic import standard_j


def eps_column(grid=DEFAULT_GRID):
    return grid.eps[:, None, None]


def random_matrix(rng, n, m=None, grid=DEFAULT_GRID, eps_dependent=False, complex_=False):
    """Constant matrix, or ``A0 + eps * noise`` with fresh noise per sample."""
    m = n if m is None else m
    a = rng.normal(size=(n, m))
    if complex_:
        a = a + 1j * rng.normal(size=(n, m))
    data = np.broadcast_to(a, (len(grid), n, m)).copy()
    if eps_dependent:
        noise = rng.normal(size=(len(grid), n, m))
        if complex_:
            noise = noise + 1j * rng.normal(size=(len(grid), n, m))
        data = data + eps_column(grid) * noise
    return GenMatrix(grid, data)


def random_invertible(rng, n, grid=DEFAULT_GRID, eps_dependent=False):
    # diagonal shift keeps the condition number moderate
    a = random_matrix(rng, n, grid=grid, eps_dependent=eps_dependent)
    return GenMatrix(grid, a.data + 2.0 * np.sqrt(n) * np.eye(n))


def random_gramian(rng, n, grid=DEFAULT_GRID, eps_dependent=False):
    """Skew part of R^t J R for a random invertible R."""
    R = random_invertible(rng, 2 * n, grid, eps_dependent).data
    G = np.swapaxes(R, 1, 2) @ standard_j(n) @ R
    return GenMatrix(grid, 0.5 * (G - np.swapaxes(G, 1, 2)))


def random_hermitian(rng, n, grid=DEFAULT_GRID, complex_=True, eps_dependent=False):
    a = random_matrix(rng, n, grid=grid, complex_=complex_, eps_dependent=eps_dependent).data
    return GenMatrix(grid, 0.5 * (a + np.conj(np.swapaxes(a, 1, 2))))


def random_skew(rng, n, grid=DEFAULT_GRID, eps_dependent=False):
    a = random_matrix(rng, n, grid=grid, eps_dependent=eps_dependent).data
    return GenMatrix(grid, 0.5 * (a - np.swapaxes(a, 1, 2)))


def sym(rng, n, scale=0.6):
    s = rng.normal(scale=scale, size=(n, n))
    return 0.5 * (s + s.T)


def elementary_symplectic(rng, n, kind):
    """One classical factor: upper/lower shear, dilation diag(P, P^-t) or J."""
    eye, z = np.eye(n), np.zeros((n, n))
    if kind == "upper":
        return np.block([[eye, sym(rng, n)], [z, eye]])
    if kind == "lower":
        return np.block([[eye, z], [sym(rng, n), eye]])
    if kind == "dilation":
        P = eye + rng.normal(scale=0.3, size=(n, n))
        return np.block([[P, z], [z, np.linalg.inv(P).T]])
    return standard_j(n)


def random_symplectic(rng, n, grid=DEFAULT_GRID, factors=4, eps_dependent=False):
    """Product of elementary symplectic factors, optionally different per sample."""
    kinds = rng.choice(["upper", "lower", "dilation", "J"], size=factors)
    K = len(grid)
    out = np.broadcast_to(np.eye(2 * n), (K, 2 * n, 2 * n)).copy()
    for kind in kinds:
        if eps_dependent and kind in ("upper", "lower"):
            base = rng.normal(scale=0.6, size=(n, n))
            noise = rng.normal(size=(K, n, n))
            S = base + grid.eps[:, None, None] * noise
            S = 0.5 * (S + np.swapaxes(S, 1, 2))
            F = np.broadcast_to(np.eye(2 * n), (K, 2 * n, 2 * n)).copy()
            if kind == "upper":
                F[:, :n, n:] = S
            else:
                F[:, n:, :n] = S
        else:
            F = elementary_symplectic(rng, n, kind)
        out = out @ F
    return GenMatrix(grid, out)


def int_net(rng, grid=DEFAULT_GRID, lo=-20, hi=20):
    """Net with small integer samples: arithmetic on it is exact in binary64."""
    return GenScalar(grid, rng.integers(lo, hi + 1, size=len(grid)).astype(float))


def random_scalar(rng, grid=DEFAULT_GRID):
    """Draw from a mix of net families the classifier must handle."""
    kind = rng.integers(0, 7)
    eps = grid.eps
    if kind == 0:
        return GenScalar.constant(float(rng.integers(-5, 6)), grid)
    if kind == 1:
        return GenScalar(grid, float(rng.choice([-3, -1, 1, 2])) * eps ** int(rng.integers(-3, 12)))
    if kind == 2:
        return GenScalar(grid, 1.0 + eps * rng.normal(size=len(grid)))
    if kind == 3:
        return GenScalar(grid, (grid.ks % 2 == rng.integers(0, 2)).astype(float))
    if kind == 4:
        return int_net(rng, grid)
    if kind == 5:
        return GenScalar(grid, eps ** int(rng.integers(9, 20)) * rng.normal(size=len(grid)))
    return GenScalar(grid, rng.normal(size=len(grid)) + 1j * rng.normal(size=len(grid)))


def unit_vector(j, n, grid=DEFAULT_GRID):
    return GenVector.unit(j, n, grid)
