import numpy as np
import pytest

from kreinls import standard_space


@pytest.fixture
def space2():
    """C^2 with J = diag(1, -1)."""
    return standard_space(1, 1)


@pytest.fixture
def space5():
    return standard_space(3, 2)


@pytest.fixture
def jb_alt():
    """The second fundamental decomposition of the 2x2 example:
    span{(2,1)} positive, span{(1,2)} negative."""
    return np.array([[5.0, -4.0], [4.0, -5.0]], dtype=complex) / 3.0


def crandn(rng, *shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def random_selfadjoint(rng, space, norm=1.0):
    """Random [.,.]-selfadjoint operator: J times a Hermitian matrix."""
    m = crandn(rng, space.dim, space.dim)
    h = 0.5 * (m + m.conj().T)
    h *= norm / max(1e-12, np.linalg.norm(h, 2))
    return space.j_ref @ h
