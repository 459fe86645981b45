import numpy as np
import pytest

from gesforge.linalg import DensityOperator, PureState

SQ2 = np.sqrt(2)


def bell(sign=1):
    return PureState(np.array([1, 0, 0, sign]) / SQ2, (2, 2))


def singlet():
    return PureState(np.array([0, 1, -1, 0]) / SQ2, (2, 2))


def random_density(dims, rng, rank=None):
    n = int(np.prod(dims))
    rank = n if rank is None else rank
    g = rng.standard_normal((n, rank)) + 1j * rng.standard_normal((n, rank))
    return DensityOperator.from_matrix(g @ g.conj().T, dims)


def schmidt_state(coeffs, d):
    """State on C^d (x) C^d with prescribed squared Schmidt coefficients, in a random local basis."""
    v = np.zeros(d * d, dtype=complex)
    for i, lam in enumerate(coeffs):
        v[i * d + i] = np.sqrt(lam)
    return v


@pytest.fixture
def rng():
    return np.random.default_rng(20261018)
