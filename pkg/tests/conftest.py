"""
Shared fixtures for the test suite
Standard states, spaces and subalgebras of the worked examples
"""

import numpy as np
import pytest

from gns_entropy.algebra import full_matrix_algebra, generate_algebra
from gns_entropy.numkernel import Tolerance
from gns_entropy.quantum_state import state_from_density, state_from_vector
from gns_entropy.statistics import (
    FERMI4_BLOCK_LABELS, ParticleSpace, Sector, fermi3_choice2, one_particle_subalgebra,
)

SIGMA = [
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
]


def binary(p):
    """Binary entropy in nats"""
    return -sum(x * np.log(x) for x in (p, 1 - p) if x > 0)


def bell_vector(theta):
    v = np.zeros(4, dtype=complex)
    v[1], v[2] = np.cos(theta), -np.sin(theta)
    return v


@pytest.fixture
def tol():
    return Tolerance(1e-10)


@pytest.fixture
def m2():
    return full_matrix_algebra(2)


@pytest.fixture
def m2_state():
    def make(lam):
        return state_from_density(np.diag([lam, 1 - lam]).astype(complex))
    return make


@pytest.fixture
def bell_local(tol):
    return generate_algebra([np.kron(s, np.eye(2)) for s in SIGMA], True, tol)


@pytest.fixture
def bell_state():
    return lambda theta: state_from_vector(bell_vector(theta))


@pytest.fixture(scope="session")
def fermi4_space():
    return ParticleSpace.build(4, 2, Sector.ANTISYMMETRIC, labels=FERMI4_BLOCK_LABELS)


@pytest.fixture(scope="session")
def fermi4_algebra(fermi4_space):
    return one_particle_subalgebra(fermi4_space, [1, 2])


@pytest.fixture(scope="session")
def choice2():
    return fermi3_choice2()


@pytest.fixture(scope="session")
def bose3_space():
    return ParticleSpace.build(3, 2, Sector.SYMMETRIC)


@pytest.fixture(scope="session")
def bose3_algebra(bose3_space):
    return one_particle_subalgebra(bose3_space, [1, 2])


@pytest.fixture
def clean_env(monkeypatch):
    for key in ("GNS_SEED", "GNS_TOL", "GNS_SIZE_CAP", "GNS_CLUSTER_GAP", "GNS_MAX_SPLIT_ATTEMPTS",
                "GNS_WORKERS", "GNS_LOG_LEVEL"):
        monkeypatch.delenv(key, raising=False)
    return monkeypatch
