import numpy as np
import pytest

from gns_entropy.dynamics import (
    apply_kraus, evolve_state, family_kraus_setup, kraus_between, kraus_maps, rank_events,
    restricted_trajectory, rotation_hamiltonian, trajectory_entropy_check,
)
from gns_entropy.exceptions import DimensionMismatch, NonHermitian, RankIncrease
from gns_entropy.numkernel import make_rng
from gns_entropy.quantum_state import state_from_density, state_from_vector

from conftest import binary

TIMES = np.linspace(0.0, np.pi, 101)


@pytest.fixture(scope="module")
def choice2_trajectory(choice2):
    h = rotation_hamiltonian(choice2.f_basis[:, 0], choice2.f_basis[:, 2])
    omega0 = state_from_vector(choice2.state_vector(0.0))
    return restricted_trajectory(omega0, h, choice2.algebra, TIMES, seed=0)


def test_rotation_hamiltonian_rotates_plane():
    u = np.array([1.0, 0.0, 0.0])
    v = np.array([0.0, 0.0, 1.0])
    omega = evolve_state(state_from_vector(u), rotation_hamiltonian(u, v), 0.4)
    expected = np.cos(0.4) * u + np.sin(0.4) * v
    np.testing.assert_allclose(omega.density, np.outer(expected, expected), atol=1e-12)



def test_full_spectrum_is_constant_while_restricted_rank_jumps(choice2, choice2_trajectory):
    h = rotation_hamiltonian(choice2.f_basis[:, 0], choice2.f_basis[:, 2])
    pure = state_from_vector(choice2.state_vector(0.0))
    mixed = state_from_density(0.7 * pure.density
                               + 0.3 * np.outer(choice2.f_basis[:, 1], choice2.f_basis[:, 1].conj()))
    for omega0 in (pure, mixed):
        initial = np.linalg.eigvalsh(omega0.density)
        for t in TIMES:
            np.testing.assert_allclose(np.linalg.eigvalsh(evolve_state(omega0, h, t).density), initial,
                                       atol=1e-12)
    assert len(set(choice2_trajectory.ranks)) > 1

def test_evolve_state_validation():
    omega = state_from_vector([1.0, 0.0])
    with pytest.raises(DimensionMismatch):
        evolve_state(omega, np.eye(3), 1.0)
    with pytest.raises(NonHermitian):
        evolve_state(omega, np.array([[0, 1], [0, 0]]), 1.0)


def test_rank_sequence_across_blocks(choice2_trajectory):
    ranks = choice2_trajectory.ranks
    assert ranks[0] == 1
    assert ranks[25] == 2
    assert ranks[50] == 1
    events = rank_events(choice2_trajectory)
    assert events[0].rank_before == 1 and events[0].rank_after == 2
    assert any(e.rank_before == 2 and e.rank_after == 1 for e in events)


def test_entropy_follows_closed_form(choice2_trajectory):
    expected = [binary(np.cos(t) ** 2) for t in TIMES]
    np.testing.assert_allclose(choice2_trajectory.entropies, expected, atol=1e-9)
    assert trajectory_entropy_check(choice2_trajectory) < 1e-9


def test_entropy_is_periodic(choice2_trajectory):
    s = choice2_trajectory.entropies
    np.testing.assert_allclose(s[:51], s[50:], atol=1e-9)


def test_threaded_trajectory_matches_serial(choice2, choice2_trajectory):
    h = rotation_hamiltonian(choice2.f_basis[:, 0], choice2.f_basis[:, 2])
    omega0 = state_from_vector(choice2.state_vector(0.0))
    threaded = restricted_trajectory(omega0, h, choice2.algebra, TIMES[:20], seed=0, workers=4)
    np.testing.assert_allclose(threaded.entropies, choice2_trajectory.entropies[:20], atol=1e-12)


def test_times_must_increase(choice2):
    omega0 = state_from_vector(choice2.state_vector(0.0))
    with pytest.raises(ValueError):
        restricted_trajectory(omega0, np.zeros((3, 3)), choice2.algebra, [0.0, 0.0])


def test_kraus_on_interior_pairs(choice2):
    setup = family_kraus_setup(choice2.state_vector, choice2.algebra, seed=0)
    angles = make_rng(11).uniform(0.05, np.pi / 2 - 0.05, size=(50, 2))
    for a, b in angles:
        pair = kraus_maps(a, b, setup)
        assert pair.residual <= 1e-9
    assert setup.entropy(np.pi / 4) == pytest.approx(np.log(2))


def test_kraus_cannot_raise_rank(choice2):
    setup = family_kraus_setup(choice2.state_vector, choice2.algebra, seed=0)
    with pytest.raises(RankIncrease):
        kraus_maps(0.0, np.pi / 4, setup)
    pair = kraus_maps(np.pi / 4, 0.0, setup)
    assert pair.residual <= 1e-9


def test_kraus_between_non_commuting_densities():
    rho_from = np.diag([0.7, 0.3]).astype(complex)
    plus = np.array([1.0, 1.0]) / np.sqrt(2)
    minus = np.array([1.0, -1.0]) / np.sqrt(2)
    rho_to = 0.6 * np.outer(plus, plus) + 0.4 * np.outer(minus, minus)
    maps = kraus_between(rho_from, rho_to)
    np.testing.assert_allclose(apply_kraus(maps, rho_from), rho_to, atol=1e-12)


def test_kraus_between_commuting_densities():
    plus = np.array([1.0, 1.0]) / np.sqrt(2)
    maps = kraus_between(np.eye(2) / 2, np.outer(plus, plus))
    np.testing.assert_allclose(apply_kraus(maps, np.eye(2) / 2), np.outer(plus, plus), atol=1e-12)
