import numpy as np
import pytest

from gns_entropy.algebra import block_structure, generate_algebra
from gns_entropy.exceptions import DimensionMismatch, NotPositive
from gns_entropy.gns import (
    DecompositionMode, basis_change_split, build_gns, decompose, gns_entropy, verify_gns,
)
from gns_entropy.quantum_state import (
    LogBase, RestrictedState, canonical_entropy, restrict, state_from_vector,
)
from gns_entropy.statistics import fermi4_state

from conftest import SIGMA, binary


@pytest.mark.parametrize("lam, dim", [(0.0, 2), (1.0, 2), (0.3, 4), (0.5, 4)])
def test_m2_gns_dimensions(m2, m2_state, lam, dim):
    gns = build_gns(m2_state(lam), m2)
    assert gns.dim == dim
    assert gns.dim + gns.ideal_dim == m2.dim
    assert gns.cyclic_norm == pytest.approx(1.0)


def test_m2_half_splits_evenly(m2, m2_state):
    gns = build_gns(m2_state(0.5), m2)
    decomposition = decompose(gns, DecompositionMode.CANONICAL_SCHMIDT)
    np.testing.assert_allclose(decomposition.normalized_weights, [0.5, 0.5], atol=1e-12)
    assert decomposition.irreducible_dims == [2, 2]
    assert gns_entropy(gns, decomposition) == pytest.approx(np.log(2))
    assert gns_entropy(gns, decomposition, LogBase.BINARY) == pytest.approx(1.0)


def test_m2_pure_state_is_defining_representation(m2, m2_state):
    gns = build_gns(m2_state(0.0), m2)
    diagnostics = verify_gns(gns, m2_state(0.0))
    assert diagnostics.reconstruction < 1e-12
    assert diagnostics.cyclic
    decomposition = decompose(gns)
    assert decomposition.irreducible_dims == [2]
    assert gns_entropy(gns, decomposition) == 0.0


def test_gns_from_restricted_state(bell_local, bell_state):
    restricted = restrict(bell_state(0.7), bell_local)
    gns = build_gns(restricted, bell_local)
    assert gns.dim == 4
    decomposition = decompose(gns)
    assert gns_entropy(gns, decomposition) == pytest.approx(binary(np.cos(0.7) ** 2), abs=1e-9)


def test_representation_respects_classes(m2, m2_state):
    gns = build_gns(m2_state(0.3), m2)
    a = np.array([[1, 2], [0, 1j]])
    b = np.array([[0, 1], [1, 0]])
    np.testing.assert_allclose(gns.represent(a) @ gns.class_of(b), gns.class_of(a @ b), atol=1e-12)


def test_non_positive_functional_rejected(m2):
    values = m2.flat_basis.conj() @ np.diag([1.5, -0.5]).reshape(-1)
    with pytest.raises(NotPositive):
        build_gns(RestrictedState(subalgebra=m2, values=values), m2)


@pytest.mark.parametrize("theta", [0.3, np.pi / 4, 1.0])
def test_fermion_d4_gns(fermi4_space, fermi4_algebra, theta):
    omega = state_from_vector(fermi4_state(theta, fermi4_space))
    gns = build_gns(omega, fermi4_algebra)
    assert gns.dim == 4
    diagnostics = verify_gns(gns, omega)
    assert diagnostics.max_deviation() < 1e-9
    assert diagnostics.isomorphic_groups == [[0, 1]]
    decomposition = decompose(gns)
    s = gns_entropy(gns, decomposition)
    assert s == pytest.approx(binary(np.cos(theta) ** 2), abs=1e-9)
    assert s == pytest.approx(canonical_entropy(omega, fermi4_algebra).entropy, abs=1e-9)


@pytest.mark.parametrize("theta", [0.0, np.pi / 2])
def test_fermion_d4_endpoints(fermi4_space, fermi4_algebra, theta):
    omega = state_from_vector(fermi4_state(theta, fermi4_space))
    gns = build_gns(omega, fermi4_algebra)
    assert gns.dim == 2
    assert gns_entropy(gns, decompose(gns)) == 0.0


@pytest.mark.parametrize("theta, dim", [(0.0, 2), (1.0, 3), (np.pi / 2, 1)])
def test_choice2_gns_dimensions(choice2, theta, dim):
    gns = build_gns(state_from_vector(choice2.state_vector(theta)), choice2.algebra)
    assert gns.dim == dim


def _canonical_and_random(omega, algebra, seeds=100):
    gns = build_gns(omega, algebra)
    blocks = block_structure(algebra, seed=0)
    canonical = gns_entropy(gns, decompose(gns, DecompositionMode.CANONICAL_SCHMIDT, blocks=blocks))
    randoms = [gns_entropy(gns, decompose(gns, DecompositionMode.RANDOM_SPLIT, seed=s, blocks=blocks))
               for s in range(seeds)]
    return canonical, randoms


@pytest.mark.parametrize("lam", [0.5, 0.3])
def test_canonical_is_minimal_for_m2(m2, m2_state, lam):
    canonical, randoms = _canonical_and_random(m2_state(lam), m2)
    assert canonical == pytest.approx(binary(lam), abs=1e-9)
    assert min(randoms) >= canonical - 1e-9
    if lam != 0.5:
        # a maximally entangled cyclic vector gives the same weights for every split
        assert max(randoms) > canonical + 1e-6


@pytest.mark.parametrize("theta", [np.pi / 4, 0.3])
def test_canonical_is_minimal_for_fermions(fermi4_space, fermi4_algebra, theta):
    omega = state_from_vector(fermi4_state(theta, fermi4_space))
    canonical, randoms = _canonical_and_random(omega, fermi4_algebra)
    assert min(randoms) >= canonical - 1e-9
    if theta != np.pi / 4:
        assert max(randoms) > canonical + 1e-6


def test_isotypic_weights_are_seed_independent(m2, m2_state):
    gns = build_gns(m2_state(0.3), m2)
    weights = [decompose(gns, DecompositionMode.ISOTYPIC_ONLY, seed=s).normalized_weights
               for s in range(5)]
    for w in weights:
        np.testing.assert_allclose(w, [1.0], atol=1e-12)


def test_random_split_weights_sum_to_one(bell_local, bell_state):
    gns = build_gns(bell_state(0.5), bell_local)
    for seed in range(10):
        w = decompose(gns, DecompositionMode.RANDOM_SPLIT, seed=seed).normalized_weights
        assert np.all(w >= -1e-12)
        assert w.sum() == pytest.approx(1.0, abs=1e-9)


def test_basis_change_split_raises_entropy(m2, m2_state):
    gns = build_gns(m2_state(0.5), m2)
    xi = np.array([1.0, 1.0]) / np.sqrt(2)
    eta = np.array([1.0, -1.0]) / np.sqrt(2)
    rotated = basis_change_split(gns, [xi, eta])
    assert rotated.kind == DecompositionMode.RANDOM_SPLIT
    assert gns_entropy(gns, rotated) >= np.log(2) - 1e-9
    with pytest.raises(DimensionMismatch):
        basis_change_split(gns, [np.ones(3)])
    with pytest.raises(ValueError):
        basis_change_split(gns, [np.array([1.0, 0.0]), np.array([1.0, 1.0])])


def test_diagnostics_on_mixed_state(m2, m2_state):
    omega = m2_state(0.2)
    gns = build_gns(omega, m2)
    diagnostics = verify_gns(gns, omega)
    assert diagnostics.homomorphism < 1e-9
    assert diagnostics.star < 1e-9
    assert diagnostics.reconstruction < 1e-9
    assert diagnostics.cyclicity_rank == 4
    assert diagnostics.isomorphic_groups == [[0, 1]]


def test_restricted_state_must_live_on_the_same_span(bell_state, bell_local):
    right_qubit = generate_algebra([np.kron(np.eye(2), s) for s in SIGMA])
    assert right_qubit.dim == bell_local.dim
    with pytest.raises(DimensionMismatch):
        build_gns(restrict(bell_state(0.4), right_qubit), bell_local)


def test_restricted_state_is_rebased_onto_an_equal_span(m2, m2_state):
    pauli = generate_algebra(SIGMA)
    omega = m2_state(0.3)
    direct = build_gns(omega, m2)
    rebased = build_gns(restrict(omega, pauli), m2)
    assert rebased.dim == direct.dim == 4
    assert gns_entropy(rebased, decompose(rebased)) == pytest.approx(
        gns_entropy(direct, decompose(direct)), abs=1e-9)
