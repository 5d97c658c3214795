import numpy as np
import pytest

from gns_entropy.algebra import (
    MatrixAlgebra, block_structure, center, commutant, direct_sum, from_basis, generate_algebra,
    intersect, matrix_unit_defect,
)
from gns_entropy.exceptions import DegenerateSplit, DimensionMismatch, NotUnital

from conftest import SIGMA


def test_pauli_generators_give_full_m2():
    algebra = generate_algebra(SIGMA)
    assert algebra.dim == 4
    assert algebra.has_ambient_identity
    closure = algebra.check_closure()
    assert closure["adjoint"] < 1e-12
    assert closure["product"] < 1e-12


def test_single_projector_generates_diagonal_algebra():
    algebra = generate_algebra([np.diag([1.0, 0.0])])
    assert algebra.dim == 2
    assert algebra.contains(np.diag([3.0, -1.0]))
    assert not algebra.contains(np.array([[0, 1], [0, 0]]))


def test_non_unital_generation_keeps_own_unit():
    p = np.diag([1.0, 0.0, 0.0])
    algebra = generate_algebra([p], include_ambient_identity=False)
    assert algebra.dim == 1
    assert not algebra.has_ambient_identity
    np.testing.assert_allclose(algebra.unit(), p, atol=1e-12)


def test_generators_of_mixed_size_rejected():
    with pytest.raises(DimensionMismatch):
        generate_algebra([np.eye(2), np.eye(3)])


def test_coordinates_round_trip(m2):
    x = np.array([[1, 2j], [3, 4]])
    np.testing.assert_allclose(m2.element(m2.coordinates(x)), x)


def test_unit_of_non_unital_span_fails():
    nilpotent = np.array([[0, 1], [0, 0]], dtype=complex)
    algebra = from_basis([nilpotent], 2)
    with pytest.raises(NotUnital):
        algebra.unit()


def test_commutant_of_local_qubit_algebra(bell_local):
    comm = commutant(bell_local)
    assert comm.dim == 4
    for s in SIGMA:
        assert comm.contains(np.kron(np.eye(2), s))


def test_center_of_block_algebra():
    algebra = direct_sum(generate_algebra([np.kron(np.diag([1.0, 0.0]), s) for s in SIGMA],
                                          include_ambient_identity=False),
                         generate_algebra([np.kron(np.diag([0.0, 1.0]), s) for s in SIGMA],
                                          include_ambient_identity=False))
    assert algebra.dim == 8
    assert center(algebra).dim == 2


def test_intersect_of_diagonal_and_local():
    diag = generate_algebra([np.diag([1.0, 0.0, 0.0, 0.0]), np.diag([0.0, 1.0, 0.0, 0.0]),
                             np.diag([0.0, 0.0, 1.0, 0.0])])
    local = generate_algebra([np.kron(s, np.eye(2)) for s in SIGMA])
    both = intersect(diag, local)
    assert both.dim == 2
    assert both.contains(np.kron(SIGMA[2], np.eye(2)))


def test_block_structure_of_full_algebra(m2):
    blocks = block_structure(m2, seed=1)
    assert blocks.block_dims == [2]
    assert blocks.multiplicities == [1]
    assert matrix_unit_defect(blocks) < 1e-10


def test_block_structure_of_local_algebra_has_multiplicity(bell_local):
    blocks = block_structure(bell_local, seed=0)
    assert blocks.block_dims == [2]
    assert blocks.multiplicities == [2]
    np.testing.assert_allclose(blocks.unit(), np.eye(4), atol=1e-10)
    assert matrix_unit_defect(blocks) < 1e-10


def test_fermion_d4_algebra_structure(fermi4_algebra):
    assert fermi4_algebra.dim == 6
    blocks = block_structure(fermi4_algebra, seed=3)
    assert blocks.block_dims == [2, 1, 1]
    assert blocks.multiplicities == [2, 1, 1]
    assert matrix_unit_defect(blocks) < 1e-10


def test_boson_algebra_dimension(bose3_algebra):
    assert bose3_algebra.dim == 14
    blocks = block_structure(bose3_algebra, seed=0)
    assert blocks.block_dims == [3, 2, 1]
    assert blocks.multiplicities == [1, 1, 1]


@pytest.mark.parametrize("seed", [0, 1, 2, 17])
def test_block_dims_are_seed_independent(choice2, seed):
    blocks = block_structure(choice2.algebra, seed=seed)
    assert blocks.block_dims == [2, 1]
    assert choice2.algebra.dim == 5


def test_degenerate_split_after_exhausted_attempts(bose3_algebra):
    with pytest.raises(DegenerateSplit):
        block_structure(bose3_algebra, seed=0, cluster_gap=10.0, max_attempts=2)


@pytest.mark.parametrize("fixture", ["m2", "bell_local", "fermi4_algebra"])
def test_double_commutant_returns_the_algebra(request, fixture):
    algebra = request.getfixturevalue(fixture)
    double = commutant(commutant(algebra))
    assert double.dim == algebra.dim
    for b in double.basis:
        assert algebra.contains(b)
    for b in algebra.basis:
        assert double.contains(b)


def test_algebra_copies_caller_basis():
    basis = np.eye(2, dtype=complex).reshape(1, 2, 2) / np.sqrt(2)
    algebra = MatrixAlgebra(ambient_dim=2, basis=basis)
    assert basis.flags.writeable
    basis[0, 0, 0] = 5.0
    assert algebra.basis[0, 0, 0] == pytest.approx(1 / np.sqrt(2))
    assert not algebra.basis.flags.writeable
