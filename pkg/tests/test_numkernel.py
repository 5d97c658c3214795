import numpy as np
import pytest

from gns_entropy.exceptions import DimensionMismatch, NonHermitian, NotUnitary
from gns_entropy.numkernel import (
    Tolerance, adjoint, check_unitary, cluster_eigenvalues, hermitian_eigensystem, hs_inner,
    kernel_basis, make_rng, numerical_rank, orthonormalize, random_hermitian, random_unitary,
    range_projector, row_space_basis, spectral_function, unitary_from_hamiltonian,
)


def test_tolerance_floor_and_validation():
    assert Tolerance(0.0).effective == 1e-14
    assert Tolerance(1e-6).effective == 1e-6
    with pytest.raises(ValueError):
        Tolerance(-1.0)


def test_eigensystem_of_pauli_x():
    values, vectors = hermitian_eigensystem(np.array([[0, 1], [1, 0]]))
    np.testing.assert_allclose(values, [-1.0, 1.0], atol=1e-14)
    np.testing.assert_allclose(adjoint(vectors) @ vectors, np.eye(2), atol=1e-14)
    # phase convention: first significant entry is positive real
    for col in vectors.T:
        lead = col[np.argmax(np.abs(col) > 1e-8)]
        assert lead.real > 0 and abs(lead.imag) < 1e-14


def test_eigensystem_rejects_non_hermitian():
    with pytest.raises(NonHermitian):
        hermitian_eigensystem(np.array([[0, 1], [0, 0]]))


def test_rectangular_input_rejected():
    with pytest.raises(DimensionMismatch):
        hermitian_eigensystem(np.zeros((2, 3)))


def test_kernel_and_row_space_are_complementary():
    m = np.array([[1, 1, 0], [2, 2, 0]], dtype=complex)
    null = kernel_basis(m)
    rows = row_space_basis(m)
    assert null.shape == (3, 2)
    assert rows.shape == (3, 1)
    np.testing.assert_allclose(m @ null, 0, atol=1e-12)
    np.testing.assert_allclose(adjoint(rows) @ null, 0, atol=1e-12)
    assert numerical_rank(m) == 1


def test_range_projector():
    p = range_projector(np.diag([2.0, 0.0, 1e-20]))
    np.testing.assert_allclose(p, np.diag([1.0, 0.0, 0.0]), atol=1e-14)


def test_orthonormalize_drops_collinear():
    out = orthonormalize([np.array([1.0, 0.0]), np.array([2.0, 0.0])])
    assert len(out) == 1
    np.testing.assert_allclose(out[0], [1.0, 0.0])


def test_orthonormalize_keeps_orthonormal_matrices():
    e11 = np.diag([1.0, 0.0])
    e22 = np.diag([0.0, 1.0])
    out = orthonormalize([e11, e22])
    assert len(out) == 2
    np.testing.assert_allclose(out[0], e11)
    np.testing.assert_allclose(out[1], e22)
    assert abs(hs_inner(out[0], out[1])) < 1e-14


def test_orthonormalize_with_custom_inner_product():
    g = np.diag([4.0, 1.0])
    inner = lambda a, b: complex(np.conj(a) @ g @ b)  # noqa: E731
    out = orthonormalize([np.array([1.0, 0.0]), np.array([1.0, 1.0])], inner=inner)
    assert len(out) == 2
    np.testing.assert_allclose(out[0], [0.5, 0.0])
    np.testing.assert_allclose(out[1], [0.0, 1.0])


def test_unitary_from_hamiltonian_matches_rotation():
    h = np.array([[0, -1j], [1j, 0]])
    u = unitary_from_hamiltonian(h, 0.3)
    check_unitary(u)
    np.testing.assert_allclose(u, np.cos(0.3) * np.eye(2) + 1j * np.sin(0.3) * h, atol=1e-14)


def test_spectral_function_square_root():
    m = np.array([[2.0, 1.0], [1.0, 2.0]])
    root = spectral_function(m, np.sqrt)
    np.testing.assert_allclose(root @ root, m, atol=1e-12)


def test_check_unitary_rejects():
    with pytest.raises(NotUnitary):
        check_unitary(np.diag([1.0, 2.0]))


def test_random_helpers_are_seed_deterministic():
    a = random_hermitian(4, make_rng(7))
    b = random_hermitian(4, make_rng(7))
    np.testing.assert_array_equal(a, b)
    np.testing.assert_allclose(a, adjoint(a))
    u = random_unitary(5, make_rng(3))
    np.testing.assert_allclose(adjoint(u) @ u, np.eye(5), atol=1e-12)


def test_cluster_eigenvalues():
    groups = cluster_eigenvalues(np.array([0.0, 1e-9, 1.0, 2.0, 2.0 + 1e-12]), 1e-6)
    assert [list(g) for g in groups] == [[0, 1], [2], [3, 4]]
    assert cluster_eigenvalues(np.array([]), 1e-6) == []
