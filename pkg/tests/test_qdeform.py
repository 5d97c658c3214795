import numpy as np
import pytest

from gns_entropy.exceptions import NonPositiveQ, SizeOverflow
from gns_entropy.numkernel import Tolerance
from gns_entropy.qdeform import (
    CoproductGenerator, QSubalgebra, build_q_oscillators, oscillator_relation_defects,
    q_boson_example, q_boson_setup, q_coproduct, q_coproduct_check, q_factorial, q_number,
    su2_relation_defects, uirrep_vector, uq_su2_generators, uq_sun_generators,
)
from gns_entropy.statistics import bose3_entropy

from conftest import binary

Q_VALUES = [0.3, 0.5, 1.0, 2.0, 3.7]


@pytest.mark.parametrize("q", Q_VALUES)
def test_q_number_identities(q):
    assert q_number(0, q) == 0.0
    assert q_number(1, q) == pytest.approx(1.0, abs=1e-12)
    assert q_number(2, q) == pytest.approx(np.sqrt(q) + 1 / np.sqrt(q), abs=1e-12)
    assert q_number(-3, q) == pytest.approx(-q_number(3, q), abs=1e-12)
    assert q_number(4, q) == pytest.approx(q_number(4, 1 / q), abs=1e-12)


@pytest.mark.parametrize("q", Q_VALUES)
def test_q_number_jacobi_like_identity(q):
    """The cyclic sum of [a][b - c] vanishes"""
    for a, b, c in [(1, 2, 3), (2, 5, 7), (0.5, 1.5, 4.0)]:
        total = (q_number(a, q) * q_number(b - c, q)
                 + q_number(b, q) * q_number(c - a, q)
                 + q_number(c, q) * q_number(a - b, q))
        assert total == pytest.approx(0.0, abs=1e-12)


@pytest.mark.parametrize("q", Q_VALUES)
@pytest.mark.parametrize("s, t", [(0.5, 1.25), (2.0, 3.0), (-0.7, 2.3), (1.5, -1.5)])
def test_q_number_addition(q, s, t):
    expected = q ** (-s / 2) * q_number(t, q) + q ** (t / 2) * q_number(s, q)
    assert q_number(s + t, q) == pytest.approx(expected, rel=1e-10, abs=1e-12)


def test_q_number_classical_limit():
    np.testing.assert_allclose(q_number(np.arange(5), 1.0), np.arange(5))
    assert q_number(3, 1.0 + 1e-9) == pytest.approx(3.0, abs=1e-8)
    assert q_factorial(3, 1.0) == 6.0
    assert q_factorial(0, 2.0) == 1.0


def test_non_positive_q():
    with pytest.raises(NonPositiveQ):
        q_number(2, 0.0)
    with pytest.raises(NonPositiveQ):
        build_q_oscillators(2, q=-1.0)


@pytest.mark.parametrize("q", Q_VALUES)
def test_oscillator_relations(q):
    defects = oscillator_relation_defects(build_q_oscillators(2, cutoff=3, q=q))
    for name, value in defects.items():
        assert value < 1e-10, name


@pytest.mark.parametrize("q", Q_VALUES)
def test_su2_relations(q):
    defects = su2_relation_defects(build_q_oscillators(2, cutoff=3, q=q))
    for name, value in defects.items():
        assert value < 1e-10, name


def test_uirrep_vectors_are_normalized():
    system = build_q_oscillators(2, cutoff=2, q=2.0)
    for m in (1, 0, -1):
        v = uirrep_vector(system, 1, m)
        assert np.linalg.norm(v) == pytest.approx(1.0, abs=1e-12)
    with pytest.raises(ValueError):
        uirrep_vector(system, 1, 2)
    with pytest.raises(SizeOverflow):
        uirrep_vector(system, 2, 2)


def test_sun_generators_shape():
    gens = uq_sun_generators(build_q_oscillators(3, cutoff=1, q=1.5))
    assert set(gens["raising"]) == {(0, 1), (0, 2), (1, 2)}
    assert len(gens["cartan"]) == 2


@pytest.mark.parametrize("q", [0.5, 2.0])
def test_coproduct_relation(q):
    assert q_coproduct_check(build_q_oscillators(2, cutoff=2, q=q)) < 1e-10


def test_coproduct_lowering_on_triplet_top():
    """D(J-) on two top doublet states splits with coefficients q^{-1/4} and q^{1/4}"""
    q = 2.0
    system = build_q_oscillators(2, cutoff=2, q=q)
    top = uirrep_vector(system, 0.5, 0.5)
    low = uirrep_vector(system, 0.5, -0.5)
    image = q_coproduct(CoproductGenerator.LOWERING, system) @ np.kron(top, top)
    assert np.vdot(np.kron(top, low), image) == pytest.approx(q ** -0.25)
    assert np.vdot(np.kron(low, top), image) == pytest.approx(q ** 0.25)


def test_raising_generator_on_doublet():
    system = build_q_oscillators(2, cutoff=2, q=3.0)
    gens = uq_su2_generators(system)
    up = uirrep_vector(system, 0.5, 0.5)
    down = uirrep_vector(system, 0.5, -0.5)
    np.testing.assert_allclose(gens.raising @ down, up, atol=1e-12)


@pytest.mark.parametrize("q", Q_VALUES)
def test_q_boson_entropy_is_flat_in_q(q):
    theta, phi = 1.0, 0.7
    entropy, gns_dim = q_boson_example(theta, phi, q)
    assert entropy == pytest.approx(bose3_entropy(theta, phi), abs=1e-9)
    assert gns_dim == 6


@pytest.mark.parametrize("q", [0.5, 2.0])
def test_q_boson_triplet_subalgebra(q):
    theta, phi = 1.0, 0.7
    entropy, _ = q_boson_example(theta, phi, q, subalgebra=QSubalgebra.TRIPLET)
    assert entropy == pytest.approx(binary(np.sin(theta) ** 2 * np.cos(phi) ** 2), abs=1e-9)


def test_q_boson_setup_dimensions():
    setup = q_boson_setup(0.3, 0.2, 2.0, tol=Tolerance(1e-10))
    assert setup.algebra.dim == 14
    assert setup.state.shape == (6,)
    assert np.linalg.norm(setup.state) == pytest.approx(1.0)
    assert q_boson_setup(0.3, 0.2, 2.0, QSubalgebra.TRIPLET).algebra.dim == 10
