"""
q-deformed oscillators
q-numbers, dressed oscillators on truncated Fock spaces, U_q(su(2)) via the Schwinger
construction, its coproduct, and the two-quantum q-boson example
"""

import itertools
from dataclasses import dataclass
from enum import Enum
from functools import reduce
from typing import Dict, List, Optional, Tuple, Union

import numpy as np
import structlog

from .algebra import MatrixAlgebra, block_structure, generate_algebra
from .config import DEFAULT_SIZE_CAP
from .exceptions import DimensionMismatch, NonPositiveQ, SizeOverflow
from .gns import DecompositionMode, build_gns, decompose, gns_entropy
from .numkernel import DEFAULT_TOL, ComplexMatrix, Tolerance, adjoint, max_abs, spectral_function
from .quantum_state import state_from_vector

logger = structlog.get_logger(__name__)


def _check_q(q: float) -> float:
    if not np.isreal(q) or q <= 0:
        raise NonPositiveQ(f"q must be real and positive, got {q}")
    return float(q)


def q_number(s, q: float):
    """
    [s]_q = (q^{s/2} - q^{-s/2}) / (q^{1/2} - q^{-1/2})

    Evaluated as sinh(s h/2) / sinh(h/2) with h = log q, which is continuous at q = 1
    where the value is s. Accepts scalars or arrays.
    """
    q = _check_q(q)
    s = np.asarray(s, dtype=float)
    h = np.log(q)
    if h == 0.0:
        out = s.copy()
    else:
        out = np.sinh(0.5 * s * h) / np.sinh(0.5 * h)
    return float(out) if out.ndim == 0 else out


def q_factorial(k: int, q: float) -> float:
    """[k]_q! with [0]_q! = 1"""
    return float(np.prod([q_number(i, q) for i in range(1, k + 1)])) if k > 0 else 1.0


def _dressing(numbers: np.ndarray, q: float) -> np.ndarray:
    """sqrt([N]_q / N), equal to 1 at N = 0"""
    out = np.ones_like(numbers, dtype=float)
    nonzero = numbers > 0
    out[nonzero] = np.sqrt(q_number(numbers[nonzero], q) / numbers[nonzero])
    return out


@dataclass(frozen=True, eq=False)
class QOscillatorSystem:
    """n commuting q-oscillators on the truncated Fock space (cutoff + 1)^n"""
    modes: int
    cutoff: int
    q: float
    annihilators: List[ComplexMatrix]
    numbers: List[ComplexMatrix]
    plain_annihilators: List[ComplexMatrix]
    occupations: np.ndarray

    @property
    def dim(self) -> int:
        return int(self.occupations.shape[0])

    @property
    def creators(self) -> List[ComplexMatrix]:
        return [adjoint(a) for a in self.annihilators]

    def vacuum(self) -> np.ndarray:
        v = np.zeros(self.dim, dtype=np.complex128)
        v[0] = 1.0
        return v

    def basis_state(self, occupation) -> np.ndarray:
        v = np.zeros(self.dim, dtype=np.complex128)
        v[self.index(occupation)] = 1.0
        return v

    def index(self, occupation) -> int:
        return int(np.ravel_multi_index(tuple(occupation), (self.cutoff + 1,) * self.modes))

    def sub_cutoff_mask(self, mode: int) -> np.ndarray:
        """Basis states with fewer than cutoff quanta in the given mode"""
        return self.occupations[:, mode] < self.cutoff

    def create(self, *modes: int) -> np.ndarray:
        """A^dagger_{m1} A^dagger_{m2} ... |0>, modes 0-based"""
        v = self.vacuum()
        for m in reversed(modes):
            v = self.creators[m] @ v
        return v


def build_q_oscillators(n: int, cutoff: int = 2, q: float = 1.0,
                        size_cap: int = DEFAULT_SIZE_CAP) -> QOscillatorSystem:
    """
    Dressed oscillators A = a sqrt([N]_q / N) for n modes

    Mode 0 is the most significant tensor factor.
    """
    q = _check_q(q)
    if n < 1 or cutoff < 1:
        raise ValueError("Need at least one mode and a cutoff of at least 1")
    dim = (cutoff + 1) ** n
    if dim > size_cap:
        raise SizeOverflow(f"Fock space dimension {dim} exceeds cap {size_cap}")

    levels = np.arange(cutoff + 1)
    a = np.diag(np.sqrt(levels[1:]), 1).astype(np.complex128)
    number = np.diag(levels).astype(np.complex128)
    dressed = a @ np.diag(_dressing(levels, q))
    eye = np.eye(cutoff + 1, dtype=np.complex128)

    def embed(op, mode):
        return reduce(np.kron, [op if i == mode else eye for i in range(n)])

    occupations = np.array(list(itertools.product(range(cutoff + 1), repeat=n)), dtype=int)
    system = QOscillatorSystem(
        modes=n,
        cutoff=cutoff,
        q=q,
        annihilators=[embed(dressed, i) for i in range(n)],
        numbers=[embed(number, i) for i in range(n)],
        plain_annihilators=[embed(a, i) for i in range(n)],
        occupations=occupations,
    )
    logger.debug("q_oscillators_built", modes=n, cutoff=cutoff, q=q, dim=dim)
    return system


def oscillator_relation_defects(system: QOscillatorSystem) -> Dict[str, float]:
    """Deviations of the q-oscillator relations on the sub-cutoff states of each mode"""
    q = system.q
    out = {"number_raising": 0.0, "number_lowering": 0.0, "q_commutator": 0.0, "dressing": 0.0}
    for mode in range(system.modes):
        a = system.annihilators[mode]
        ad = adjoint(a)
        n = system.numbers[mode]
        mask = system.sub_cutoff_mask(mode)
        occ = system.occupations[:, mode].astype(float)
        out["number_raising"] = max(out["number_raising"], max_abs((n @ ad - ad @ n - ad)[:, mask]))
        out["number_lowering"] = max(out["number_lowering"], max_abs(n @ a - a @ n + a))
        relation = a @ ad - np.sqrt(q) * ad @ a - np.diag(q ** (-occ / 2))
        out["q_commutator"] = max(out["q_commutator"], max_abs(relation[np.ix_(mask, mask)]))
        out["dressing"] = max(out["dressing"], max_abs(ad @ a - np.diag(q_number(occ, q))))
    return out


@dataclass(frozen=True, eq=False)
class SuTwoGenerators:
    raising: ComplexMatrix
    lowering: ComplexMatrix
    cartan: ComplexMatrix


def uq_su2_generators(system: QOscillatorSystem, modes: Tuple[int, int] = (0, 1)) -> SuTwoGenerators:
    """J+ = A1^dag A2, J- = A2^dag A1, J3 = (N1 - N2)/2"""
    if system.modes < 2:
        raise DimensionMismatch("The Schwinger construction needs at least two modes")
    i, j = modes
    a_i, a_j = system.annihilators[i], system.annihilators[j]
    return SuTwoGenerators(
        raising=adjoint(a_i) @ a_j,
        lowering=adjoint(a_j) @ a_i,
        cartan=0.5 * (system.numbers[i] - system.numbers[j]),
    )


def uq_sun_generators(system: QOscillatorSystem, n: Optional[int] = None) -> Dict[str, Union[ComplexMatrix, Dict]]:
    """Cartan-Chevalley generators E_ij = A_i^dag A_j (i < j), their adjoints and H_l"""
    n = n or system.modes
    if n > system.modes or n < 2:
        raise DimensionMismatch(f"Need 2 <= n <= {system.modes}")
    a = system.annihilators
    raising = {(i, j): adjoint(a[i]) @ a[j] for i in range(n) for j in range(i + 1, n)}
    lowering = {(j, i): adjoint(m) for (i, j), m in raising.items()}
    cartan = [0.5 * (system.numbers[l] - system.numbers[l + 1]) for l in range(n - 1)]
    return {"raising": raising, "lowering": lowering, "cartan": cartan}


def schwinger_sector_mask(system: QOscillatorSystem, modes: Tuple[int, int] = (0, 1)) -> np.ndarray:
    """States whose quanta in the two modes do not exceed the cutoff"""
    return system.occupations[:, list(modes)].sum(axis=1) <= system.cutoff


def q_bracket(generator: ComplexMatrix, q: float) -> ComplexMatrix:
    """[2 J3]_q by spectral calculus"""
    return spectral_function(generator, lambda lam: q_number(2 * lam, q))


def su2_relation_defects(system: QOscillatorSystem) -> Dict[str, float]:
    gens = uq_su2_generators(system)
    mask = schwinger_sector_mask(system)
    sub = np.ix_(mask, mask)
    commutator = gens.raising @ gens.lowering - gens.lowering @ gens.raising
    return {
        "cartan_raising": max_abs(gens.cartan @ gens.raising - gens.raising @ gens.cartan - gens.raising),
        "cartan_lowering": max_abs(gens.cartan @ gens.lowering - gens.lowering @ gens.cartan + gens.lowering),
        "q_commutator": max_abs((commutator - q_bracket(gens.cartan, system.q))[sub]),
    }


def uirrep_vector(system: QOscillatorSystem, j: float, m: float) -> np.ndarray:
    """|j m> = (A1^dag)^{j+m} (A2^dag)^{j-m} |0> / sqrt([j+m]_q! [j-m]_q!)"""
    up, down = int(round(j + m)), int(round(j - m))
    if up < 0 or down < 0:
        raise ValueError(f"|m| must not exceed j (j={j}, m={m})")
    if max(up, down) > system.cutoff:
        raise SizeOverflow(f"State |{j},{m}> needs more than {system.cutoff} quanta per mode")
    v = system.create(*([0] * up + [1] * down))
    return v / np.sqrt(q_factorial(up, system.q) * q_factorial(down, system.q))


class CoproductGenerator(str, Enum):
    RAISING = "J+"
    LOWERING = "J-"
    CARTAN = "J3"


def q_coproduct(generator: Union[CoproductGenerator, str], system: QOscillatorSystem) -> ComplexMatrix:
    """
    Coproduct on the two-particle space H (x) H of a two-mode system:
    D(J+-) = q^{-J3/2} (x) J+- + J+- (x) q^{J3/2},  D(J3) = 1 (x) J3 + J3 (x) 1

    On two doublet top states J3 = 1/2, so D(J-) gives coefficients q^{-1/4} and q^{1/4}.
    The q^{-1/2}, q^{1/2} sometimes quoted for this action is not what the formula above
    produces; the general formula is the one implemented.
    """
    generator = CoproductGenerator(generator)
    gens = uq_su2_generators(system)
    eye = np.eye(system.dim, dtype=np.complex128)
    if generator == CoproductGenerator.CARTAN:
        return np.kron(eye, gens.cartan) + np.kron(gens.cartan, eye)
    op = gens.raising if generator == CoproductGenerator.RAISING else gens.lowering
    q = system.q
    down = spectral_function(gens.cartan, lambda lam: q ** (-lam / 2))
    up = spectral_function(gens.cartan, lambda lam: q ** (lam / 2))
    return np.kron(down, op) + np.kron(op, up)


def q_coproduct_check(system: QOscillatorSystem) -> float:
    """Deviation of [D(J+), D(J-)] from [2 D(J3)]_q on pairs of Schwinger-sector states"""
    jp = q_coproduct(CoproductGenerator.RAISING, system)
    jm = q_coproduct(CoproductGenerator.LOWERING, system)
    j3 = q_coproduct(CoproductGenerator.CARTAN, system)
    mask = schwinger_sector_mask(system)
    pair_mask = np.kron(mask, mask).astype(bool)
    sub = np.ix_(pair_mask, pair_mask)
    return max_abs((jp @ jm - jm @ jp - q_bracket(j3, system.q))[sub])


class QSubalgebra(str, Enum):
    ONE_PARTICLE = "one_particle"
    TRIPLET = "triplet"


# Occupations of the two-quantum sector of three modes, ordered e1e1, e1e2, e1e3, e2e2, e2e3, e3e3
TWO_QUANTUM_SECTOR: Tuple[Tuple[int, int, int], ...] = (
    (2, 0, 0), (1, 1, 0), (1, 0, 1), (0, 2, 0), (0, 1, 1), (0, 0, 2),
)


@dataclass(frozen=True, eq=False)
class QBosonSetup:
    """Two q-bosons on three modes: sector coordinates, q-basis, state and observed algebra"""
    system: QOscillatorSystem
    sector_isometry: np.ndarray
    q_basis: np.ndarray
    state: np.ndarray
    algebra: MatrixAlgebra
    block_sizes: Tuple[int, ...] = (3, 2, 1)


def _q_basis(system: QOscillatorSystem, sector: np.ndarray) -> np.ndarray:
    """Columns |1>,|0>,|-1> (triplet), |1/2>,|-1/2> (doublet), |~0> (singlet) in sector coordinates"""
    norm2 = np.sqrt(q_number(2, system.q))
    vectors = [
        system.create(0, 0) / norm2,
        system.create(0, 1),
        system.create(1, 1) / norm2,
        system.create(0, 2),
        system.create(1, 2),
        system.create(2, 2) / norm2,
    ]
    return np.stack([adjoint(sector) @ v for v in vectors], axis=1)


def q_boson_state(theta: float, phi: float, system: QOscillatorSystem, sector: np.ndarray) -> np.ndarray:
    norm2 = np.sqrt(q_number(2, system.q))
    v = (np.sin(theta) * np.cos(phi) * system.create(0, 1)
         + np.sin(theta) * np.sin(phi) * system.create(0, 2)
         + np.cos(theta) * system.create(2, 2) / norm2)
    return adjoint(sector) @ v


def q_boson_setup(theta: float, phi: float, q: float,
                  subalgebra: Union[QSubalgebra, str] = QSubalgebra.ONE_PARTICLE,
                  tol: Tolerance = DEFAULT_TOL, size_cap: int = DEFAULT_SIZE_CAP) -> QBosonSetup:
    """
    State and observed algebra on the six-dimensional two-quantum sector

    one_particle: block-diagonal algebra on the triplet, doublet and singlet
    triplet: span of |i>_q <j|_q over the triplet plus the identity
    """
    subalgebra = QSubalgebra(subalgebra)
    system = build_q_oscillators(3, cutoff=2, q=q, size_cap=size_cap)
    sector = np.stack([system.basis_state(occ) for occ in TWO_QUANTUM_SECTOR], axis=1)
    basis = _q_basis(system, sector)
    state = q_boson_state(theta, phi, system, sector)

    if subalgebra == QSubalgebra.ONE_PARTICLE:
        groups = [(0, 3), (3, 5), (5, 6)]
    else:
        groups = [(0, 3)]
    gens = []
    for start, stop in groups:
        for i in range(start, stop):
            for j in range(start, stop):
                gens.append(np.outer(basis[:, i], np.conj(basis[:, j])))
    algebra = generate_algebra(gens, include_ambient_identity=True, tol=tol)
    return QBosonSetup(system=system, sector_isometry=sector, q_basis=basis,
                       state=state, algebra=algebra)


def q_boson_example(theta: float, phi: float, q: float, tol: Tolerance = DEFAULT_TOL,
                    seed: int = 0,
                    subalgebra: Union[QSubalgebra, str] = QSubalgebra.ONE_PARTICLE) -> Tuple[float, int]:
    """
    Canonical GNS entropy of the q-boson state on the observed subalgebra

    Returns:
        (entropy, dimension of the GNS space)
    """
    setup = q_boson_setup(theta, phi, q, subalgebra, tol)
    omega = state_from_vector(setup.state)
    gns = build_gns(omega, setup.algebra, tol)
    blocks = block_structure(setup.algebra, seed=seed, tol=tol)
    decomposition = decompose(gns, DecompositionMode.CANONICAL_SCHMIDT, seed=seed, tol=tol,
                              blocks=blocks)
    entropy = gns_entropy(gns, decomposition, tol=tol)
    logger.debug("q_boson_example", theta=theta, phi=phi, q=q, entropy=entropy, gns_dim=gns.dim)
    return entropy, gns.dim
