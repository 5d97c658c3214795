"""
Identical-particle sectors
Tensor powers, Bose/Fermi sectors, coproduct embeddings of one-particle observables
and the one-particle subalgebras used for fermion and boson examples
"""

import itertools
import math
from dataclasses import dataclass
from enum import Enum
from functools import reduce
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np
import structlog

from .algebra import MatrixAlgebra, generate_algebra
from .config import DEFAULT_SIZE_CAP
from .exceptions import DimensionMismatch, SizeOverflow, ZeroVector
from .numkernel import (
    DEFAULT_TOL, ComplexMatrix, Tolerance, adjoint, as_square, check_unitary, numerical_rank,
)
from .quantum_state import LogBase, entropy_from_weights

logger = structlog.get_logger(__name__)

Label = Tuple[int, ...]

# Pair order a; alpha1, alpha2; beta1, beta2; b for two fermions in four levels (0-based)
FERMI4_BLOCK_LABELS: Tuple[Label, ...] = ((0, 1), (0, 2), (1, 2), (0, 3), (1, 3), (2, 3))


class Sector(str, Enum):
    FULL = "full"
    SYMMETRIC = "symmetric"
    ANTISYMMETRIC = "antisymmetric"


def _check_size(d: int, k: int, size_cap: int) -> int:
    if d < 1 or k < 1:
        raise ValueError("d and k must be at least 1")
    size = d ** k
    if size > size_cap:
        raise SizeOverflow(f"Tensor space dimension {size} exceeds cap {size_cap}")
    return size


def _multi_indices(d: int, k: int) -> np.ndarray:
    return np.array(list(itertools.product(range(d), repeat=k)), dtype=int).reshape(-1, k)


def _permutation_sign(perm: Sequence[int]) -> int:
    sign = 1
    seen = [False] * len(perm)
    for start in range(len(perm)):
        if seen[start]:
            continue
        length = 0
        j = start
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def permutation_operator(d: int, perm: Sequence[int]) -> ComplexMatrix:
    """Operator permuting the tensor factors of (C^d)^(x)k"""
    k = len(perm)
    idx = _multi_indices(d, k)
    source = np.ravel_multi_index(idx.T, (d,) * k)
    target = np.ravel_multi_index(idx[:, list(perm)].T, (d,) * k)
    out = np.zeros((d ** k, d ** k), dtype=np.complex128)
    out[target, source] = 1.0
    return out


def _average(d: int, k: int, signed: bool, size_cap: int) -> ComplexMatrix:
    size = _check_size(d, k, size_cap)
    total = np.zeros((size, size), dtype=np.complex128)
    for perm in itertools.permutations(range(k)):
        sign = _permutation_sign(perm) if signed else 1
        total += sign * permutation_operator(d, perm)
    return total / math.factorial(k)


def symmetrizer(d: int, k: int, size_cap: int = DEFAULT_SIZE_CAP) -> ComplexMatrix:
    return _average(d, k, signed=False, size_cap=size_cap)


def antisymmetrizer(d: int, k: int, size_cap: int = DEFAULT_SIZE_CAP) -> ComplexMatrix:
    return _average(d, k, signed=True, size_cap=size_cap)


def _default_labels(d: int, k: int, sector: Sector) -> List[Label]:
    if sector == Sector.ANTISYMMETRIC:
        return list(itertools.combinations(range(d), k))
    if sector == Sector.SYMMETRIC:
        return list(itertools.combinations_with_replacement(range(d), k))
    return list(itertools.product(range(d), repeat=k))


def _sector_column(label: Label, d: int, sector: Sector) -> np.ndarray:
    k = len(label)
    col = np.zeros(d ** k, dtype=np.complex128)
    if sector == Sector.FULL:
        col[np.ravel_multi_index(label, (d,) * k)] = 1.0
        return col
    if sector == Sector.ANTISYMMETRIC:
        for perm in itertools.permutations(range(k)):
            col[np.ravel_multi_index(tuple(label[p] for p in perm), (d,) * k)] += _permutation_sign(perm)
        return col / np.sqrt(math.factorial(k))
    arrangements = set(itertools.permutations(label))
    for arr in arrangements:
        col[np.ravel_multi_index(arr, (d,) * k)] = 1.0
    return col / np.sqrt(len(arrangements))


@dataclass(frozen=True, eq=False)
class ParticleSpace:
    """
    A statistics sector of (C^d)^(x)k

    Columns of the isometry are the orthonormal sector basis vectors in the order of
    basis_labels (0-based multi-indices).
    """
    one_particle_dim: int
    particles: int
    sector: Sector
    isometry: np.ndarray
    basis_labels: Tuple[Label, ...]

    @property
    def dim(self) -> int:
        return int(self.isometry.shape[1])

    @property
    def tensor_dim(self) -> int:
        return int(self.isometry.shape[0])

    @classmethod
    def build(cls, d: int, k: int, sector: Union[Sector, str] = Sector.ANTISYMMETRIC,
              labels: Optional[Sequence[Sequence[int]]] = None,
              size_cap: int = DEFAULT_SIZE_CAP) -> "ParticleSpace":
        """
        Construct the sector space

        Args:
            d: one-particle dimension
            k: number of particles
            sector: full, symmetric or antisymmetric
            labels: optional reordering of the canonical multi-indices
            size_cap: limit on d**k
        """
        sector = Sector(sector)
        _check_size(d, k, size_cap)
        canonical = _default_labels(d, k, sector)
        if labels is None:
            ordered = canonical
        else:
            ordered = [tuple(int(i) for i in lab) for lab in labels]
            if sorted(ordered) != sorted(canonical):
                raise DimensionMismatch(
                    f"Labels must be a permutation of the {len(canonical)} canonical {sector.value} labels")
        iso = np.stack([_sector_column(lab, d, sector) for lab in ordered], axis=1)
        return cls(one_particle_dim=d, particles=k, sector=sector, isometry=iso,
                   basis_labels=tuple(ordered))

    def label_index(self, label: Sequence[int]) -> int:
        return self.basis_labels.index(tuple(label))

    def tensor_form(self, vector) -> np.ndarray:
        return self.isometry @ np.asarray(vector, dtype=np.complex128)

    def projector(self) -> ComplexMatrix:
        return self.isometry @ adjoint(self.isometry)

    def slater_rank(self, psi) -> int:
        """Rank of the antisymmetric coefficient matrix of a two-fermion vector, halved"""
        if self.sector != Sector.ANTISYMMETRIC or self.particles != 2:
            raise DimensionMismatch("Slater rank is defined for two-particle antisymmetric sectors")
        coeffs = self.tensor_form(psi).reshape(self.one_particle_dim, self.one_particle_dim)
        return numerical_rank(coeffs) // 2


def embed_operator(op, k: int) -> ComplexMatrix:
    """sum over positions of 1 (x) ... (x) op (x) ... (x) 1 on the full tensor space"""
    op = as_square(op, "one-particle operator")
    d = op.shape[0]
    eye = np.eye(d, dtype=np.complex128)
    total = np.zeros((d ** k, d ** k), dtype=np.complex128)
    for pos in range(k):
        factors = [op if i == pos else eye for i in range(k)]
        total += reduce(np.kron, factors)
    return total


def tensor_power(g, k: int) -> ComplexMatrix:
    g = as_square(g)
    return reduce(np.kron, [g] * k)


def _check_space(op: ComplexMatrix, k: int, space: ParticleSpace) -> None:
    if op.shape[0] != space.one_particle_dim or k != space.particles:
        raise DimensionMismatch(
            f"Operator on C^{op.shape[0]} with k={k} does not match space "
            f"(d={space.one_particle_dim}, k={space.particles})")


def coproduct_lie(op, k: int, space: ParticleSpace) -> ComplexMatrix:
    """Restriction of the additive coproduct of a one-particle observable to the sector"""
    op = as_square(op, "one-particle operator")
    _check_space(op, k, space)
    return adjoint(space.isometry) @ embed_operator(op, k) @ space.isometry


def coproduct_group(g, k: int, space: ParticleSpace, tol: Tolerance = DEFAULT_TOL) -> ComplexMatrix:
    """Restriction of g (x) ... (x) g to the sector"""
    g = check_unitary(g, tol)
    _check_space(g, k, space)
    return adjoint(space.isometry) @ tensor_power(g, k) @ space.isometry


def matrix_unit(d: int, i: int, j: int) -> ComplexMatrix:
    """|e_i><e_j| with 1-based levels"""
    m = np.zeros((d, d), dtype=np.complex128)
    m[i - 1, j - 1] = 1.0
    return m


def one_particle_subalgebra(space: ParticleSpace, levels: Sequence[int],
                            tol: Tolerance = DEFAULT_TOL) -> MatrixAlgebra:
    """
    Algebra generated by the coproducts of the one-particle matrix units on the given
    levels (1-based) together with the sector identity
    """
    levels = sorted(set(int(lv) for lv in levels))
    if not levels:
        raise ValueError("At least one level is required")
    d = space.one_particle_dim
    if levels[0] < 1 or levels[-1] > d:
        raise DimensionMismatch(f"Levels must lie in 1..{d}")
    gens = [coproduct_lie(matrix_unit(d, i, j), space.particles, space)
            for i in levels for j in levels]
    algebra = generate_algebra(gens, include_ambient_identity=True, tol=tol)
    logger.debug("one_particle_subalgebra", d=d, k=space.particles, sector=space.sector.value,
                 levels=levels, dim=algebra.dim)
    return algebra


Coefficients = Union[Sequence[complex], Mapping[Sequence[int], complex]]


def sector_vector(coefficients: Coefficients, space: ParticleSpace) -> np.ndarray:
    """Normalized sector vector from coefficients over basis_labels (sequence or label mapping)"""
    if isinstance(coefficients, Mapping):
        vec = np.zeros(space.dim, dtype=np.complex128)
        for label, value in coefficients.items():
            vec[space.label_index(label)] += value
    else:
        vec = np.asarray(coefficients, dtype=np.complex128).reshape(-1)
        if vec.size != space.dim:
            raise DimensionMismatch(f"Expected {space.dim} coefficients, got {vec.size}")
    norm = np.linalg.norm(vec)
    if norm == 0:
        raise ZeroVector("All coefficients vanish")
    return vec / norm


def wedge_vector(coefficients: Coefficients, space: ParticleSpace) -> np.ndarray:
    if space.sector != Sector.ANTISYMMETRIC:
        raise DimensionMismatch("wedge_vector requires an antisymmetric space")
    return sector_vector(coefficients, space)


def vee_vector(coefficients: Coefficients, space: ParticleSpace) -> np.ndarray:
    if space.sector != Sector.SYMMETRIC:
        raise DimensionMismatch("vee_vector requires a symmetric space")
    return sector_vector(coefficients, space)


def fermi3_f_basis(space: ParticleSpace) -> np.ndarray:
    """
    Columns f^k = eps^{ijk} |e_i ^ e_j> (summed over i<j) in the space's coordinates:
    f^1 = e2^e3, f^2 = e3^e1, f^3 = e1^e2
    """
    if space.sector != Sector.ANTISYMMETRIC or space.one_particle_dim != 3 or space.particles != 2:
        raise DimensionMismatch("The f-basis lives in the two-fermion sector of C^3")
    basis = np.zeros((3, 3), dtype=np.complex128)
    basis[space.label_index((1, 2)), 0] = 1.0
    basis[space.label_index((0, 2)), 1] = -1.0
    basis[space.label_index((0, 1)), 2] = 1.0
    return basis


def one_particle_density(psi, space: ParticleSpace) -> ComplexMatrix:
    """Unit-trace one-particle reduced density of a sector vector"""
    d = space.one_particle_dim
    full = space.tensor_form(psi).reshape(d, -1)
    rho = full @ adjoint(full)
    return rho / np.trace(rho).real


def partial_trace_entropy(psi, space: ParticleSpace, log_base: LogBase = LogBase.NATURAL) -> float:
    """Entropy of the one-particle reduced density (log 2 for any two-fermion Slater state)"""
    rho = one_particle_density(psi, space)
    values = np.linalg.eigvalsh(0.5 * (rho + adjoint(rho)))
    return entropy_from_weights(values, log_base)


@dataclass(frozen=True, eq=False)
class Fermi3Choice2:
    """Two fermions on C^3 observed through the one-particle algebra of levels 1 and 2"""
    space: ParticleSpace
    algebra: MatrixAlgebra
    f_basis: np.ndarray

    def state_vector(self, theta: float) -> np.ndarray:
        return np.cos(theta) * self.f_basis[:, 0] + np.sin(theta) * self.f_basis[:, 2]


def fermi3_choice2(tol: Tolerance = DEFAULT_TOL) -> Fermi3Choice2:
    space = ParticleSpace.build(3, 2, Sector.ANTISYMMETRIC)
    return Fermi3Choice2(space=space, algebra=one_particle_subalgebra(space, [1, 2], tol),
                         f_basis=fermi3_f_basis(space))


def fermi4_state(theta: float, space: ParticleSpace) -> np.ndarray:
    """cos(theta) e1^e4 + sin(theta) e2^e3"""
    return wedge_vector({(0, 3): np.cos(theta), (1, 2): np.sin(theta)}, space)


def bose3_state(theta: float, phi: float, space: ParticleSpace) -> np.ndarray:
    """sin t cos p e1ve2 + sin t sin p e1ve3 + cos t e3ve3"""
    return vee_vector({
        (0, 1): np.sin(theta) * np.cos(phi),
        (0, 2): np.sin(theta) * np.sin(phi),
        (2, 2): np.cos(theta),
    }, space)


def bose3_weights(theta: float, phi: float) -> Dict[str, float]:
    """Closed-form block weights of the two-boson state under the levels {1,2} algebra"""
    return {
        "triplet": float(np.sin(theta) ** 2 * np.cos(phi) ** 2),
        "doublet": float(np.sin(theta) ** 2 * np.sin(phi) ** 2),
        "singlet": float(np.cos(theta) ** 2),
    }


def bose3_entropy(theta: float, phi: float, log_base: LogBase = LogBase.NATURAL) -> float:
    return entropy_from_weights(list(bose3_weights(theta, phi).values()), log_base)
