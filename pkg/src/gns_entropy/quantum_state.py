"""
States on matrix algebras
Density-matrix states, restriction to subalgebras, von Neumann and canonical entropies
"""

from dataclasses import dataclass
from enum import Enum
from typing import List, Optional, Sequence, Union

import numpy as np
import scipy.linalg
import structlog

from .algebra import BlockStructure, MatrixAlgebra, block_structure
from .exceptions import DimensionMismatch, NotDensity, NotPositive, ZeroVector
from .numkernel import (
    DEFAULT_TOL, ComplexMatrix, Tolerance, adjoint, as_square, hermitian_eigensystem,
    is_hermitian,
)

logger = structlog.get_logger(__name__)


class LogBase(str, Enum):
    NATURAL = "e"
    BINARY = "2"


@dataclass(frozen=True, eq=False)
class AlgebraState:
    """A state omega(a) = Tr(rho a) on the full ambient matrix algebra"""
    ambient_dim: int
    density: ComplexMatrix
    purity_hint: Optional[bool] = None


@dataclass(frozen=True, eq=False)
class RestrictedState:
    """The values of a state on the basis of a subalgebra"""
    subalgebra: MatrixAlgebra
    values: np.ndarray

    def evaluate(self, a) -> complex:
        """Linear extension to any element of the subalgebra span"""
        return complex(self.subalgebra.coordinates(a) @ self.values)

    def unit_value(self, tol: Tolerance = DEFAULT_TOL) -> float:
        return self.evaluate(self.subalgebra.unit(tol)).real


StateLike = Union[AlgebraState, RestrictedState]


def state_from_vector(psi, dim: Optional[int] = None) -> AlgebraState:
    """Pure state |psi><psi| of the normalized vector"""
    psi = np.asarray(psi, dtype=np.complex128).reshape(-1)
    if dim is not None and psi.size != dim:
        raise DimensionMismatch(f"Vector has length {psi.size}, expected {dim}")
    norm = np.linalg.norm(psi)
    if norm == 0.0:
        raise ZeroVector("Cannot build a state from the zero vector")
    psi = psi / norm
    return AlgebraState(ambient_dim=psi.size, density=np.outer(psi, np.conj(psi)), purity_hint=True)


def _check_density(rho: ComplexMatrix, tol: Tolerance) -> np.ndarray:
    if not is_hermitian(rho, tol):
        raise NotDensity("Density matrix is not hermitian")
    values, _ = hermitian_eigensystem(rho, tol)
    if values.size and values[0] < -max(tol.effective, 1e-12) * max(1.0, values[-1]):
        raise NotDensity(f"Density matrix has negative eigenvalue {values[0]:.3e}")
    if abs(values.sum() - 1.0) > 1e-8:
        raise NotDensity(f"Density matrix has trace {values.sum():.6f}, expected 1")
    return values


def state_from_density(rho, tol: Tolerance = DEFAULT_TOL) -> AlgebraState:
    rho = as_square(rho, "density")
    _check_density(rho, tol)
    return AlgebraState(ambient_dim=rho.shape[0], density=rho)


def purity(omega: AlgebraState) -> float:
    return float(np.real(np.trace(omega.density @ omega.density)))


def is_pure(omega: AlgebraState, tol: Tolerance = DEFAULT_TOL) -> bool:
    if omega.purity_hint is not None:
        return omega.purity_hint
    return abs(purity(omega) - 1.0) <= max(tol.effective, 1e-9)


def evaluate(omega: AlgebraState, a) -> complex:
    """omega(a) = Tr(rho a)"""
    a = as_square(a)
    if a.shape[0] != omega.ambient_dim:
        raise DimensionMismatch(f"Operator is {a.shape[0]}-dimensional, state is {omega.ambient_dim}")
    return complex(np.sum(omega.density * a.T))


def restrict(omega: AlgebraState, subalgebra: MatrixAlgebra) -> RestrictedState:
    """omega restricted to the subalgebra, stored as values on its basis"""
    if subalgebra.ambient_dim != omega.ambient_dim:
        raise DimensionMismatch(
            f"Subalgebra acts on {subalgebra.ambient_dim}, state on {omega.ambient_dim}")
    # Tr(rho b_i) for every basis element at once
    values = np.einsum("ab,iba->i", omega.density, subalgebra.basis)
    return RestrictedState(subalgebra=subalgebra, values=values)


def _log(x: np.ndarray, log_base: LogBase) -> np.ndarray:
    out = np.log(x)
    if LogBase(log_base) == LogBase.BINARY:
        out = out / np.log(2.0)
    return out


def entropy_from_weights(weights: Sequence[float], log_base: LogBase = LogBase.NATURAL,
                         tol: Tolerance = DEFAULT_TOL, renormalize: bool = True) -> float:
    """-sum w log w over weights above tolerance (0 log 0 = 0)"""
    w = np.clip(np.asarray(weights, dtype=float), 0.0, None)
    if renormalize:
        total = w.sum()
        if total <= 0:
            raise NotPositive("Weights sum to zero")
        w = w / total
    w = w[w > tol.effective]
    if w.size == 0:
        return 0.0
    return max(float(-np.sum(w * _log(w, log_base))), 0.0)


def von_neumann_entropy(density, log_base: LogBase = LogBase.NATURAL,
                        tol: Tolerance = DEFAULT_TOL) -> float:
    """S = -Tr rho log rho"""
    values = _check_density(as_square(density, "density"), tol)
    return entropy_from_weights(values, log_base, tol, renormalize=False)


@dataclass(frozen=True, eq=False)
class CanonicalEntropy:
    """Minimal entropy of a restriction together with its block data"""
    entropy: float
    block_densities: List[ComplexMatrix]
    block_weights: np.ndarray
    unit_value: float
    blocks: BlockStructure

    @property
    def density(self) -> ComplexMatrix:
        """Block-diagonal restricted density, normalized to unit trace"""
        return scipy.linalg.block_diag(*self.block_densities)


def block_densities(omega: StateLike, blocks: BlockStructure) -> List[ComplexMatrix]:
    """Per block (rho_k)_ij = omega(E_ji); not normalized"""
    out = []
    for units in blocks.matrix_units:
        d = units.shape[0]
        if isinstance(omega, AlgebraState):
            # Tr(rho E_ji) for all i, j
            rho_k = np.einsum("ab,jiba->ij", omega.density, units)
        else:
            rho_k = np.array([[omega.evaluate(units[j, i]) for j in range(d)] for i in range(d)])
        out.append(0.5 * (rho_k + adjoint(rho_k)))
    return out


def canonical_entropy(omega: StateLike, subalgebra: MatrixAlgebra, seed: int = 0,
                      tol: Tolerance = DEFAULT_TOL, blocks: Optional[BlockStructure] = None,
                      log_base: LogBase = LogBase.NATURAL) -> CanonicalEntropy:
    """
    Entropy of the restriction to a subalgebra through its block decomposition

    Args:
        omega: state on the ambient algebra or already restricted to the subalgebra
        subalgebra: unital subalgebra
        seed: seed for block_structure when blocks are not supplied
        tol: rank tolerance
        blocks: precomputed block structure of the subalgebra
        log_base: natural or binary logarithm

    Returns:
        CanonicalEntropy with the renormalized per-block densities
    """
    if blocks is None:
        blocks = block_structure(subalgebra, seed=seed, tol=tol)
    raw = block_densities(omega, blocks)
    weights = np.array([np.trace(r).real for r in raw])
    total = float(weights.sum())
    if total <= tol.effective:
        raise NotPositive("State vanishes on the unit of the subalgebra")
    normalized = [r / total for r in raw]
    rho0 = scipy.linalg.block_diag(*normalized)
    entropy = von_neumann_entropy(rho0, log_base, tol)
    return CanonicalEntropy(
        entropy=entropy,
        block_densities=normalized,
        block_weights=weights / total,
        unit_value=total,
        blocks=blocks,
    )
