"""
Parity and measurement restrictions
Restriction to a parity-even subalgebra versus averaging over parity, and measurement
collapse as restriction to the commutant of a projector
"""

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np
import structlog
from pydantic import BaseModel

from .algebra import MatrixAlgebra, commutant, generate_algebra, intersect
from .exceptions import CornerViolation, DimensionMismatch, InvalidParity, NotProjector
from .gns import DecompositionMode, build_gns, decompose, gns_entropy
from .numkernel import DEFAULT_TOL, ComplexMatrix, Tolerance, adjoint, as_square, max_abs
from .quantum_state import (
    AlgebraState, canonical_entropy, evaluate, restrict, von_neumann_entropy,
)

logger = structlog.get_logger(__name__)

_RELATION_TOL = 1e-9


def _relation_tol(tol: Tolerance) -> float:
    return max(tol.effective, _RELATION_TOL)


@dataclass(frozen=True, eq=False)
class ParitySetup:
    """A parity operator P with P^2 = 1, its even subalgebra and optional corner projectors"""
    parity: ComplexMatrix
    even_subalgebra: MatrixAlgebra
    corners: Optional[Tuple[ComplexMatrix, ComplexMatrix]] = None
    odd_elements: Tuple[ComplexMatrix, ...] = ()

    @classmethod
    def build(cls, parity, even_subalgebra: Optional[MatrixAlgebra] = None,
              corners: Optional[Sequence] = None, odd_elements: Sequence = (),
              tol: Tolerance = DEFAULT_TOL) -> "ParitySetup":
        """
        Validate P and the corner structure

        Args:
            parity: hermitian involution
            even_subalgebra: defaults to the commutant of P
            corners: pair (1+, 1-) of complementary projectors
            odd_elements: elements a- that the corners must annihilate from both sides
            tol: validation tolerance
        """
        p = as_square(parity, "parity")
        dim = p.shape[0]
        limit = _relation_tol(tol)
        if max_abs(p - adjoint(p)) > limit:
            raise InvalidParity("Parity operator is not hermitian")
        if max_abs(p @ p - np.eye(dim)) > limit:
            raise InvalidParity("Parity operator does not square to the identity")

        if even_subalgebra is None:
            even_subalgebra = commutant(generate_algebra([p], tol=tol), tol)
        elif even_subalgebra.ambient_dim != dim:
            raise DimensionMismatch("Even subalgebra acts on a different space")
        for b in even_subalgebra.basis:
            if max_abs(b @ p - p @ b) > limit:
                raise InvalidParity("Even subalgebra contains an element not commuting with P")

        odd = tuple(as_square(a, "odd element") for a in odd_elements)
        corner_pair = None
        if corners is not None:
            if len(corners) != 2:
                raise CornerViolation("Corners must be a pair (1+, 1-)")
            plus, minus = (as_square(c, "corner") for c in corners)
            for c in (plus, minus):
                if max_abs(c @ c - c) > limit or max_abs(c - adjoint(c)) > limit:
                    raise CornerViolation("Corner is not an orthogonal projector")
            if max_abs(plus + minus - np.eye(dim)) > limit:
                raise CornerViolation("Corners do not sum to the identity")
            if max_abs(plus @ minus) > limit:
                raise CornerViolation("Corners are not orthogonal")
            for a in odd:
                if max_abs(plus @ a) > limit or max_abs(a @ plus) > limit:
                    raise CornerViolation("1+ does not annihilate an odd element")
            corner_pair = (plus, minus)
        return cls(parity=p, even_subalgebra=even_subalgebra, corners=corner_pair, odd_elements=odd)


class ParityReport(BaseModel):
    """Comparison of restriction and parity averaging on the even subalgebra"""
    max_deviation: float
    entropy_restricted: float
    entropy_averaged: float
    subalgebra_dim: int
    corner_norms: Optional[List[float]] = None


def parity_average(omega: AlgebraState, parity) -> AlgebraState:
    """(omega + P omega P) / 2"""
    p = as_square(parity, "parity")
    density = 0.5 * (omega.density + p @ omega.density @ p)
    return AlgebraState(ambient_dim=omega.ambient_dim, density=density)


def parity_restriction_vs_average(omega: AlgebraState, setup: ParitySetup,
                                  tol: Tolerance = DEFAULT_TOL, seed: int = 0) -> ParityReport:
    algebra = setup.even_subalgebra
    averaged = parity_average(omega, setup.parity)
    direct = restrict(omega, algebra)
    mixed = restrict(averaged, algebra)
    deviation = float(np.max(np.abs(direct.values - mixed.values))) if algebra.dim else 0.0

    s_direct = canonical_entropy(direct, algebra, seed=seed, tol=tol)
    s_mixed = canonical_entropy(mixed, algebra, seed=seed, tol=tol, blocks=s_direct.blocks)

    norms = None
    if setup.corners is not None:
        norms = [evaluate(omega, c).real for c in setup.corners]
    report = ParityReport(
        max_deviation=deviation,
        entropy_restricted=s_direct.entropy,
        entropy_averaged=s_mixed.entropy,
        subalgebra_dim=algebra.dim,
        corner_norms=norms,
    )
    logger.debug("parity_restriction", deviation=deviation, entropy=s_direct.entropy)
    return report


class CollapseReport(BaseModel):
    """Restriction to the commutant of a projector compared with the collapsed state"""
    max_deviation: float
    entropy_restricted: float
    entropy_collapsed: float
    weights: List[float]
    subalgebra_dim: int


def collapse(omega: AlgebraState, projector) -> AlgebraState:
    """p rho p + (1 - p) rho (1 - p)"""
    p = as_square(projector, "projector")
    q = np.eye(p.shape[0]) - p
    return AlgebraState(ambient_dim=omega.ambient_dim,
                        density=p @ omega.density @ p + q @ omega.density @ q)


def check_projector(projector, tol: Tolerance = DEFAULT_TOL) -> ComplexMatrix:
    p = as_square(projector, "projector")
    limit = _relation_tol(tol)
    if max_abs(p @ p - p) > limit or max_abs(p - adjoint(p)) > limit:
        raise NotProjector("Matrix is not an orthogonal projector")
    rank = np.trace(p).real
    if rank < 0.5 or rank > p.shape[0] - 0.5:
        raise NotProjector("Projector must be neither zero nor the identity")
    return p


def projector_commutant(projector, tol: Tolerance = DEFAULT_TOL,
                        algebra: Optional[MatrixAlgebra] = None) -> MatrixAlgebra:
    p = check_projector(projector, tol)
    result = commutant(generate_algebra([p], tol=tol), tol)
    if algebra is not None:
        result = intersect(result, algebra, tol)
    return result


def measurement_restriction(omega: AlgebraState, projector, tol: Tolerance = DEFAULT_TOL,
                            algebra: Optional[MatrixAlgebra] = None, seed: int = 0) -> CollapseReport:
    """
    Restrict omega to the commutant of p (intersected with algebra when given)
    and compare with the collapsed density
    """
    p = check_projector(projector, tol)
    if p.shape[0] != omega.ambient_dim:
        raise DimensionMismatch("Projector and state act on different spaces")
    sub = projector_commutant(p, tol, algebra)
    collapsed = collapse(omega, p)
    direct = restrict(omega, sub)
    after = restrict(collapsed, sub)
    deviation = float(np.max(np.abs(direct.values - after.values)))

    gns = build_gns(direct, sub, tol)
    decomposition = decompose(gns, DecompositionMode.CANONICAL_SCHMIDT, seed=seed, tol=tol)
    weight_p = evaluate(omega, p).real
    report = CollapseReport(
        max_deviation=deviation,
        entropy_restricted=gns_entropy(gns, decomposition, tol=tol),
        entropy_collapsed=von_neumann_entropy(collapsed.density, tol=tol),
        weights=[weight_p, 1.0 - weight_p],
        subalgebra_dim=sub.dim,
    )
    logger.debug("measurement_restriction", deviation=deviation, weights=report.weights)
    return report
