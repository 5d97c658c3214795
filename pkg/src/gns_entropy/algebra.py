"""
Finite-dimensional matrix *-algebras
Generation from generators, membership, commutant, center and Wedderburn block structure
"""

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import structlog

from .config import DEFAULT_CLUSTER_GAP, DEFAULT_MAX_SPLIT_ATTEMPTS
from .exceptions import DegenerateSplit, DimensionMismatch, NotUnital
from .numkernel import (
    DEFAULT_TOL, ComplexMatrix, Tolerance, adjoint, as_square, cluster_eigenvalues,
    hermitian_eigensystem, kernel_basis, make_rng, max_abs, orthonormalize,
    range_projector,
)

logger = structlog.get_logger(__name__)


@dataclass(frozen=True, eq=False)
class MatrixAlgebra:
    """
    *-closed span of ambient_dim x ambient_dim matrices

    The basis is orthonormal under the Hilbert-Schmidt inner product and is stored
    as an array of shape (dim, ambient_dim, ambient_dim).
    """
    ambient_dim: int
    basis: np.ndarray
    has_ambient_identity: bool = False

    def __post_init__(self):
        basis = np.array(self.basis, copy=True)
        basis.setflags(write=False)
        object.__setattr__(self, "basis", basis)

    @property
    def dim(self) -> int:
        return int(self.basis.shape[0])

    @property
    def flat_basis(self) -> np.ndarray:
        return self.basis.reshape(self.dim, -1)

    def coordinates(self, x) -> np.ndarray:
        """HS-basis coordinates of the orthogonal projection of x onto the span"""
        x = as_square(x)
        if x.shape[0] != self.ambient_dim:
            raise DimensionMismatch(
                f"Element is {x.shape[0]}x{x.shape[0]}, algebra acts on dimension {self.ambient_dim}")
        return np.conj(self.flat_basis) @ x.reshape(-1)

    def element(self, coords) -> ComplexMatrix:
        coords = np.asarray(coords, dtype=np.complex128)
        if coords.shape != (self.dim,):
            raise DimensionMismatch(f"Expected {self.dim} coordinates, got {coords.shape}")
        return np.tensordot(coords, self.basis, axes=1)

    def residual(self, x) -> float:
        x = as_square(x)
        return float(np.linalg.norm(x - self.element(self.coordinates(x))))

    def contains(self, x, tol: Tolerance = DEFAULT_TOL) -> bool:
        x = as_square(x)
        scale = max(float(np.linalg.norm(x)), 1.0)
        return self.residual(x) <= max(tol.effective, 1e-12) * 100 * scale

    def unit(self, tol: Tolerance = DEFAULT_TOL) -> ComplexMatrix:
        """
        The algebra's own unit element

        For a *-algebra the unit is the projector onto the range of sum_i b_i b_i^dagger.
        Raises NotUnital when that projector is not in the span.
        """
        if self.dim == 0:
            raise NotUnital("The zero algebra has no unit")
        support = np.einsum("iab,icb->ac", self.basis, np.conj(self.basis))
        e = range_projector(support, tol)
        if not self.contains(e, tol):
            raise NotUnital("Range projector of the algebra is not an element of it")
        return e

    def check_closure(self) -> Dict[str, float]:
        """Largest residuals of adjoints and pairwise products outside the span"""
        adj = max((self.residual(adjoint(b)) for b in self.basis), default=0.0)
        prod = 0.0
        for a in self.basis:
            for b in self.basis:
                prod = max(prod, self.residual(a @ b))
        return {"adjoint": adj, "product": prod}

    def random_hermitian_element(self, rng: np.random.Generator) -> ComplexMatrix:
        """Real Gaussian combination of the hermitian parts of the basis"""
        weights = rng.standard_normal(self.dim)
        parts = 0.5 * (self.basis + adjoint(self.basis))
        parts_anti = 0.5j * (adjoint(self.basis) - self.basis)
        weights_anti = rng.standard_normal(self.dim)
        return (np.tensordot(weights, parts, axes=1)
                + np.tensordot(weights_anti, parts_anti, axes=1))


@dataclass(frozen=True, eq=False)
class BlockStructure:
    """Wedderburn decomposition: central projections and matrix units per simple block"""
    central_projections: List[ComplexMatrix]
    block_dims: List[int]
    multiplicities: List[int]
    matrix_units: List[np.ndarray] = field(repr=False)

    @property
    def n_blocks(self) -> int:
        return len(self.block_dims)

    def unit(self) -> ComplexMatrix:
        return sum(self.central_projections)


def _stack(matrices: Sequence[ComplexMatrix], dim: int) -> np.ndarray:
    if not matrices:
        return np.zeros((0, dim, dim), dtype=np.complex128)
    return np.stack([np.asarray(m, dtype=np.complex128) for m in matrices])


def _check_generators(generators: Sequence) -> Tuple[List[ComplexMatrix], int]:
    mats = [as_square(g, "generator") for g in generators]
    if not mats:
        raise DimensionMismatch("At least one generator is required")
    dim = mats[0].shape[0]
    for m in mats:
        if m.shape[0] != dim:
            raise DimensionMismatch(f"Generator sizes differ: {dim} vs {m.shape[0]}")
    return mats, dim


def from_basis(matrices: Sequence[ComplexMatrix], ambient_dim: int,
               tol: Tolerance = DEFAULT_TOL) -> MatrixAlgebra:
    """Wrap an HS-orthonormal family spanning a *-algebra"""
    basis = _stack(matrices, ambient_dim)
    algebra = MatrixAlgebra(ambient_dim=ambient_dim, basis=basis)
    has_identity = algebra.dim > 0 and algebra.contains(np.eye(ambient_dim), tol)
    return MatrixAlgebra(ambient_dim=ambient_dim, basis=basis, has_ambient_identity=has_identity)


def generate_algebra(generators: Sequence, include_ambient_identity: bool = True,
                     tol: Tolerance = DEFAULT_TOL) -> MatrixAlgebra:
    """
    Smallest *-algebra containing the generators

    Breadth-first product closure with HS re-orthonormalization, stopping once a
    full round adds nothing. Terminates because the dimension is bounded by D^2.
    """
    mats, dim = _check_generators(generators)
    seeds = list(mats) + [adjoint(m) for m in mats]
    if include_ambient_identity:
        seeds.insert(0, np.eye(dim, dtype=np.complex128))
    basis = orthonormalize(seeds, tol=tol)

    rounds = 0
    while True:
        rounds += 1
        size = len(basis)
        candidates = [a @ b for a in basis for b in basis]
        candidates += [adjoint(c) for c in candidates]
        basis = orthonormalize(candidates, tol=tol, basis=basis)
        if len(basis) == size:
            break

    algebra = from_basis(basis, dim, tol)
    logger.debug("algebra_generated", ambient_dim=dim, dim=algebra.dim, rounds=rounds)
    return algebra


def full_matrix_algebra(d: int) -> MatrixAlgebra:
    """M_d(C) with the matrix-unit basis e_ij"""
    units = []
    for i in range(d):
        for j in range(d):
            e = np.zeros((d, d), dtype=np.complex128)
            e[i, j] = 1.0
            units.append(e)
    return MatrixAlgebra(ambient_dim=d, basis=_stack(units, d), has_ambient_identity=True)


def commutant(algebra: MatrixAlgebra, tol: Tolerance = DEFAULT_TOL) -> MatrixAlgebra:
    """
    All ambient matrices commuting with the algebra

    Row-major vec convention: vec(Xb - bX) = (I kron b^T - b kron I) vec(X).
    """
    d = algebra.ambient_dim
    eye = np.eye(d)
    if algebra.dim == 0:
        return full_matrix_algebra(d)
    system = np.vstack([np.kron(eye, b.T) - np.kron(b, eye) for b in algebra.basis])
    null = kernel_basis(system, tol)
    mats = [null[:, k].reshape(d, d) for k in range(null.shape[1])]
    return from_basis(orthonormalize(mats, tol=tol), d, tol)


def center(algebra: MatrixAlgebra, tol: Tolerance = DEFAULT_TOL) -> MatrixAlgebra:
    """Elements of the algebra commuting with every basis element"""
    d = algebra.ambient_dim
    n = algebra.dim
    if n == 0:
        return algebra
    # column i of block j is vec([b_i, b_j])
    blocks = []
    for bj in algebra.basis:
        cols = [(bi @ bj - bj @ bi).reshape(-1) for bi in algebra.basis]
        blocks.append(np.stack(cols, axis=1))
    null = kernel_basis(np.vstack(blocks), tol)
    mats = [np.tensordot(null[:, k], algebra.basis, axes=1) for k in range(null.shape[1])]
    return from_basis(orthonormalize(mats, tol=tol), d, tol)


def intersect(a: MatrixAlgebra, b: MatrixAlgebra, tol: Tolerance = DEFAULT_TOL) -> MatrixAlgebra:
    """Intersection of two algebras on the same ambient space"""
    if a.ambient_dim != b.ambient_dim:
        raise DimensionMismatch("Algebras act on different ambient spaces")
    system = np.hstack([a.flat_basis.T, -b.flat_basis.T])
    null = kernel_basis(system, tol)
    mats = [np.tensordot(null[:a.dim, k], a.basis, axes=1) for k in range(null.shape[1])]
    return from_basis(orthonormalize(mats, tol=tol), a.ambient_dim, tol)


def direct_sum(a: MatrixAlgebra, b: MatrixAlgebra, tol: Tolerance = DEFAULT_TOL) -> MatrixAlgebra:
    """Algebra generated by two algebras with mutually orthogonal supports"""
    if a.ambient_dim != b.ambient_dim:
        raise DimensionMismatch("Algebras act on different ambient spaces")
    return generate_algebra(list(a.basis) + list(b.basis), include_ambient_identity=False, tol=tol)


class _Collision(Exception):
    pass


def _compressed_projectors(h: ComplexMatrix, support: ComplexMatrix, expected: int,
                           gap: float, tol: Tolerance) -> List[ComplexMatrix]:
    """Spectral projectors of h restricted to the range of the projector `support`"""
    values, vectors = hermitian_eigensystem(support, tol)
    w = vectors[:, values > 0.5]
    hc = adjoint(w) @ h @ w
    hc = 0.5 * (hc + adjoint(hc))
    evals, evecs = hermitian_eigensystem(hc, Tolerance(max(tol.effective, 1e-8)))
    groups = cluster_eigenvalues(evals, gap)
    if len(groups) != expected:
        raise _Collision(f"found {len(groups)} eigenvalue groups, expected {expected}")
    out = []
    for g in groups:
        v = w @ evecs[:, g]
        out.append(v @ adjoint(v))
    return out


def _matrix_units(block_basis: List[ComplexMatrix], projections: List[ComplexMatrix],
                  multiplicity: int) -> np.ndarray:
    d = len(projections)
    dim = projections[0].shape[0]
    units = np.zeros((d, d, dim, dim), dtype=np.complex128)
    p1 = projections[0]
    column = [p1]
    for pi in projections[1:]:
        candidates = [pi @ b @ p1 for b in block_basis]
        x = max(candidates, key=lambda c: float(np.linalg.norm(c)))
        norm = np.sqrt(np.trace(adjoint(x) @ x).real / multiplicity)
        column.append(x / norm)
    for i in range(d):
        for j in range(d):
            units[i, j] = column[i] @ adjoint(column[j])
    return units


def _block_order_key(z: ComplexMatrix, d: int):
    diag = np.real(np.diag(z))
    support = np.nonzero(diag > 1e-8)[0]
    first = int(support[0]) if support.size else z.shape[0]
    return (-d, -round(float(np.trace(z).real), 6), first,
            tuple(-np.round(diag, 8)))


def _attempt_blocks(algebra: MatrixAlgebra, rng: np.random.Generator, gap: float,
                    tol: Tolerance) -> BlockStructure:
    e = algebra.unit(tol)
    z_alg = center(algebra, tol)
    if z_alg.dim <= 1:
        centrals = [e]
    else:
        h = z_alg.random_hermitian_element(rng)
        centrals = _compressed_projectors(h, e, z_alg.dim, gap, tol)

    blocks = []
    for z in centrals:
        block_basis = orthonormalize([b @ z for b in algebra.basis], tol=tol)
        d = int(round(np.sqrt(len(block_basis))))
        if d * d != len(block_basis):
            raise _Collision(f"block of dimension {len(block_basis)} is not a full matrix algebra")
        rank = int(round(np.trace(z).real))
        m = rank // d
        if d == 1:
            units = z.reshape(1, 1, *z.shape).astype(np.complex128)
        else:
            block = from_basis(block_basis, algebra.ambient_dim, tol)
            h = block.random_hermitian_element(rng)
            minimal = _compressed_projectors(h, z, d, gap, tol)
            units = _matrix_units(block_basis, minimal, m)
        blocks.append((z, d, m, units))

    blocks.sort(key=lambda item: _block_order_key(item[0], item[1]))
    return BlockStructure(
        central_projections=[b[0] for b in blocks],
        block_dims=[b[1] for b in blocks],
        multiplicities=[b[2] for b in blocks],
        matrix_units=[b[3] for b in blocks],
    )


def block_structure(algebra: MatrixAlgebra, seed: int = 0, tol: Tolerance = DEFAULT_TOL,
                    cluster_gap: float = DEFAULT_CLUSTER_GAP,
                    max_attempts: int = DEFAULT_MAX_SPLIT_ATTEMPTS) -> BlockStructure:
    """
    Wedderburn block structure of a unital algebra

    Args:
        algebra: algebra with its own unit (not necessarily the ambient identity)
        seed: seed for the random splitting elements; attempt k uses seed + k
        tol: rank tolerance
        cluster_gap: relative eigenvalue gap below which random eigenvalues collide
        max_attempts: attempts before DegenerateSplit is raised

    Returns:
        BlockStructure ordered by descending block dimension, then descending trace
    """
    last_reason: Optional[str] = None
    for attempt in range(max_attempts):
        rng = make_rng(seed + attempt)
        try:
            blocks = _attempt_blocks(algebra, rng, cluster_gap, tol)
        except _Collision as err:
            last_reason = str(err)
            logger.debug("block_split_retry", attempt=attempt, reason=last_reason)
            continue
        logger.debug("block_structure", dims=blocks.block_dims, multiplicities=blocks.multiplicities)
        return blocks
    raise DegenerateSplit(f"Random splitting failed after {max_attempts} attempts: {last_reason}")


def matrix_unit_defect(blocks: BlockStructure) -> float:
    """Largest deviation from the matrix-unit relations across all blocks"""
    worst = 0.0
    for z, units in zip(blocks.central_projections, blocks.matrix_units):
        d = units.shape[0]
        for i in range(d):
            for j in range(d):
                worst = max(worst, max_abs(adjoint(units[i, j]) - units[j, i]))
                for k in range(d):
                    for m in range(d):
                        expected = units[i, m] if j == k else 0.0
                        worst = max(worst, max_abs(units[i, j] @ units[k, m] - expected))
        worst = max(worst, max_abs(sum(units[i, i] for i in range(d)) - z))
    for a, za in enumerate(blocks.central_projections):
        for b, zb in enumerate(blocks.central_projections):
            expected = za if a == b else 0.0
            worst = max(worst, max_abs(za @ zb - expected))
    return worst
