"""
GNS construction
Gram matrix, Gel'fand ideal, quotient Hilbert space, representation, cyclic vector
and decomposition of the representation into irreducible subspaces
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional, Sequence

import numpy as np
import scipy.linalg
import structlog

from .algebra import BlockStructure, MatrixAlgebra, block_structure
from .config import DEFAULT_CLUSTER_GAP, DEFAULT_MAX_SPLIT_ATTEMPTS
from .exceptions import DegenerateSplit, DimensionMismatch, NotPositive, ZeroVector
from .numkernel import (
    DEFAULT_TOL, ComplexMatrix, Tolerance, adjoint, cluster_eigenvalues,
    hermitian_eigensystem, make_rng, max_abs, numerical_rank, orthonormalize,
    random_hermitian,
)
from .quantum_state import (
    AlgebraState, LogBase, RestrictedState, StateLike, entropy_from_weights, evaluate, restrict,
)

logger = structlog.get_logger(__name__)


class DecompositionMode(str, Enum):
    CANONICAL_SCHMIDT = "canonical_schmidt"
    RANDOM_SPLIT = "random_split"
    ISOTYPIC_ONLY = "isotypic_only"


def structure_constants(algebra: MatrixAlgebra):
    """
    Coordinates of b_i^dagger b_j and of b_i b_j in the algebra basis

    Returns:
        (adjoint_products, products), each of shape (n, n, n) indexed [i, j, k]
    """
    b = algebra.basis
    cb = np.conj(b)
    adj_prod = np.einsum("iba,jbc->ijac", cb, b)
    prod = np.einsum("iab,jbc->ijac", b, b)
    return (np.einsum("kac,ijac->ijk", cb, adj_prod),
            np.einsum("kac,ijac->ijk", cb, prod))


@dataclass(frozen=True, eq=False)
class GnsRepresentation:
    """
    The GNS triple of a state restricted to a subalgebra

    Vectors of the quotient space are written in the G-orthonormal basis given by
    the columns of quotient_basis (algebra coordinates).
    """
    source_algebra: MatrixAlgebra
    state: RestrictedState
    gram: ComplexMatrix
    ideal_basis: np.ndarray
    quotient_basis: np.ndarray
    rep_matrices: np.ndarray
    cyclic: np.ndarray
    products: np.ndarray = field(repr=False)

    @property
    def dim(self) -> int:
        return int(self.quotient_basis.shape[1])

    @property
    def ideal_dim(self) -> int:
        return int(self.ideal_basis.shape[1])

    @property
    def cyclic_norm(self) -> float:
        return float(np.vdot(self.cyclic, self.cyclic).real)

    @property
    def quotient_map(self) -> np.ndarray:
        """Maps algebra coordinates x to the quotient coordinates of the class [x]"""
        return adjoint(self.quotient_basis) @ self.gram

    def represent(self, a) -> ComplexMatrix:
        coords = self.source_algebra.coordinates(a)
        return np.tensordot(coords, self.rep_matrices, axes=1)

    def class_of(self, a) -> np.ndarray:
        return self.quotient_map @ self.source_algebra.coordinates(a)


def build_gns(omega: StateLike, subalgebra: MatrixAlgebra,
              tol: Tolerance = DEFAULT_TOL) -> GnsRepresentation:
    """
    GNS representation of omega restricted to the subalgebra

    Args:
        omega: a state on the ambient algebra or its restriction to the subalgebra
        subalgebra: unital *-algebra
        tol: relative threshold for the Gram kernel

    Returns:
        GnsRepresentation
    """
    if isinstance(omega, AlgebraState):
        omega = restrict(omega, subalgebra)
    elif omega.subalgebra is not subalgebra:
        source = omega.subalgebra
        if (source.ambient_dim != subalgebra.ambient_dim or source.dim != subalgebra.dim
                or not all(source.contains(b, tol) for b in subalgebra.basis)):
            raise DimensionMismatch("Restricted state belongs to a different subalgebra")
        # same span, possibly another basis
        omega = RestrictedState(subalgebra=subalgebra,
                                values=np.array([omega.evaluate(b) for b in subalgebra.basis]))
    values = np.asarray(omega.values, dtype=np.complex128)

    unit_coords = subalgebra.coordinates(subalgebra.unit(tol))
    adj_prod, prod = structure_constants(subalgebra)
    gram = adj_prod @ values
    gram = 0.5 * (gram + adjoint(gram))

    eigvals, eigvecs = hermitian_eigensystem(gram, tol)
    top = float(eigvals[-1]) if eigvals.size else 0.0
    if top <= 0.0 or eigvals[0] < -max(tol.effective, 1e-12) * max(top, 1.0):
        raise NotPositive(
            f"Gram matrix is not positive (eigenvalues in [{eigvals[0]:.3e}, {top:.3e}])")
    keep = eigvals > tol.effective * top
    ideal = eigvecs[:, ~keep]
    quotient = eigvecs[:, keep] / np.sqrt(eigvals[keep])

    # column j of the left-multiplication matrix of b_a is coords(b_a b_j)
    left = np.transpose(prod, (0, 2, 1))
    q_adj_g = adjoint(quotient) @ gram
    rep = np.einsum("kn,anm,ml->akl", q_adj_g, left, quotient)
    cyclic = q_adj_g @ unit_coords

    gns = GnsRepresentation(
        source_algebra=subalgebra,
        state=omega,
        gram=gram,
        ideal_basis=ideal,
        quotient_basis=quotient,
        rep_matrices=rep,
        cyclic=cyclic,
        products=prod,
    )
    logger.debug("gns_built", algebra_dim=subalgebra.dim, quotient_dim=gns.dim,
                 ideal_dim=gns.ideal_dim)
    return gns


@dataclass(frozen=True, eq=False)
class GnsDecomposition:
    """Orthogonal invariant subspaces of the GNS space with their cyclic weights"""
    subspace_projectors: List[ComplexMatrix]
    weights: np.ndarray
    kind: DecompositionMode
    block_index: List[int]
    multiplicities: List[int]
    norm: float

    @property
    def irreducible_dims(self) -> List[int]:
        return [int(round(np.trace(p).real)) for p in self.subspace_projectors]

    @property
    def normalized_weights(self) -> np.ndarray:
        return self.weights / self.norm


@dataclass(frozen=True)
class _Component:
    index: int
    dim: int
    multiplicity: int
    projector: ComplexMatrix
    raising: List[ComplexMatrix]
    multiplicity_basis: np.ndarray


def _components(gns: GnsRepresentation, blocks: BlockStructure) -> List[_Component]:
    """Isotypic components of the GNS space carried by each block of the subalgebra"""
    out = []
    for k, (z, units) in enumerate(zip(blocks.central_projections, blocks.matrix_units)):
        zq = gns.represent(z)
        rank = int(round(np.trace(zq).real))
        if rank == 0:
            continue
        d = units.shape[0]
        raising = [gns.represent(units[i, 0]) for i in range(d)]
        e11 = raising[0]
        values, vectors = hermitian_eigensystem(0.5 * (e11 + adjoint(e11)))
        w = vectors[:, values > 0.5]
        out.append(_Component(k, d, w.shape[1], zq, raising, w))
    return out


def _subspace_projector(component: _Component, multiplicity_vector: np.ndarray) -> ComplexMatrix:
    vecs = np.stack([e @ multiplicity_vector for e in component.raising], axis=1)
    return vecs @ adjoint(vecs)


def _schmidt_rotation(component: _Component, cyclic: np.ndarray) -> np.ndarray:
    """Unitary on the multiplicity space aligning it with the cyclic vector's Schmidt basis"""
    coeffs = np.array([[np.vdot(e @ component.multiplicity_basis[:, beta], cyclic)
                        for beta in range(component.multiplicity)]
                       for e in component.raising])
    _, _, vh = scipy.linalg.svd(coeffs, full_matrices=True)
    return vh.T


def _random_rotation(component: _Component, rng: np.random.Generator, gap: float) -> np.ndarray:
    m = component.multiplicity
    if m == 1:
        return np.eye(1, dtype=np.complex128)
    values, vectors = hermitian_eigensystem(random_hermitian(m, rng))
    if len(cluster_eigenvalues(values, gap)) != m:
        raise DegenerateSplit("Random commutant element has colliding eigenvalues")
    return vectors


def _assemble(gns: GnsRepresentation, parts, kind: DecompositionMode) -> GnsDecomposition:
    parts.sort(key=lambda item: (-round(item[0], 12), item[1], item[2]))
    return GnsDecomposition(
        subspace_projectors=[p[4] for p in parts],
        weights=np.array([max(p[0], 0.0) for p in parts]),
        kind=kind,
        block_index=[p[1] for p in parts],
        multiplicities=[p[3] for p in parts],
        norm=gns.cyclic_norm,
    )


def _split(gns: GnsRepresentation, components: List[_Component], rotations,
           kind: DecompositionMode) -> GnsDecomposition:
    parts = []
    xi = gns.cyclic
    for comp, rot in zip(components, rotations):
        for s in range(comp.multiplicity):
            proj = _subspace_projector(comp, comp.multiplicity_basis @ rot[:, s])
            weight = float(np.vdot(proj @ xi, proj @ xi).real)
            parts.append((weight, comp.index, s, comp.multiplicity, proj))
    return _assemble(gns, parts, kind)


def decompose(gns: GnsRepresentation,
              mode: DecompositionMode = DecompositionMode.CANONICAL_SCHMIDT,
              seed: int = 0, tol: Tolerance = DEFAULT_TOL,
              blocks: Optional[BlockStructure] = None,
              cluster_gap: float = DEFAULT_CLUSTER_GAP,
              max_attempts: int = DEFAULT_MAX_SPLIT_ATTEMPTS) -> GnsDecomposition:
    """
    Decompose the GNS space into invariant subspaces

    The isotypic components are the images of the subalgebra's central projections.
    Inside a component C^d (x) C^m the irreducible subspaces are C^d (x) w for unit
    vectors w of the multiplicity space; the modes differ in how the w are chosen.

    Args:
        gns: GNS representation
        mode: canonical_schmidt (minimal entropy), random_split or isotypic_only
        seed: seed for the block structure and for random splitting
        tol: rank tolerance
        blocks: precomputed block structure of the source algebra

    Returns:
        GnsDecomposition ordered by descending weight
    """
    mode = DecompositionMode(mode)
    if blocks is None:
        blocks = block_structure(gns.source_algebra, seed=seed, tol=tol,
                                 cluster_gap=cluster_gap, max_attempts=max_attempts)
    components = _components(gns, blocks)
    xi = gns.cyclic

    if mode == DecompositionMode.ISOTYPIC_ONLY:
        parts = [(float(np.vdot(c.projector @ xi, c.projector @ xi).real), c.index, 0,
                  c.multiplicity, c.projector) for c in components]
        return _assemble(gns, parts, mode)

    if mode == DecompositionMode.CANONICAL_SCHMIDT:
        rotations = [_schmidt_rotation(c, xi) for c in components]
        return _split(gns, components, rotations, mode)

    for attempt in range(max_attempts):
        rng = make_rng(seed + attempt)
        try:
            rotations = [_random_rotation(c, rng, cluster_gap) for c in components]
        except DegenerateSplit:
            logger.debug("random_split_retry", attempt=attempt)
            continue
        return _split(gns, components, rotations, mode)
    raise DegenerateSplit(f"Random splitting failed after {max_attempts} attempts")


def basis_change_split(gns: GnsRepresentation, vectors: Sequence, block: Optional[int] = None,
                       seed: int = 0, tol: Tolerance = DEFAULT_TOL,
                       blocks: Optional[BlockStructure] = None) -> GnsDecomposition:
    """
    Splitting of one isotypic component along a user-supplied multiplicity basis

    vectors are mutually orthogonal nonzero vectors of the multiplicity space
    (for a doublet, a pair xi, eta); the remaining components use the Schmidt split.
    """
    vecs = [np.asarray(v, dtype=np.complex128).reshape(-1) for v in vectors]
    if not vecs:
        raise ValueError("At least one multiplicity vector is required")
    if blocks is None:
        blocks = block_structure(gns.source_algebra, seed=seed, tol=tol)
    components = _components(gns, blocks)
    size = vecs[0].size
    if block is None:
        matching = [c for c in components if c.multiplicity == size and size > 1]
        if not matching:
            raise DimensionMismatch(f"No isotypic component has multiplicity {size}")
        target = matching[0]
    else:
        matching = [c for c in components if c.index == block]
        if not matching:
            raise DimensionMismatch(f"Block {block} does not occur in the GNS space")
        target = matching[0]
    if size != target.multiplicity:
        raise DimensionMismatch(
            f"Vectors have length {size}, multiplicity space has dimension {target.multiplicity}")
    for v in vecs:
        if np.linalg.norm(v) == 0:
            raise ZeroVector("Multiplicity vectors must be nonzero")
    normed = [v / np.linalg.norm(v) for v in vecs]
    for i in range(len(normed)):
        for j in range(i):
            if abs(np.vdot(normed[i], normed[j])) > 1e-8:
                raise ValueError("Multiplicity vectors must be mutually orthogonal")
    completion = orthonormalize(list(np.eye(size, dtype=np.complex128)), basis=normed)
    custom = np.stack(completion[:size], axis=1)

    rotations = [custom if c is target else _schmidt_rotation(c, gns.cyclic) for c in components]
    return _split(gns, components, rotations, DecompositionMode.RANDOM_SPLIT)


def gns_entropy(gns: GnsRepresentation, decomposition: GnsDecomposition,
                log_base: LogBase = LogBase.NATURAL, tol: Tolerance = DEFAULT_TOL) -> float:
    """-sum lambda log lambda over the weights, renormalized by <cyclic|cyclic>"""
    if gns.cyclic_norm <= 0:
        raise NotPositive("Cyclic vector has zero norm")
    return entropy_from_weights(decomposition.weights, log_base, tol, renormalize=True)


@dataclass(frozen=True)
class GnsDiagnostics:
    """Maximum deviations of the defining identities of a GNS representation"""
    homomorphism: float
    star: float
    reconstruction: float
    cyclicity_rank: int
    quotient_dim: int
    isomorphic_groups: List[List[int]]

    @property
    def cyclic(self) -> bool:
        return self.cyclicity_rank == self.quotient_dim

    def max_deviation(self) -> float:
        return max(self.homomorphism, self.star, self.reconstruction)


def verify_gns(gns: GnsRepresentation, omega: Optional[StateLike] = None,
               tol: Tolerance = DEFAULT_TOL, seed: int = 0,
               blocks: Optional[BlockStructure] = None) -> GnsDiagnostics:
    algebra = gns.source_algebra
    rep = gns.rep_matrices

    composed = np.einsum("ijk,kab->ijab", gns.products, rep)
    multiplied = np.einsum("iab,jbc->ijac", rep, rep)
    homomorphism = max_abs(composed - multiplied)

    star = 0.0
    for i, b in enumerate(algebra.basis):
        star = max(star, max_abs(gns.represent(adjoint(b)) - adjoint(rep[i])))

    if omega is None or isinstance(omega, RestrictedState):
        values = gns.state.values if omega is None else omega.values
    else:
        values = np.array([evaluate(omega, b) for b in algebra.basis])
    expectations = np.einsum("k,ikl,l->i", np.conj(gns.cyclic), rep, gns.cyclic)
    reconstruction = max_abs(expectations - values)

    orbit = np.stack([r @ gns.cyclic for r in rep], axis=1) if gns.dim else np.zeros((0, 0))
    cyclicity_rank = numerical_rank(orbit, tol) if gns.dim else 0

    decomposition = decompose(gns, DecompositionMode.CANONICAL_SCHMIDT, seed=seed, tol=tol,
                              blocks=blocks)
    groups = {}
    for idx, k in enumerate(decomposition.block_index):
        groups.setdefault(k, []).append(idx)
    isomorphic = [members for members in groups.values() if len(members) > 1]

    return GnsDiagnostics(
        homomorphism=homomorphism,
        star=star,
        reconstruction=reconstruction,
        cyclicity_rank=cyclicity_rank,
        quotient_dim=gns.dim,
        isomorphic_groups=isomorphic,
    )
