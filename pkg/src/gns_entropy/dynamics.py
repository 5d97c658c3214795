"""
Restricted dynamics
Unitary evolution of states, entropy and rank along restricted trajectories,
and Kraus maps between restricted densities
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np
import scipy.optimize
import structlog

from .algebra import BlockStructure, MatrixAlgebra, block_structure
from .exceptions import DimensionMismatch, NonHermitian, RankIncrease
from .numkernel import (
    DEFAULT_TOL, ComplexMatrix, Tolerance, adjoint, as_square, hermitian_eigensystem,
    is_hermitian, max_abs, numerical_rank, unitary_from_hamiltonian,
)
from .quantum_state import (
    AlgebraState, LogBase, canonical_entropy, entropy_from_weights, state_from_vector,
)

logger = structlog.get_logger(__name__)


def rotation_hamiltonian(u, v) -> ComplexMatrix:
    """H = -i|v><u| + i|u><v|; exp(itH) rotates cos(a) u + sin(a) v into angle a + t"""
    u = np.asarray(u, dtype=np.complex128).reshape(-1)
    v = np.asarray(v, dtype=np.complex128).reshape(-1)
    if u.shape != v.shape:
        raise DimensionMismatch("Rotation vectors differ in length")
    return -1j * np.outer(v, np.conj(u)) + 1j * np.outer(u, np.conj(v))


def evolve_state(omega: AlgebraState, hamiltonian, t: float,
                 tol: Tolerance = DEFAULT_TOL) -> AlgebraState:
    """rho(t) = exp(itH) rho exp(-itH)"""
    h = as_square(hamiltonian, "hamiltonian")
    if h.shape[0] != omega.ambient_dim:
        raise DimensionMismatch(f"Hamiltonian is {h.shape[0]}-dimensional, state is {omega.ambient_dim}")
    if not is_hermitian(h, tol):
        raise NonHermitian("Hamiltonian is not hermitian")
    u = unitary_from_hamiltonian(h, t, tol)
    return AlgebraState(ambient_dim=omega.ambient_dim, density=u @ omega.density @ adjoint(u),
                        purity_hint=omega.purity_hint)


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Entropy, rank and spectral weights of a restricted state sampled along a flow"""
    times: np.ndarray
    entropies: np.ndarray
    ranks: List[int]
    weights_path: List[np.ndarray] = field(repr=False)


@dataclass(frozen=True)
class RankEvent:
    t_before: float
    t_after: float
    rank_before: int
    rank_after: int


def rank_events(trajectory: Trajectory) -> List[RankEvent]:
    """Adjacent samples between which the rank changes"""
    events = []
    for i in range(1, len(trajectory.ranks)):
        if trajectory.ranks[i] != trajectory.ranks[i - 1]:
            events.append(RankEvent(float(trajectory.times[i - 1]), float(trajectory.times[i]),
                                    trajectory.ranks[i - 1], trajectory.ranks[i]))
    return events


def restricted_trajectory(omega0: AlgebraState, hamiltonian, subalgebra: MatrixAlgebra,
                          times: Sequence[float], seed: int = 0, tol: Tolerance = DEFAULT_TOL,
                          blocks: Optional[BlockStructure] = None, workers: int = 1,
                          log_base: LogBase = LogBase.NATURAL) -> Trajectory:
    """
    Evolve, restrict and take the canonical entropy at each time

    Args:
        omega0: initial state
        hamiltonian: hermitian generator
        subalgebra: observed algebra
        times: strictly increasing sample times
        seed: seed for the block structure
        tol: rank tolerance
        blocks: precomputed block structure of the subalgebra
        workers: thread fan-out over times

    Returns:
        Trajectory
    """
    times = np.asarray(times, dtype=float)
    if times.size == 0:
        raise ValueError("At least one time is required")
    if np.any(np.diff(times) <= 0):
        raise ValueError("Times must be strictly increasing")
    if blocks is None:
        blocks = block_structure(subalgebra, seed=seed, tol=tol)

    def sample(t: float) -> Tuple[float, np.ndarray]:
        state = evolve_state(omega0, hamiltonian, t, tol)
        result = canonical_entropy(state, subalgebra, tol=tol, blocks=blocks, log_base=log_base)
        weights = np.sort(np.clip(np.linalg.eigvalsh(result.density), 0.0, None))[::-1]
        return result.entropy, weights

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            samples = list(pool.map(sample, times))
    else:
        samples = [sample(t) for t in times]

    entropies = np.array([s[0] for s in samples])
    weights_path = [s[1] for s in samples]
    ranks = [int(np.sum(w > tol.effective)) for w in weights_path]
    trajectory = Trajectory(times=times, entropies=entropies, ranks=ranks, weights_path=weights_path)
    logger.debug("restricted_trajectory", samples=times.size,
                 rank_events=len(rank_events(trajectory)))
    return trajectory


@dataclass(frozen=True, eq=False)
class KrausPair:
    """Kraus operators carrying the restricted density at theta_from to the one at theta_to"""
    theta_from: float
    theta_to: float
    maps: List[ComplexMatrix]
    residual: float


def apply_kraus(maps: Sequence[ComplexMatrix], rho) -> ComplexMatrix:
    """sum_a L_a^dagger rho L_a"""
    rho = as_square(rho, "density")
    out = np.zeros_like(rho)
    for m in maps:
        out = out + adjoint(m) @ rho @ m
    return out


def _support(values: np.ndarray, tol: Tolerance) -> np.ndarray:
    top = max(float(values.max()), 0.0) if values.size else 0.0
    return values > max(tol.effective, 1e-12) * max(top, 1.0)


def kraus_between(rho_from, rho_to, tol: Tolerance = DEFAULT_TOL,
                  basis: Optional[np.ndarray] = None) -> List[ComplexMatrix]:
    """
    Kraus operators with sum_a L_a^dagger rho_from L_a = rho_to

    When the densities commute (or a common eigenbasis is supplied) each map is
    sqrt(mu_a / lambda_a) |chi_a><chi_a| in the shared eigenbasis; otherwise the
    eigenvectors of the two densities are paired by maximal overlap.
    """
    rho_from = as_square(rho_from, "rho_from")
    rho_to = as_square(rho_to, "rho_to")
    if rho_from.shape != rho_to.shape:
        raise DimensionMismatch("Densities have different dimensions")
    rank_from = numerical_rank(rho_from, tol)
    rank_to = numerical_rank(rho_to, tol)
    if rank_to > rank_from:
        raise RankIncrease(f"Cannot map a rank-{rank_from} density onto rank {rank_to}")

    if basis is None and max_abs(rho_from @ rho_to - rho_to @ rho_from) <= 1e-10:
        _, basis = hermitian_eigensystem(rho_from + np.sqrt(2.0) * rho_to, tol)

    if basis is not None:
        basis = as_square(basis, "basis")
        lam = np.real(np.einsum("ia,ij,ja->a", np.conj(basis), rho_from, basis))
        mu = np.real(np.einsum("ia,ij,ja->a", np.conj(basis), rho_to, basis))
        src = _support(lam, tol)
        if np.any(_support(mu, tol) & ~src):
            raise RankIncrease("Target density has weight outside the source support")
        return [np.sqrt(max(mu[a], 0.0) / lam[a]) * np.outer(basis[:, a], np.conj(basis[:, a]))
                for a in np.nonzero(src)[0]]

    lam, chi = hermitian_eigensystem(rho_from, tol)
    mu, phi = hermitian_eigensystem(rho_to, tol)
    src = np.nonzero(_support(lam, tol))[0]
    dst = np.nonzero(_support(mu, tol))[0]
    overlap = np.abs(adjoint(chi[:, src]) @ phi[:, dst])
    rows, cols = scipy.optimize.linear_sum_assignment(-overlap)
    return [np.sqrt(mu[dst[c]] / lam[src[r]]) * np.outer(chi[:, src[r]], np.conj(phi[:, dst[c]]))
            for r, c in zip(rows, cols)]


@dataclass(frozen=True, eq=False)
class FamilyKrausSetup:
    """
    A one-parameter family of states observed through a fixed subalgebra

    restricted_density(theta) is the canonical block density in the fixed block
    coordinates of the subalgebra.
    """
    state_vector: Callable[[float], np.ndarray]
    algebra: MatrixAlgebra
    blocks: BlockStructure

    def restricted_density(self, theta: float, tol: Tolerance = DEFAULT_TOL) -> ComplexMatrix:
        omega = state_from_vector(self.state_vector(theta))
        return canonical_entropy(omega, self.algebra, tol=tol, blocks=self.blocks).density

    def entropy(self, theta: float, tol: Tolerance = DEFAULT_TOL) -> float:
        omega = state_from_vector(self.state_vector(theta))
        return canonical_entropy(omega, self.algebra, tol=tol, blocks=self.blocks).entropy


def family_kraus_setup(state_vector: Callable[[float], np.ndarray], algebra: MatrixAlgebra,
                       seed: int = 0, tol: Tolerance = DEFAULT_TOL) -> FamilyKrausSetup:
    return FamilyKrausSetup(state_vector=state_vector, algebra=algebra,
                            blocks=block_structure(algebra, seed=seed, tol=tol))


def kraus_maps(theta_from: float, theta_to: float, setup: FamilyKrausSetup,
               tol: Tolerance = DEFAULT_TOL) -> KrausPair:
    rho_from = setup.restricted_density(theta_from, tol)
    rho_to = setup.restricted_density(theta_to, tol)
    maps = kraus_between(rho_from, rho_to, tol)
    residual = max_abs(apply_kraus(maps, rho_from) - rho_to)
    logger.debug("kraus_maps", theta_from=theta_from, theta_to=theta_to, n_maps=len(maps),
                 residual=residual)
    return KrausPair(theta_from=theta_from, theta_to=theta_to, maps=maps, residual=residual)


def trajectory_entropy_check(trajectory: Trajectory, log_base: LogBase = LogBase.NATURAL) -> float:
    """Largest gap between recorded entropies and those recomputed from the weights"""
    recomputed = np.array([entropy_from_weights(w, log_base) for w in trajectory.weights_path])
    return float(np.max(np.abs(recomputed - trajectory.entropies))) if recomputed.size else 0.0
