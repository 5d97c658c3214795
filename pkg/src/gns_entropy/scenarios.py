"""
Scenario runner
Builds states and subalgebras from scenario documents, dispatches tasks, and holds the
registry of built-in examples and the entropy surface emitter
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
import structlog

from .algebra import (
    BlockStructure, MatrixAlgebra, block_structure, commutant, full_matrix_algebra,
    generate_algebra,
)
from .config import get_settings
from .dynamics import (
    family_kraus_setup, kraus_maps, rank_events, restricted_trajectory, rotation_hamiltonian,
)
from .exceptions import DimensionMismatch, GnsEntropyError, SchemaError
from .gns import DecompositionMode, build_gns, decompose, gns_entropy, verify_gns
from .models import (
    BlockEntry, Diagnostics, EvolutionSpec, KrausPayload, ModesComparison, NamedSubalgebra,
    Projection, RankEventEntry, Report, Scenario, SpaceSpec, StateFamily, StateSpec,
    SurfacePayload, Task, TrajectoryPayload, encode_matrix, scenario_from_dict, to_matrix,
    to_vector,
)
from .numkernel import Tolerance, make_rng, random_state_vector
from .qdeform import (
    QSubalgebra, TWO_QUANTUM_SECTOR, build_q_oscillators, q_boson_setup, q_boson_state,
)
from .quantum_state import (
    AlgebraState, LogBase, canonical_entropy, entropy_from_weights, state_from_density,
    state_from_vector,
)
from .restrictions import ParitySetup, measurement_restriction, parity_restriction_vs_average
from .statistics import (
    FERMI4_BLOCK_LABELS, ParticleSpace, Sector, bose3_entropy, bose3_state, fermi3_f_basis,
    fermi4_state, one_particle_subalgebra,
)

logger = structlog.get_logger(__name__)

PAULI = [
    np.eye(2, dtype=np.complex128),
    np.array([[0, 1], [1, 0]], dtype=np.complex128),
    np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
    np.array([[1, 0], [0, -1]], dtype=np.complex128),
]
UP = np.diag([1.0, 0.0]).astype(np.complex128)
DOWN = np.diag([0.0, 1.0]).astype(np.complex128)

FAMILY_DIMENSIONS = {
    StateFamily.M2_LAMBDA: 2,
    StateFamily.BELL_THETA: 4,
    StateFamily.FERMI4_THETA: 6,
    StateFamily.FERMI3_CHOICE2: 3,
    StateFamily.FERMI3_RANDOM: 3,
    StateFamily.BOSE3: 6,
    StateFamily.QBOSON: 6,
    StateFamily.PARITY_TOY: 2,
}


def binary_entropy(p: float, log_base: LogBase = LogBase.NATURAL) -> float:
    return entropy_from_weights([p, 1.0 - p], log_base)


# State and subalgebra construction

@dataclass
class ScenarioContext:
    """Resolved numerical objects of a scenario"""
    scenario: Scenario
    tol: Tolerance
    dim: int
    space: Optional[ParticleSpace]
    omega: AlgebraState
    subalgebra: MatrixAlgebra

    def family_vector(self, **overrides: float) -> np.ndarray:
        params = {**self.scenario.state.params, **overrides}
        return family_vector(self.scenario.state.family, params, self.space, self.scenario.seed)


def resolve_space(spec: SpaceSpec) -> Tuple[int, Optional[ParticleSpace]]:
    if spec.dimension is not None:
        return spec.dimension, None
    labels = spec.labels
    try:
        space = ParticleSpace.build(spec.one_particle_dim, spec.particles, spec.sector, labels=labels,
                                    size_cap=get_settings().size_cap)
    except DimensionMismatch as err:
        raise SchemaError(str(err), field_path="space.labels") from err
    return space.dim, space


def _require_space(space: Optional[ParticleSpace], sector: Sector, d: int, field: str) -> ParticleSpace:
    if space is None or space.sector != sector or space.one_particle_dim != d or space.particles != 2:
        raise SchemaError(f"needs a two-particle {sector.value} space with d={d}", field_path=field)
    return space


def family_vector(family: StateFamily, params: Dict[str, float],
                  space: Optional[ParticleSpace], seed: int) -> np.ndarray:
    """State vector of a pure named family"""
    theta = params.get("theta", 0.0)
    if family == StateFamily.BELL_THETA:
        v = np.zeros(4, dtype=np.complex128)
        v[1], v[2] = np.cos(theta), -np.sin(theta)
        return v
    if family == StateFamily.FERMI4_THETA:
        return fermi4_state(theta, _require_space(space, Sector.ANTISYMMETRIC, 4, "state.family"))
    if family == StateFamily.FERMI3_CHOICE2:
        f = fermi3_f_basis(_require_space(space, Sector.ANTISYMMETRIC, 3, "state.family"))
        return np.cos(theta) * f[:, 0] + np.sin(theta) * f[:, 2]
    if family == StateFamily.FERMI3_RANDOM:
        _require_space(space, Sector.ANTISYMMETRIC, 3, "state.family")
        return random_state_vector(3, make_rng(seed + int(params.get("draw", 0))))
    if family == StateFamily.BOSE3:
        return bose3_state(theta, params["phi"], _require_space(space, Sector.SYMMETRIC, 3, "state.family"))
    if family == StateFamily.QBOSON:
        system = build_q_oscillators(3, cutoff=2, q=params["q"])
        sector = np.stack([system.basis_state(occ) for occ in TWO_QUANTUM_SECTOR], axis=1)
        return q_boson_state(theta, params["phi"], system, sector)
    if family == StateFamily.PARITY_TOY:
        return np.array([np.cos(theta), np.sin(theta)], dtype=np.complex128)
    raise SchemaError(f"family {family.value} has no state vector", field_path="state.family")


def build_state(spec: StateSpec, dim: int, space: Optional[ParticleSpace], seed: int,
                tol: Tolerance) -> AlgebraState:
    try:
        if spec.vector is not None:
            return state_from_vector(to_vector(spec.vector), dim)
        if spec.density is not None:
            rho = to_matrix(spec.density)
            if rho.shape[0] != dim:
                raise DimensionMismatch(f"density is {rho.shape[0]}-dimensional, space is {dim}")
            return state_from_density(rho, tol)
    except DimensionMismatch as err:
        raise SchemaError(str(err), field_path="state") from err

    if FAMILY_DIMENSIONS[spec.family] != dim:
        raise SchemaError(f"family {spec.family.value} lives in dimension "
                          f"{FAMILY_DIMENSIONS[spec.family]}, space has {dim}", field_path="state.family")
    if spec.family == StateFamily.M2_LAMBDA:
        lam = spec.params["lambda"]
        return state_from_density(np.diag([lam, 1.0 - lam]).astype(np.complex128), tol)
    return state_from_vector(family_vector(spec.family, spec.params, space, seed))


def bell_subalgebra(named: NamedSubalgebra, tol: Tolerance) -> MatrixAlgebra:
    """Observables of the first qubit, optionally cut down by a projector on the second"""
    if named == NamedSubalgebra.BELL_LOCAL:
        return generate_algebra([np.kron(s, np.eye(2)) for s in PAULI[1:]], True, tol)
    corners = {
        NamedSubalgebra.BELL_PLUS: [UP],
        NamedSubalgebra.BELL_MINUS: [DOWN],
        NamedSubalgebra.BELL_PLUS_MINUS: [UP, DOWN],
    }[named]
    gens = [np.kron(s, c) for c in corners for s in PAULI]
    return generate_algebra(gens, include_ambient_identity=False, tol=tol)


def build_subalgebra(scenario: Scenario, dim: int, space: Optional[ParticleSpace],
                     tol: Tolerance) -> MatrixAlgebra:
    spec = scenario.subalgebra
    if spec.generators is not None:
        gens = [to_matrix(g) for g in spec.generators]
        if any(g.shape[0] != dim for g in gens):
            raise SchemaError(f"generators must be {dim}x{dim}", field_path="subalgebra.generators")
        return generate_algebra(gens, spec.include_identity, tol)
    if spec.levels is not None:
        if space is None:
            raise SchemaError("levels need a particle space", field_path="subalgebra.levels")
        try:
            return one_particle_subalgebra(space, spec.levels, tol)
        except DimensionMismatch as err:
            raise SchemaError(str(err), field_path="subalgebra.levels") from err

    named = spec.named
    if named in (NamedSubalgebra.BELL_LOCAL, NamedSubalgebra.BELL_PLUS,
                 NamedSubalgebra.BELL_MINUS, NamedSubalgebra.BELL_PLUS_MINUS):
        if dim != 4:
            raise SchemaError("Bell subalgebras act on C^2 (x) C^2", field_path="subalgebra.named")
        return bell_subalgebra(named, tol)
    if named == NamedSubalgebra.FULL:
        return full_matrix_algebra(dim)
    if named == NamedSubalgebra.PARITY_COMMUTANT:
        return commutant(generate_algebra([to_matrix(scenario.parity.operator)], True, tol), tol)
    if named == NamedSubalgebra.PROJECTOR_COMMUTANT:
        return commutant(generate_algebra([to_matrix(scenario.collapse.projector)], True, tol), tol)
    which = QSubalgebra.ONE_PARTICLE if named == NamedSubalgebra.Q_ONE_PARTICLE else QSubalgebra.TRIPLET
    if dim != 6:
        raise SchemaError("q-boson subalgebras act on the six-dimensional sector", field_path="subalgebra.named")
    q = scenario.state.params.get("q", 1.0)
    return q_boson_setup(0.0, 0.0, q, which, tol).algebra


def build_context(scenario: Scenario) -> ScenarioContext:
    tol = Tolerance(scenario.tolerance)
    dim, space = resolve_space(scenario.space)
    omega = build_state(scenario.state, dim, space, scenario.seed, tol)
    subalgebra = build_subalgebra(scenario, dim, space, tol)
    return ScenarioContext(scenario=scenario, tol=tol, dim=dim, space=space, omega=omega,
                           subalgebra=subalgebra)


# Closed forms for the named families

def closed_form_entropy(scenario: Scenario) -> Optional[float]:
    """Known analytic entropy of the restricted state, when the combination has one"""
    family = scenario.state.family
    params = scenario.state.params
    named = scenario.subalgebra.named
    levels = sorted(scenario.subalgebra.levels) if scenario.subalgebra.levels else None
    base = scenario.log_base
    theta = params.get("theta", 0.0)
    if family == StateFamily.M2_LAMBDA and named == NamedSubalgebra.FULL:
        return binary_entropy(params["lambda"], base)
    if family == StateFamily.BELL_THETA:
        if named in (NamedSubalgebra.BELL_LOCAL, NamedSubalgebra.BELL_PLUS_MINUS,
                     NamedSubalgebra.PROJECTOR_COMMUTANT):
            return binary_entropy(np.cos(theta) ** 2, base)
        if named in (NamedSubalgebra.BELL_PLUS, NamedSubalgebra.BELL_MINUS):
            return 0.0
    if family in (StateFamily.FERMI4_THETA, StateFamily.FERMI3_CHOICE2) and levels == [1, 2]:
        return binary_entropy(np.cos(theta) ** 2, base)
    if family == StateFamily.FERMI3_RANDOM and levels == [1, 2, 3]:
        return 0.0
    if family == StateFamily.BOSE3 and levels == [1, 2]:
        return bose3_entropy(theta, params["phi"], base)
    if family == StateFamily.QBOSON:
        if named == NamedSubalgebra.Q_ONE_PARTICLE:
            return bose3_entropy(theta, params["phi"], base)
        if named == NamedSubalgebra.Q_TRIPLET:
            return binary_entropy(np.sin(theta) ** 2 * np.cos(params["phi"]) ** 2, base)
    if family == StateFamily.PARITY_TOY and named == NamedSubalgebra.PARITY_COMMUTANT:
        return binary_entropy(np.cos(theta) ** 2, base)
    return None


# Surface

def surface_grid(n: int) -> List[Tuple[float, float]]:
    """
    n x n samples over theta in [0, pi] and phi in [0, 2 pi)

    Both halves of the theta axis are sampled with their endpoints so that 0, pi/2
    and pi are hit exactly; phi = 2 pi j / n.
    """
    if n < 2:
        raise ValueError("Grid needs at least 2 points per axis")
    thetas = np.unique(np.concatenate([
        np.linspace(0.0, np.pi / 2, n // 2 + 1),
        np.linspace(np.pi / 2, np.pi, n - n // 2),
    ]))
    phis = 2 * np.pi * np.arange(n) / n
    return [(float(t), float(p)) for t in thetas for p in phis]


def stereographic(theta: float, phi: float) -> Tuple[float, float]:
    """Projection from the north pole; the pole itself maps to infinity"""
    x, y, z = np.sin(theta) * np.cos(phi), np.sin(theta) * np.sin(phi), np.cos(theta)
    if np.isclose(z, 1.0, atol=1e-15):
        return float("inf"), float("inf")
    return float(x / (1 - z)), float(y / (1 - z))


def emit_surface(samples: Sequence[Tuple[float, float]],
                 projection: Projection = Projection.STEREOGRAPHIC,
                 entropy_fn: Optional[Callable[[float, float], float]] = None,
                 workers: Optional[int] = None) -> pd.DataFrame:
    """
    Entropy over (theta, phi) samples as a table with columns x, y, entropy, theta, phi

    Args:
        samples: (theta, phi) pairs
        projection: stereographic image of the sphere point, or the raw angles
        entropy_fn: entropy pipeline, the two-boson restriction by default
        workers: thread fan-out
    """
    if not samples:
        raise ValueError("Surface needs at least one sample")
    projection = Projection(projection)
    entropy_fn = entropy_fn or bose3_surface_pipeline()
    workers = workers or get_settings().workers
    with ThreadPoolExecutor(max_workers=workers) as pool:
        entropies = list(pool.map(lambda tp: entropy_fn(*tp), samples))
    rows = []
    for (theta, phi), s in zip(samples, entropies):
        x, y = stereographic(theta, phi) if projection == Projection.STEREOGRAPHIC else (theta, phi)
        rows.append({"x": x, "y": y, "entropy": s, "theta": theta, "phi": phi})
    return pd.DataFrame(rows, columns=["x", "y", "entropy", "theta", "phi"])


def write_surface_csv(frame: pd.DataFrame, target=None) -> Optional[str]:
    return frame.to_csv(target, columns=["x", "y", "entropy"], index=False)


def count_zero_points(frame: pd.DataFrame, threshold: float = 1e-12) -> int:
    """Distinct sphere points where the entropy vanishes"""
    zeros = frame[frame["entropy"] <= threshold]
    points = {
        (round(np.sin(t) * np.cos(p), 9) + 0.0, round(np.sin(t) * np.sin(p), 9) + 0.0,
         round(np.cos(t), 9) + 0.0)
        for t, p in zip(zeros["theta"], zeros["phi"])
    }
    return len(points)


def _context_surface_fn(ctx: ScenarioContext, blocks: BlockStructure) -> Callable[[float, float], float]:
    def entropy_at(theta: float, phi: float) -> float:
        omega = state_from_vector(ctx.family_vector(theta=theta, phi=phi))
        return canonical_entropy(omega, ctx.subalgebra, tol=ctx.tol, blocks=blocks,
                                 log_base=ctx.scenario.log_base).entropy
    return entropy_at


def bose3_surface_pipeline(seed: Optional[int] = None,
                           tol: Optional[Tolerance] = None) -> Callable[[float, float], float]:
    """Entropy of the two-boson state restricted to the levels {1,2} algebra"""
    settings = get_settings()
    tol = tol or Tolerance(settings.tolerance)
    space = ParticleSpace.build(3, 2, Sector.SYMMETRIC)
    algebra = one_particle_subalgebra(space, [1, 2], tol)
    blocks = block_structure(algebra, seed=settings.seed if seed is None else seed, tol=tol)

    def entropy_at(theta: float, phi: float) -> float:
        omega = state_from_vector(bose3_state(theta, phi, space))
        return canonical_entropy(omega, algebra, tol=tol, blocks=blocks).entropy
    return entropy_at


# Running

@dataclass
class ScenarioRun:
    report: Report
    surface: Optional[pd.DataFrame] = None


def _wrap(err: GnsEntropyError, name: str, task: str) -> GnsEntropyError:
    if isinstance(err, SchemaError):
        return SchemaError(f"[{name}:{task}] {err}", field_path=None)
    return err.__class__(f"[{name}:{task}] {err}")


def _rotation_or_matrix(ctx: ScenarioContext, spec: EvolutionSpec) -> np.ndarray:
    if spec.hamiltonian is not None:
        h = to_matrix(spec.hamiltonian)
    else:
        u, v = (to_vector(x) for x in spec.rotation)
        h = rotation_hamiltonian(u, v)
    if h.shape[0] != ctx.dim:
        raise SchemaError(f"hamiltonian must be {ctx.dim}x{ctx.dim}", field_path="evolution")
    return h


def execute_scenario(scenario: Scenario) -> ScenarioRun:
    """Run every task of a scenario; deterministic for a fixed scenario and seed"""
    name = scenario.name or "scenario"
    logger.info("scenario_started", scenario=name, tasks=[t.value for t in scenario.tasks])
    task = "build"
    try:
        ctx = build_context(scenario)
        tol, seed = ctx.tol, scenario.seed
        settings = get_settings()
        split = {"cluster_gap": settings.cluster_gap, "max_attempts": settings.max_split_attempts}
        report = Report(
            scenario=scenario.model_dump(mode="json"),
            subalgebra_dimension=ctx.subalgebra.dim,
            log_base=scenario.log_base,
            mode=scenario.mode,
            expected_entropy=closed_form_entropy(scenario),
        )
        surface = None
        needs_gns = {Task.GNS, Task.DECOMPOSE, Task.ENTROPY, Task.ENTROPY_MODES_COMPARE}
        blocks = block_structure(ctx.subalgebra, seed=seed, tol=tol, **split)

        if needs_gns & set(scenario.tasks):
            task = "gns"
            gns = build_gns(ctx.omega, ctx.subalgebra, tol)
            report.gns_dimension = gns.dim
            report.ideal_dimension = gns.ideal_dim
            report.cyclic_norm = gns.cyclic_norm
            if Task.GNS in scenario.tasks:
                diag = verify_gns(gns, ctx.omega, tol, seed=seed, blocks=blocks)
                report.diagnostics = Diagnostics(
                    homomorphism=diag.homomorphism, star=diag.star,
                    reconstruction=diag.reconstruction, cyclicity_rank=diag.cyclicity_rank,
                    isomorphic_groups=diag.isomorphic_groups,
                )
            task = "decompose"
            decomposition = decompose(gns, scenario.mode, seed=seed, tol=tol, blocks=blocks, **split)
            weights = decomposition.normalized_weights
            report.blocks = [
                BlockEntry(d=d, m=m, weight=float(w), block=k)
                for d, m, w, k in zip(decomposition.irreducible_dims, decomposition.multiplicities,
                                      weights, decomposition.block_index)
            ]
            report.entropy = gns_entropy(gns, decomposition, scenario.log_base, tol)

            if Task.ENTROPY_MODES_COMPARE in scenario.tasks:
                task = "entropy_modes_compare"
                canonical = gns_entropy(gns, decompose(gns, DecompositionMode.CANONICAL_SCHMIDT,
                                                       seed=seed, tol=tol, blocks=blocks, **split),
                                        scenario.log_base, tol)
                isotypic = gns_entropy(gns, decompose(gns, DecompositionMode.ISOTYPIC_ONLY,
                                                      seed=seed, tol=tol, blocks=blocks, **split),
                                       scenario.log_base, tol)
                randoms = [gns_entropy(gns, decompose(gns, DecompositionMode.RANDOM_SPLIT, seed=seed + k,
                                                      tol=tol, blocks=blocks, **split),
                                       scenario.log_base, tol)
                           for k in range(scenario.compare_seeds)]
                report.modes_comparison = ModesComparison(
                    canonical=canonical, isotypic=isotypic, random=randoms,
                    min_random=min(randoms) if randoms else canonical,
                )

        if Task.EVOLVE in scenario.tasks:
            task = "evolve"
            h = _rotation_or_matrix(ctx, scenario.evolution)
            trajectory = restricted_trajectory(ctx.omega, h, ctx.subalgebra, scenario.evolution.times,
                                               seed=seed, tol=tol, blocks=blocks,
                                               log_base=scenario.log_base)
            report.trajectory = TrajectoryPayload(
                times=[float(t) for t in trajectory.times],
                entropies=[float(s) for s in trajectory.entropies],
                ranks=trajectory.ranks,
                rank_events=[RankEventEntry(**vars(e)) for e in rank_events(trajectory)],
            )

        if Task.KRAUS in scenario.tasks:
            task = "kraus"
            setup = family_kraus_setup(lambda th: ctx.family_vector(theta=th), ctx.subalgebra,
                                       seed=seed, tol=tol)
            spec = scenario.kraus
            pair = kraus_maps(spec.theta_from, spec.theta_to, setup, tol)
            payload = KrausPayload(theta_from=pair.theta_from, theta_to=pair.theta_to,
                                   n_maps=len(pair.maps), residual=pair.residual)
            if spec.random_pairs:
                rng = make_rng(seed)
                angles = rng.uniform(0.05, np.pi / 2 - 0.05, size=(spec.random_pairs, 2))
                payload.max_random_residual = max(kraus_maps(a, b, setup, tol).residual
                                                  for a, b in angles)
            report.kraus = payload

        if Task.PARITY in scenario.tasks:
            task = "parity"
            spec = scenario.parity
            setup = ParitySetup.build(
                to_matrix(spec.operator), even_subalgebra=ctx.subalgebra,
                corners=[to_matrix(c) for c in spec.corners] if spec.corners else None,
                odd_elements=[to_matrix(a) for a in spec.odd_elements], tol=tol,
            )
            report.parity = parity_restriction_vs_average(ctx.omega, setup, tol, seed=seed)

        if Task.COLLAPSE in scenario.tasks:
            task = "collapse"
            restricting = None
            if scenario.subalgebra.named != NamedSubalgebra.PROJECTOR_COMMUTANT:
                restricting = ctx.subalgebra
            report.collapse = measurement_restriction(ctx.omega, to_matrix(scenario.collapse.projector),
                                                      tol, algebra=restricting, seed=seed)

        if Task.SURFACE in scenario.tasks:
            task = "surface"
            spec = scenario.surface
            surface = emit_surface(surface_grid(spec.grid), spec.projection,
                                   _context_surface_fn(ctx, blocks))
            expected = [closed_form_entropy(scenario.model_copy(update={
                "state": scenario.state.model_copy(update={"params": {**scenario.state.params,
                                                                      "theta": t, "phi": p}})}))
                for t, p in zip(surface["theta"], surface["phi"])]
            deviation = 0.0
            if all(e is not None for e in expected):
                deviation = float(np.max(np.abs(np.array(expected) - surface["entropy"].to_numpy())))
            report.surface = SurfacePayload(
                grid=spec.grid, projection=spec.projection, rows=len(surface),
                zero_points=count_zero_points(surface), max_formula_deviation=deviation,
            )
    except GnsEntropyError as err:
        logger.error("scenario_failed", scenario=name, task=task, error=type(err).__name__,
                     message=str(err))
        raise _wrap(err, name, task) from err

    logger.info("scenario_completed", scenario=name, entropy=report.entropy)
    return ScenarioRun(report=report, surface=surface)


def run_scenario(scenario: Scenario) -> Report:
    return execute_scenario(scenario).report


# Built-in examples

def _base(name: str, **fields: Any) -> Dict[str, Any]:
    settings = get_settings()
    return {"name": name, "seed": settings.seed, "tolerance": settings.tolerance, **fields}


def _float(params: Dict[str, Any], key: str, default: float) -> float:
    try:
        return float(params.get(key, default))
    except (TypeError, ValueError) as err:
        raise SchemaError(f"parameter {key} must be a number", field_path=f"params.{key}") from err


def _m2_lambda(params):
    return _base("m2-lambda", space={"dimension": 2},
                 state={"family": "m2_lambda", "params": {"lambda": _float(params, "lambda", 0.5)}},
                 subalgebra={"named": "full"},
                 tasks=["gns", "decompose", "entropy", "entropy_modes_compare"])


def _bell_theta(params):
    return _base("bell-theta", space={"dimension": 4},
                 state={"family": "bell_theta", "params": {"theta": _float(params, "theta", np.pi / 4)}},
                 subalgebra={"named": "bell_local"}, tasks=["gns", "entropy"])


def _bell_corners(params):
    corner = str(params.get("corner", "both"))
    named = {"plus": "bell_plus", "minus": "bell_minus", "both": "bell_plus_minus"}.get(corner)
    if named is None:
        raise SchemaError("corner must be plus, minus or both", field_path="params.corner")
    return _base("bell-corners", space={"dimension": 4},
                 state={"family": "bell_theta", "params": {"theta": _float(params, "theta", np.pi / 4)}},
                 subalgebra={"named": named}, tasks=["gns", "entropy"])


def _fermi4(params):
    return _base("fermi4",
                 space={"one_particle_dim": 4, "particles": 2, "sector": "antisymmetric",
                        "labels": [list(lab) for lab in FERMI4_BLOCK_LABELS]},
                 state={"family": "fermi4_theta", "params": {"theta": _float(params, "theta", np.pi / 4)}},
                 subalgebra={"levels": [1, 2]},
                 tasks=["gns", "entropy", "entropy_modes_compare"])


def _fermi3_choice1(params):
    return _base("fermi3-choice1",
                 space={"one_particle_dim": 3, "particles": 2, "sector": "antisymmetric"},
                 state={"family": "fermi3_random", "params": {"draw": _float(params, "draw", 0)}},
                 subalgebra={"levels": [1, 2, 3]}, tasks=["gns", "entropy"])


def _fermi3_choice2(params):
    return _base("fermi3-choice2",
                 space={"one_particle_dim": 3, "particles": 2, "sector": "antisymmetric"},
                 state={"family": "fermi3_choice2", "params": {"theta": _float(params, "theta", 1.0)}},
                 subalgebra={"levels": [1, 2]}, tasks=["gns", "decompose", "entropy"])


def _bose3_surface(params):
    return _base("bose3-surface",
                 space={"one_particle_dim": 3, "particles": 2, "sector": "symmetric"},
                 state={"family": "bose3", "params": {"theta": _float(params, "theta", np.pi / 2),
                                                      "phi": _float(params, "phi", np.pi / 4)}},
                 subalgebra={"levels": [1, 2]}, tasks=["entropy", "surface"],
                 surface={"grid": int(_float(params, "grid", 64)),
                          "projection": str(params.get("projection", "stereographic"))})


def _qboson(params):
    which = str(params.get("subalgebra", "one_particle"))
    named = {"one_particle": "q_one_particle", "triplet": "q_triplet"}.get(which)
    if named is None:
        raise SchemaError("subalgebra must be one_particle or triplet", field_path="params.subalgebra")
    return _base("qboson", space={"dimension": 6},
                 state={"family": "qboson", "params": {"theta": _float(params, "theta", 1.0),
                                                       "phi": _float(params, "phi", 0.7),
                                                       "q": _float(params, "q", 2.0)}},
                 subalgebra={"named": named}, tasks=["gns", "entropy"])


def _choice2_rotation() -> List[List[Any]]:
    f = fermi3_f_basis(ParticleSpace.build(3, 2, Sector.ANTISYMMETRIC))
    return encode_matrix(rotation_hamiltonian(f[:, 0], f[:, 2]))


def _evolve_fermi3(params):
    count = int(_float(params, "n_times", 101))
    stop = _float(params, "t_stop", np.pi)
    return _base("evolve-fermi3",
                 space={"one_particle_dim": 3, "particles": 2, "sector": "antisymmetric"},
                 state={"family": "fermi3_choice2", "params": {"theta": _float(params, "theta", 0.0)}},
                 subalgebra={"levels": [1, 2]}, tasks=["entropy", "evolve"],
                 evolution={"hamiltonian": _choice2_rotation(),
                            "times": [float(t) for t in np.linspace(0.0, stop, count)]})


def _kraus(params):
    theta_from = _float(params, "theta_from", np.pi / 4)
    return _base("kraus",
                 space={"one_particle_dim": 3, "particles": 2, "sector": "antisymmetric"},
                 state={"family": "fermi3_choice2", "params": {"theta": theta_from}},
                 subalgebra={"levels": [1, 2]}, tasks=["entropy", "kraus"],
                 kraus={"theta_from": theta_from, "theta_to": _float(params, "theta_to", np.pi / 3),
                        "random_pairs": int(_float(params, "random_pairs", 50))})


def _parity_toy(params):
    return _base("parity-toy", space={"dimension": 2},
                 state={"family": "parity_toy", "params": {"theta": _float(params, "theta", 0.3)}},
                 subalgebra={"named": "parity_commutant"}, tasks=["entropy", "parity"],
                 parity={"operator": [[1.0, 0.0], [0.0, -1.0]]})


def _collapse(params):
    projector = np.kron(UP, np.eye(2))
    return _base("collapse", space={"dimension": 4},
                 state={"family": "bell_theta", "params": {"theta": _float(params, "theta", np.pi / 4)}},
                 subalgebra={"named": "projector_commutant"}, tasks=["entropy", "collapse"],
                 collapse={"projector": encode_matrix(projector)})


@dataclass(frozen=True)
class ExampleEntry:
    name: str
    description: str
    build: Callable[[Dict[str, Any]], Dict[str, Any]]


EXAMPLES: Dict[str, ExampleEntry] = {e.name: e for e in [
    ExampleEntry("m2-lambda", "Diagonal state on M2(C) restricted to itself; entropy of diag(lambda, 1-lambda)", _m2_lambda),
    ExampleEntry("bell-theta", "Two qubits cos t|+-> - sin t|-+> observed through first-qubit observables", _bell_theta),
    ExampleEntry("bell-corners", "Bell state on the corner algebras A+, A- and A+ (+) A- (param corner)", _bell_corners),
    ExampleEntry("fermi4", "Two fermions in the antisymmetric d=4 sector observed on levels 1 and 2", _fermi4),
    ExampleEntry("fermi3-choice1", "Random two-fermion state on C^3 with all one-particle observables; entropy 0", _fermi3_choice1),
    ExampleEntry("fermi3-choice2", "Two fermions on C^3 observed on levels 1 and 2: M2 (+) C blocks", _fermi3_choice2),
    ExampleEntry("bose3-surface", "Two bosons on C^3, entropy over the sphere of states (CSV surface)", _bose3_surface),
    ExampleEntry("qboson", "Two q-bosons on three modes; entropy independent of q", _qboson),
    ExampleEntry("evolve-fermi3", "Rotation of the d=3 two-fermion state across blocks; rank jumps", _evolve_fermi3),
    ExampleEntry("kraus", "Kraus maps between restricted two-fermion densities at two angles", _kraus),
    ExampleEntry("parity-toy", "Parity restriction versus averaging on C^2", _parity_toy),
    ExampleEntry("collapse", "Measurement collapse as restriction to a projector commutant (Bell state)", _collapse),
]}


def list_examples() -> List[Tuple[str, str]]:
    return [(e.name, e.description) for e in EXAMPLES.values()]


def build_example(name: str, params: Optional[Dict[str, Any]] = None) -> Scenario:
    """Built-in scenario with parameters merged in"""
    entry = EXAMPLES.get(name)
    if entry is None:
        raise SchemaError(f"unknown example {name!r}", field_path="example")
    return scenario_from_dict(entry.build(params or {}))
