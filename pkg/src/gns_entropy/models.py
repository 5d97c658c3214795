"""
Pydantic models for scenarios and reports
Validation and JSON serialization of scenario documents and run reports
"""

from enum import Enum
from typing import Any, Dict, List, Optional, Union

import numpy as np
from pydantic import BaseModel, Field, ValidationError, field_validator, model_validator

from .config import get_settings
from .exceptions import SchemaError
from .gns import DecompositionMode
from .quantum_state import LogBase
from .restrictions import CollapseReport, ParityReport
from .statistics import Sector

# Complex numbers are JSON numbers or [re, im] pairs; matrices are nested row arrays
ComplexEntry = Union[float, List[float]]
ComplexVector = List[ComplexEntry]
ComplexMatrixRows = List[List[ComplexEntry]]


# Enums
class Task(str, Enum):
    GNS = "gns"
    DECOMPOSE = "decompose"
    ENTROPY = "entropy"
    ENTROPY_MODES_COMPARE = "entropy_modes_compare"
    EVOLVE = "evolve"
    KRAUS = "kraus"
    PARITY = "parity"
    COLLAPSE = "collapse"
    SURFACE = "surface"


class StateFamily(str, Enum):
    M2_LAMBDA = "m2_lambda"
    BELL_THETA = "bell_theta"
    FERMI4_THETA = "fermi4_theta"
    FERMI3_CHOICE2 = "fermi3_choice2"
    FERMI3_RANDOM = "fermi3_random"
    BOSE3 = "bose3"
    QBOSON = "qboson"
    PARITY_TOY = "parity_toy"


class NamedSubalgebra(str, Enum):
    BELL_LOCAL = "bell_local"
    BELL_PLUS = "bell_plus"
    BELL_MINUS = "bell_minus"
    BELL_PLUS_MINUS = "bell_plus_minus"
    PARITY_COMMUTANT = "parity_commutant"
    PROJECTOR_COMMUTANT = "projector_commutant"
    FULL = "full"
    Q_ONE_PARTICLE = "q_one_particle"
    Q_TRIPLET = "q_triplet"


class Projection(str, Enum):
    STEREOGRAPHIC = "stereographic"
    RAW = "raw"


FAMILY_PARAMS: Dict[StateFamily, List[str]] = {
    StateFamily.M2_LAMBDA: ["lambda"],
    StateFamily.BELL_THETA: ["theta"],
    StateFamily.FERMI4_THETA: ["theta"],
    StateFamily.FERMI3_CHOICE2: ["theta"],
    StateFamily.FERMI3_RANDOM: [],
    StateFamily.BOSE3: ["theta", "phi"],
    StateFamily.QBOSON: ["theta", "phi", "q"],
    StateFamily.PARITY_TOY: ["theta"],
}


def _check_entry(v):
    if isinstance(v, list) and len(v) != 2:
        raise ValueError('Complex entries must be numbers or [re, im] pairs')
    return v


def to_complex(entry: ComplexEntry) -> complex:
    if isinstance(entry, list):
        return complex(entry[0], entry[1])
    return complex(entry)


def to_vector(entries: ComplexVector) -> np.ndarray:
    return np.array([to_complex(e) for e in entries], dtype=np.complex128)


def to_matrix(rows: ComplexMatrixRows) -> np.ndarray:
    return np.array([[to_complex(e) for e in row] for row in rows], dtype=np.complex128)


def encode_complex(z: complex) -> ComplexEntry:
    z = complex(z)
    if z.imag == 0:
        return float(z.real)
    return [float(z.real), float(z.imag)]


def encode_matrix(m) -> ComplexMatrixRows:
    return [[encode_complex(z) for z in row] for row in np.asarray(m)]


def encode_vector(v) -> ComplexVector:
    return [encode_complex(z) for z in np.asarray(v).reshape(-1)]


def _check_rows(rows: Optional[ComplexMatrixRows]):
    if rows is None:
        return rows
    if not rows or any(len(r) != len(rows) for r in rows):
        raise ValueError('Matrices must be square and nonempty')
    for r in rows:
        for e in r:
            _check_entry(e)
    return rows


# Scenario models
class SpaceSpec(BaseModel):
    """Either a plain dimension or an identical-particle sector"""
    dimension: Optional[int] = None
    one_particle_dim: Optional[int] = None
    particles: Optional[int] = None
    sector: Optional[Sector] = None
    labels: Optional[List[List[int]]] = None

    @model_validator(mode='after')
    def validate_kind(self):
        particle = [self.one_particle_dim, self.particles, self.sector]
        if self.dimension is not None:
            if any(p is not None for p in particle) or self.labels is not None:
                raise ValueError('Give either dimension or one_particle_dim/particles/sector, not both')
            if self.dimension < 1:
                raise ValueError('Dimension must be positive')
        elif any(p is None for p in particle):
            raise ValueError('Particle spaces need one_particle_dim, particles and sector')
        return self


class StateSpec(BaseModel):
    """Exactly one of vector, density or a named family with its parameters"""
    vector: Optional[ComplexVector] = None
    density: Optional[ComplexMatrixRows] = None
    family: Optional[StateFamily] = None
    params: Dict[str, float] = Field(default_factory=dict)

    @field_validator('vector')
    @classmethod
    def validate_vector(cls, v):
        if v is not None:
            for e in v:
                _check_entry(e)
        return v

    @field_validator('density')
    @classmethod
    def validate_density(cls, v):
        return _check_rows(v)

    @model_validator(mode='after')
    def validate_choice(self):
        given = [x is not None for x in (self.vector, self.density, self.family)]
        if sum(given) != 1:
            raise ValueError('Exactly one of vector, density or family is required')
        if self.family is not None:
            missing = [p for p in FAMILY_PARAMS[self.family] if p not in self.params]
            if missing:
                raise ValueError(f'Family {self.family.value} needs parameters: {", ".join(missing)}')
        return self


class SubalgebraSpec(BaseModel):
    """Exactly one of explicit generators, one-particle levels or a named algebra"""
    generators: Optional[List[ComplexMatrixRows]] = None
    include_identity: bool = True
    levels: Optional[List[int]] = None
    named: Optional[NamedSubalgebra] = None

    @field_validator('generators')
    @classmethod
    def validate_generators(cls, v):
        if v is not None:
            if not v:
                raise ValueError('At least one generator is required')
            for g in v:
                _check_rows(g)
        return v

    @field_validator('levels')
    @classmethod
    def validate_levels(cls, v):
        if v is not None and (not v or min(v) < 1):
            raise ValueError('Levels are a nonempty list of 1-based indices')
        return v

    @model_validator(mode='after')
    def validate_choice(self):
        given = [x is not None for x in (self.generators, self.levels, self.named)]
        if sum(given) != 1:
            raise ValueError('Exactly one of generators, levels or named is required')
        return self


class EvolutionSpec(BaseModel):
    hamiltonian: Optional[ComplexMatrixRows] = None
    rotation: Optional[List[ComplexVector]] = None
    times: List[float]

    @field_validator('hamiltonian')
    @classmethod
    def validate_hamiltonian(cls, v):
        return _check_rows(v)

    @field_validator('times')
    @classmethod
    def validate_times(cls, v):
        if not v:
            raise ValueError('At least one time is required')
        if any(b <= a for a, b in zip(v, v[1:])):
            raise ValueError('Times must be strictly increasing')
        return v

    @model_validator(mode='after')
    def validate_generator(self):
        if (self.hamiltonian is None) == (self.rotation is None):
            raise ValueError('Give exactly one of hamiltonian or rotation')
        if self.rotation is not None and len(self.rotation) != 2:
            raise ValueError('A rotation is given by two vectors u, v')
        return self


class KrausSpec(BaseModel):
    theta_from: float
    theta_to: float
    random_pairs: int = 0

    @field_validator('random_pairs')
    @classmethod
    def validate_pairs(cls, v):
        if v < 0:
            raise ValueError('random_pairs must be non-negative')
        return v


class ParitySpec(BaseModel):
    operator: ComplexMatrixRows
    corners: Optional[List[ComplexMatrixRows]] = None
    odd_elements: List[ComplexMatrixRows] = Field(default_factory=list)

    @field_validator('operator')
    @classmethod
    def validate_operator(cls, v):
        return _check_rows(v)


class CollapseSpec(BaseModel):
    projector: ComplexMatrixRows

    @field_validator('projector')
    @classmethod
    def validate_projector(cls, v):
        return _check_rows(v)


class SurfaceSpec(BaseModel):
    grid: int = 64
    projection: Projection = Projection.STEREOGRAPHIC

    @field_validator('grid')
    @classmethod
    def validate_grid(cls, v):
        if v < 2:
            raise ValueError('Grid needs at least 2 points per axis')
        return v


class Scenario(BaseModel):
    """A complete, self-describing computation"""
    name: Optional[str] = None
    tolerance: float = Field(default_factory=lambda: get_settings().tolerance)
    seed: int = Field(default_factory=lambda: get_settings().seed)
    log_base: LogBase = LogBase.NATURAL
    space: SpaceSpec
    state: StateSpec
    subalgebra: SubalgebraSpec
    tasks: List[Task]
    mode: DecompositionMode = DecompositionMode.CANONICAL_SCHMIDT
    compare_seeds: int = 100
    evolution: Optional[EvolutionSpec] = None
    kraus: Optional[KrausSpec] = None
    parity: Optional[ParitySpec] = None
    collapse: Optional[CollapseSpec] = None
    surface: Optional[SurfaceSpec] = None

    @field_validator('tolerance')
    @classmethod
    def validate_tolerance(cls, v):
        if v < 0:
            raise ValueError('Tolerance must be non-negative')
        return v

    @field_validator('tasks')
    @classmethod
    def validate_tasks(cls, v):
        if not v:
            raise ValueError('At least one task is required')
        return v

    @model_validator(mode='after')
    def validate_task_inputs(self):
        needs = {
            Task.EVOLVE: ('evolution', self.evolution),
            Task.KRAUS: ('kraus', self.kraus),
            Task.PARITY: ('parity', self.parity),
            Task.COLLAPSE: ('collapse', self.collapse),
            Task.SURFACE: ('surface', self.surface),
        }
        for task in self.tasks:
            if task in needs and needs[task][1] is None:
                raise ValueError(f'Task {task.value} needs a {needs[task][0]} section')
        if self.subalgebra.named == NamedSubalgebra.PARITY_COMMUTANT and self.parity is None:
            raise ValueError('parity_commutant needs a parity section')
        if self.subalgebra.named == NamedSubalgebra.PROJECTOR_COMMUTANT and self.collapse is None:
            raise ValueError('projector_commutant needs a collapse section')
        if Task.KRAUS in self.tasks and 'theta' not in FAMILY_PARAMS.get(self.state.family, []):
            raise ValueError('Task kraus needs a state family parameterized by theta')
        if Task.SURFACE in self.tasks and self.state.family not in (StateFamily.BOSE3, StateFamily.QBOSON):
            raise ValueError('Task surface needs the bose3 or qboson state family')
        return self


def _error_path(err: ValidationError) -> Optional[str]:
    errors = err.errors()
    if not errors:
        return None
    return ".".join(str(part) for part in errors[0]["loc"]) or None


def load_scenario(text: Union[str, bytes]) -> Scenario:
    """Parse a JSON scenario document, raising SchemaError with the offending field path"""
    try:
        return Scenario.model_validate_json(text)
    except ValidationError as err:
        first = err.errors()[0] if err.errors() else {"msg": str(err)}
        raise SchemaError(first["msg"], field_path=_error_path(err)) from err


def scenario_from_dict(data: Dict[str, Any]) -> Scenario:
    try:
        return Scenario.model_validate(data)
    except ValidationError as err:
        first = err.errors()[0] if err.errors() else {"msg": str(err)}
        raise SchemaError(first["msg"], field_path=_error_path(err)) from err


# Report models
class BlockEntry(BaseModel):
    """One irreducible subspace: dimension d, multiplicity m of its class, normalized weight"""
    d: int
    m: int
    weight: float
    block: int


class Diagnostics(BaseModel):
    homomorphism: float
    star: float
    reconstruction: float
    cyclicity_rank: int
    isomorphic_groups: List[List[int]] = Field(default_factory=list)


class ModesComparison(BaseModel):
    canonical: float
    isotypic: float
    random: List[float]
    min_random: float


class RankEventEntry(BaseModel):
    t_before: float
    t_after: float
    rank_before: int
    rank_after: int


class TrajectoryPayload(BaseModel):
    times: List[float]
    entropies: List[float]
    ranks: List[int]
    rank_events: List[RankEventEntry]


class KrausPayload(BaseModel):
    theta_from: float
    theta_to: float
    n_maps: int
    residual: float
    max_random_residual: Optional[float] = None


class SurfacePayload(BaseModel):
    grid: int
    projection: Projection
    rows: int
    zero_points: int
    max_formula_deviation: float


class Report(BaseModel):
    """Result of running a scenario"""
    scenario: Dict[str, Any]
    subalgebra_dimension: int
    gns_dimension: Optional[int] = None
    ideal_dimension: Optional[int] = None
    cyclic_norm: Optional[float] = None
    blocks: List[BlockEntry] = Field(default_factory=list)
    entropy: Optional[float] = None
    expected_entropy: Optional[float] = None
    log_base: LogBase = LogBase.NATURAL
    mode: DecompositionMode = DecompositionMode.CANONICAL_SCHMIDT
    diagnostics: Optional[Diagnostics] = None
    modes_comparison: Optional[ModesComparison] = None
    trajectory: Optional[TrajectoryPayload] = None
    kraus: Optional[KrausPayload] = None
    parity: Optional[ParityReport] = None
    collapse: Optional[CollapseReport] = None
    surface: Optional[SurfacePayload] = None
