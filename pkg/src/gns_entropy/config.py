"""
Engine configuration
Defaults are read from the environment (and an optional .env file)
"""

import os

from dotenv import load_dotenv
from pydantic import BaseModel, ValidationError, field_validator

from .exceptions import SchemaError

load_dotenv()

# Defaults; GNS_* environment variables override them
DEFAULT_SEED = 42
DEFAULT_TOLERANCE = 1e-10
DEFAULT_SIZE_CAP = 4096
DEFAULT_CLUSTER_GAP = 1e-6
DEFAULT_MAX_SPLIT_ATTEMPTS = 8
DEFAULT_WORKERS = 4


class EngineSettings(BaseModel):
    """Resolved engine configuration"""
    seed: int = DEFAULT_SEED
    tolerance: float = DEFAULT_TOLERANCE
    size_cap: int = DEFAULT_SIZE_CAP
    cluster_gap: float = DEFAULT_CLUSTER_GAP
    max_split_attempts: int = DEFAULT_MAX_SPLIT_ATTEMPTS
    workers: int = DEFAULT_WORKERS
    log_level: str = "INFO"

    @field_validator('tolerance', 'cluster_gap')
    @classmethod
    def validate_non_negative(cls, v):
        if v < 0:
            raise ValueError('Tolerances must be non-negative')
        return v

    @field_validator('size_cap', 'max_split_attempts', 'workers')
    @classmethod
    def validate_positive(cls, v):
        if v < 1:
            raise ValueError('Must be at least 1')
        return v


# env var -> (settings field, parser)
_ENV_FIELDS = {
    "GNS_SEED": ("seed", int),
    "GNS_TOL": ("tolerance", float),
    "GNS_SIZE_CAP": ("size_cap", int),
    "GNS_CLUSTER_GAP": ("cluster_gap", float),
    "GNS_MAX_SPLIT_ATTEMPTS": ("max_split_attempts", int),
    "GNS_WORKERS": ("workers", int),
    "GNS_LOG_LEVEL": ("log_level", str),
}


def get_settings() -> EngineSettings:
    """
    Build settings from the current environment

    Raises:
        SchemaError: a GNS_* variable does not parse or fails validation; field_path
            names the variable
    """
    values = {}
    for var, (field, parse) in _ENV_FIELDS.items():
        raw = os.getenv(var)
        if raw is None:
            continue
        try:
            values[field] = parse(raw)
        except ValueError as err:
            raise SchemaError(f"{raw!r} is not a valid {parse.__name__}", field_path=var) from err
    try:
        return EngineSettings(**values)
    except ValidationError as err:
        first = err.errors()[0]
        field = first["loc"][0] if first["loc"] else ""
        var = next((v for v, (f, _) in _ENV_FIELDS.items() if f == field), None)
        raise SchemaError(first["msg"], field_path=var or str(field)) from err
