# Ihara Lab Configuration
# Copy .env.example to .env to override defaults from the environment.
# A plain key=value config file (same syntax) can be passed with --config;
# command-line flags win over the config file, the config file over the environment.

import os
import logging
from dataclasses import dataclass, fields, replace
from functools import lru_cache
from typing import Dict, Optional

from dotenv import load_dotenv, dotenv_values

from errors import ConfigError

logger = logging.getLogger(__name__)

load_dotenv()

SCHEMA_VERSION = "ihara-lab/1"

# Environment variable overriding the bisection tolerance
TOLERANCE_ENV_VAR = "IHARA_LAB_TOL"


@dataclass(frozen=True)
class LabSettings:
    """Tolerances and defaults shared by every module"""

    root_tol: float = 1e-12              # bisection width on x
    certificate_tol: float = 1e-10       # |zeta(x1) - 2|, |h(x0)|, |s'(c)|
    lambda_rel_tol: float = 1e-9         # power iteration vs polynomial root
    power_iter_drift: float = 1e-12      # relative Rayleigh drift stop
    power_iter_max: int = 100000
    series_order: int = 12
    max_prime_length: int = 8
    enumeration_guard: int = 2000000     # DFS nodes / enumerated walks
    sample_points: int = 100
    rational_max_denominator: int = 10 ** 9
    trace_bound_tol: float = 1e-12       # tail bound for truncated trace sums

    def __post_init__(self):
        for f in fields(self):
            value = getattr(self, f.name)
            if value <= 0:
                raise ConfigError(f"{f.name} must be positive, got {value!r}")


def _coerce(name: str, raw) -> object:
    field_types = {f.name: f.type for f in fields(LabSettings)}
    if name not in field_types:
        raise ConfigError(f"unknown setting: {name}")
    target = field_types[name]
    try:
        if target is int:
            return int(float(raw))
        return float(raw)
    except (TypeError, ValueError):
        raise ConfigError(f"setting {name} has invalid value {raw!r}")


def load_settings(config_file: Optional[str] = None,
                  overrides: Optional[Dict[str, object]] = None) -> LabSettings:
    """
    Build settings from defaults, environment, config file and overrides.

    Args:
        config_file: optional path to a key=value file
        overrides: values from command-line flags; None entries are ignored

    Returns:
        Validated LabSettings
    """
    values: Dict[str, object] = {}

    env_tol = os.getenv(TOLERANCE_ENV_VAR)
    if env_tol:
        values["root_tol"] = _coerce("root_tol", env_tol)

    if config_file:
        if not os.path.exists(config_file):
            raise ConfigError(f"config file not found: {config_file}")
        for key, raw in dotenv_values(config_file).items():
            if raw is None:
                continue
            values[key.strip().lower()] = _coerce(key.strip().lower(), raw)
        logger.info(f"Loaded settings from {config_file}")

    for key, raw in (overrides or {}).items():
        if raw is not None:
            values[key] = _coerce(key, raw)

    return replace(LabSettings(), **values)


@lru_cache(maxsize=None)
def get_settings() -> LabSettings:
    """Process-wide settings, loaded from the environment on first use"""
    return load_settings()


def resolve(custom: Optional[LabSettings]) -> LabSettings:
    """Return custom settings when given, else the process-wide defaults"""
    return custom if custom is not None else get_settings()
