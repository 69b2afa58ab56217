"""Layered run configuration: command-line flags over a KEY=VALUE file over defaults."""
from __future__ import annotations

import logging
import os
from pathlib import Path
from typing import Any, Dict, Mapping, Optional

from dotenv import dotenv_values
from pydantic import BaseModel, ConfigDict, field_validator, model_validator

from .models import BasisSpec, ControlledFamily, MeasureConfig, OutputFormat, PhaseId

logger = logging.getLogger(__name__)

CONFIG_ENV_VAR = "BELL_BASES_CONFIG"

FILE_KEYS: Dict[str, str] = {
    "N": "n",
    "M": "m",
    "FAMILY": "family",
    "PHASE": "phase",
    "FORMAT": "format",
    "OUT": "out",
    "N_MIN": "n_min",
    "N_MAX": "n_max",
    "THETA_STEPS": "theta_steps",
    "PHI_STEPS": "phi_steps",
    "REFINE_TOL": "refine_tol",
    "MEASURED_PARTY": "measured_party",
    "MONOGAMY_NODE": "monogamy_node",
    "SQUARED_DELTA_C": "squared_delta_c",
    "NORMALIZED": "normalized",
    "WORKERS": "workers",
    "SEED": "seed",
}


class ConfigError(ValueError):
    """Raised when a config file is missing or names unknown keys."""


class RunConfig(BaseModel):
    """Everything one CLI invocation needs, validated before any work starts."""

    model_config = ConfigDict(frozen=True)

    n: Optional[int] = None
    m: Optional[int] = None
    family: Optional[ControlledFamily] = None
    phase: Optional[PhaseId] = None
    format: OutputFormat = OutputFormat.JSON
    out: Optional[str] = None
    n_min: int = 3
    n_max: int = 5
    theta_steps: int = 64
    phi_steps: int = 128
    refine_tol: float = 1e-6
    measured_party: int = 1
    monogamy_node: int = 1
    squared_delta_c: bool = False
    normalized: bool = False
    workers: int = 1
    # accepted for reproducible configs; every computation here is deterministic
    seed: int = 0

    @field_validator("family", mode="before")
    @classmethod
    def _parse_family(cls, value: Any) -> Any:
        return None if value in (None, "") else ControlledFamily.parse(value)

    @field_validator("phase", mode="before")
    @classmethod
    def _parse_phase(cls, value: Any) -> Any:
        return None if value in (None, "") else PhaseId.parse(value)

    @field_validator("format", mode="before")
    @classmethod
    def _parse_format(cls, value: Any) -> Any:
        return value.lower() if isinstance(value, str) else value

    @model_validator(mode="after")
    def _check_ranges(self) -> "RunConfig":
        if not 3 <= self.n_min <= self.n_max:
            raise ValueError(f"sweep range must satisfy 3 <= n_min <= n_max, got {self.n_min}..{self.n_max}")
        if self.workers < 1:
            raise ValueError("workers must be at least 1")
        return self

    def has_spec(self) -> bool:
        return None not in (self.n, self.m, self.family, self.phase)

    def spec(self) -> BasisSpec:
        """The single basis this run names; validated with the BasisSpec rules."""

        missing = [name for name in ("n", "m", "family", "phase") if getattr(self, name) is None]
        if missing:
            raise ConfigError(f"missing basis parameters: {', '.join(missing)}")
        return BasisSpec(n=self.n, m=self.m, family=self.family, phase=self.phase)

    def measure_config(self) -> MeasureConfig:
        return MeasureConfig(
            theta_steps=self.theta_steps,
            phi_steps=self.phi_steps,
            refine_tol=self.refine_tol,
            measured_party=self.measured_party,
            monogamy_node=self.monogamy_node,
            squared_delta_c=self.squared_delta_c,
        )


def read_config_file(path: Optional[str] = None) -> Dict[str, Any]:
    """Field values from a flat KEY=VALUE file; ``$BELL_BASES_CONFIG`` is the fallback path."""

    chosen = path or os.getenv(CONFIG_ENV_VAR)
    if not chosen:
        return {}
    config_path = Path(chosen)
    if not config_path.is_file():
        raise ConfigError(f"config file {config_path} does not exist")
    raw = dotenv_values(config_path)
    unknown = sorted(key for key in raw if key.upper() not in FILE_KEYS)
    if unknown:
        raise ConfigError(f"unknown config keys in {config_path}: {', '.join(unknown)}")
    values = {FILE_KEYS[key.upper()]: value for key, value in raw.items() if value not in (None, "")}
    logger.info("Loaded config file", extra={"path": str(config_path), "keys": sorted(values)})
    return values


def load_run_config(
    overrides: Optional[Mapping[str, Any]] = None, config_path: Optional[str] = None
) -> RunConfig:
    """Merge defaults, the config file and explicit overrides; ``None`` overrides are ignored."""

    values = read_config_file(config_path)
    values.update({key: value for key, value in (overrides or {}).items() if value is not None})
    return RunConfig(**values)


__all__ = [
    "CONFIG_ENV_VAR",
    "ConfigError",
    "RunConfig",
    "load_run_config",
    "read_config_file",
]
