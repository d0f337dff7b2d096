"""Pydantic models for protocol registry, run configuration and application settings."""

import math
from typing import Dict, List, Literal, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from src.constants import (
    DEDUP_RADIUS,
    DEFAULT_STEPS_PER_UNIT_TIME,
    INTEGRATION_FAULT_TOLERANCE,
    MIN_STEPS_PER_UNIT_TIME,
    RANK_TOLERANCE,
    REFERENCE_OMEGA,
)

ProtocolKind = Literal["tilted", "flat", "hopping"]
OutputFormat = Literal["csv", "json", "parquet"]
InitialState = Literal["mixed", "plus", "minus", "up", "down"]


class ProtocolInfo(BaseModel):
    """Descriptive block of a protocol config file."""

    kind: str
    name: str
    description: Optional[str] = None


class ProtocolParameters(BaseModel):
    """Control-protocol parameters; which ones matter depends on the kind."""

    model_config = ConfigDict(extra="forbid")

    q0: float = Field(default=1.0, ge=0.0, le=1.0)
    chi: int = 1
    T: float = Field(default=100.0, gt=0.0)
    omega: float = Field(default=REFERENCE_OMEGA, ge=0.0)
    alpha_max: float = Field(default=3.0, ge=0.0)
    theta_amplitude: float = Field(default=1.5, ge=0.0, le=math.pi / 2)
    T1: Optional[float] = Field(default=None, gt=0.0)
    T2: Optional[float] = Field(default=None, gt=0.0)
    T1_fraction: float = Field(default=0.2, gt=0.0, lt=0.5)
    T2_fraction: float = Field(default=0.6, gt=0.0, lt=1.0)
    alpha_i: float = Field(default=1e-5, ge=0.0)
    alpha_ii: float = Field(default=10.0, gt=0.0)

    @field_validator("chi", mode="before")
    @classmethod
    def check_chi(cls, value):
        if value not in (1, -1):
            raise ValueError("chi must be +1 or -1")
        return int(value)

    @model_validator(mode="after")
    def check_hop_fractions(self) -> "ProtocolParameters":
        if 2 * self.T1_fraction + self.T2_fraction > 1.0 + 1e-12:
            raise ValueError("2 * T1_fraction + T2_fraction must not exceed 1")
        return self


class ProtocolConfig(BaseModel):
    """Complete protocol configuration (one ``protocols/<kind>/config.yaml``)."""

    protocol: ProtocolInfo
    parameters: ProtocolParameters = Field(default_factory=ProtocolParameters)


class ProtocolRegistryEntry(BaseModel):
    name: str
    kind: str
    enabled: bool = True
    config_path: str
    trajectory_class: str


class ProtocolRegistry(BaseModel):
    """Registry of available control protocols."""

    protocols: Dict[str, ProtocolRegistryEntry]

    def get_enabled_protocols(self) -> Dict[str, ProtocolRegistryEntry]:
        return {key: entry for key, entry in self.protocols.items() if entry.enabled}

    def get_protocol(self, kind: str) -> Optional[ProtocolRegistryEntry]:
        return self.protocols.get(kind)


class GridAxis(BaseModel):
    """Evenly spaced axis: ``count`` points from ``start`` to ``stop`` inclusive."""

    model_config = ConfigDict(extra="forbid")

    start: float
    stop: float
    count: int = Field(ge=0)

    @model_validator(mode="after")
    def check_order(self) -> "GridAxis":
        if self.stop < self.start:
            raise ValueError(f"stop ({self.stop}) must be >= start ({self.start})")
        return self

    @classmethod
    def parse(cls, text: str) -> "GridAxis":
        """Parse ``start:stop:count``."""
        parts = text.split(":")
        if len(parts) != 3:
            raise ValueError(f"grid '{text}' must look like start:stop:count")
        return cls(start=float(parts[0]), stop=float(parts[1]), count=int(parts[2]))

    def values(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.count)


class ScanGridConfig(BaseModel):
    """Seed grid for the numeric degeneracy scan (omega = 1 units)."""

    model_config = ConfigDict(extra="forbid")

    alpha: GridAxis
    theta: GridAxis
    q: GridAxis

    @model_validator(mode="after")
    def check_ranges(self) -> "ScanGridConfig":
        if self.alpha.count and self.alpha.start < 0:
            raise ValueError("alpha grid must lie in [0, inf)")
        if self.theta.count and (self.theta.start < 0 or self.theta.stop > math.pi):
            raise ValueError("theta grid must lie in [0, pi]")
        if self.q.count and (self.q.start < 0 or self.q.stop > 1):
            raise ValueError("q grid must lie in [0, 1]")
        return self

    @property
    def size(self) -> int:
        return self.alpha.count * self.theta.count * self.q.count


def _surface_grid() -> ScanGridConfig:
    return ScanGridConfig(
        alpha=GridAxis(start=1.05, stop=3.0, count=12),
        theta=GridAxis(start=0.1, stop=math.pi - 0.1, count=13),
        q=GridAxis(start=0.0, stop=1.0, count=5),
    )


def _line_grid() -> ScanGridConfig:
    return ScanGridConfig(
        alpha=GridAxis(start=1.05, stop=1.7, count=8),
        theta=GridAxis(start=0.3, stop=math.pi - 0.3, count=9),
        q=GridAxis(start=0.0, stop=1.0, count=3),
    )


def _point_grid() -> ScanGridConfig:
    return ScanGridConfig(
        alpha=GridAxis(start=0.1, stop=3.0, count=8),
        theta=GridAxis(start=0.1, stop=math.pi - 0.1, count=7),
        q=GridAxis(start=0.0, stop=1.0, count=5),
    )


class ToleranceConfig(BaseModel):
    """Numeric tolerances; ``cluster_tol=None`` selects 1e-4 * max(||S||, 1)."""

    model_config = ConfigDict(extra="forbid")

    cluster_tol: Optional[float] = Field(default=None, gt=0.0)
    rank_tol: float = Field(default=RANK_TOLERANCE, gt=0.0)
    dedup_radius: float = Field(default=DEDUP_RADIUS, gt=0.0)
    fault_tol: float = Field(default=INTEGRATION_FAULT_TOLERANCE, gt=0.0)


class EpMapConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    targets: List[Literal[2, 3, 4]] = Field(default_factory=lambda: [2, 3, 4])
    samples: int = Field(default=50, ge=0)
    workers: int = Field(default=1, ge=1)
    grids: Dict[int, ScanGridConfig] = Field(
        default_factory=lambda: {2: _surface_grid(), 3: _line_grid(), 4: _point_grid()}
    )

    def grid_for(self, target: int) -> ScanGridConfig:
        defaults = {2: _surface_grid, 3: _line_grid, 4: _point_grid}
        return self.grids.get(target) or defaults[target]()


class EvolveConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    kind: ProtocolKind = "tilted"
    initial: InitialState = "mixed"
    parameters: Dict[str, float] = Field(default_factory=dict)
    history_path: Optional[str] = None
    gaps_path: Optional[str] = None


class SweepConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    kinds: List[ProtocolKind] = Field(default_factory=lambda: ["tilted"])
    parameter: str = "q0"
    grid: GridAxis = Field(default_factory=lambda: GridAxis(start=0.0, stop=1.0, count=11))
    initial: InitialState = "mixed"
    parameters: Dict[str, float] = Field(default_factory=dict)
    workers: int = Field(default=1, ge=1)

    @field_validator("parameter")
    @classmethod
    def check_parameter(cls, value: str) -> str:
        if value not in ProtocolParameters.model_fields or value == "chi":
            raise ValueError(f"unknown sweep parameter '{value}'")
        return value


class ValidateConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    suites: List[Literal["liouvillian", "spectral", "atlas", "evolution"]] = Field(
        default_factory=lambda: ["liouvillian", "spectral", "atlas", "evolution"]
    )
    random_samples: int = Field(default=1000, ge=1)
    atlas_samples: int = Field(default=100, ge=1)


class RunConfig(BaseModel):
    """Declarative description of one CLI run; flags override file values."""

    model_config = ConfigDict(extra="forbid", populate_by_name=True)

    command: Literal["ep-map", "evolve", "sweep", "validate"]
    output: Optional[str] = None
    format: OutputFormat = "csv"
    seed: int = 12345
    steps_per_unit_time: int = Field(
        default=DEFAULT_STEPS_PER_UNIT_TIME, ge=MIN_STEPS_PER_UNIT_TIME
    )
    tolerances: ToleranceConfig = Field(default_factory=ToleranceConfig)
    ep_map: EpMapConfig = Field(default_factory=EpMapConfig)
    evolve: EvolveConfig = Field(default_factory=EvolveConfig)
    sweep: SweepConfig = Field(default_factory=SweepConfig)
    validate_: ValidateConfig = Field(default_factory=ValidateConfig, alias="validate")


class AppConfig(BaseModel):
    """Process-level settings read from the environment."""

    log_level: str = "INFO"
    log_file: Optional[str] = None
    output_data_path: str = "data/processed"
    steps_per_unit_time: int = Field(
        default=DEFAULT_STEPS_PER_UNIT_TIME, ge=MIN_STEPS_PER_UNIT_TIME
    )
    scan_workers: int = Field(default=1, ge=1)
