"""Experiment configuration and run manifest models."""
from datetime import datetime
from enum import Enum
from typing import Dict, List, Optional, Tuple

from pydantic import BaseModel, Field, field_validator, model_validator

from latgame.config import settings
from latgame.models.lattice import GameParams, LatticeGeometry, PayoffMatrix


class ExperimentMode(str, Enum):
    """What an experiment run does."""

    SIMULATE = "simulate"
    MEANFIELD = "meanfield"
    BOOTSTRAP = "bootstrap"
    REDUCE = "reduce"
    VERIFY = "verify"
    FIGURE1 = "figure1"


# Keys every config of a mode must set; "params" means a1 and a2, or payoff
REQUIRED_KEYS: Dict[ExperimentMode, Tuple[str, ...]] = {
    ExperimentMode.SIMULATE: ("sides", "params", "t_max", "master_seed"),
    ExperimentMode.MEANFIELD: ("params", "u0", "t_max"),
    ExperimentMode.BOOTSTRAP: ("d", "m", "q_values", "bootstrap_sides", "master_seed"),
    ExperimentMode.REDUCE: ("sides", "params", "p", "master_seed"),
    ExperimentMode.VERIFY: ("sides", "params", "p", "t_max", "master_seed"),
    ExperimentMode.FIGURE1: ("sides", "params", "t_max", "master_seed"),
}

FIGURE1_DENSITIES = (0.15, 0.20)


class ExperimentConfig(BaseModel):
    """Validated experiment configuration."""

    mode: ExperimentMode
    d: Optional[int] = Field(default=None, ge=1)
    sides: Optional[Tuple[int, ...]] = None
    a1: Optional[float] = None
    a2: Optional[float] = None
    payoff: Optional[Tuple[float, float, float, float]] = None
    p: Optional[float] = Field(default=None, ge=0.0, le=1.0)
    t_max: Optional[float] = Field(default=None, gt=0.0)
    record_every: float = Field(default=settings.DEFAULT_RECORD_EVERY, gt=0.0)
    seeds: int = Field(default=1, ge=1)
    master_seed: int = 0
    snapshot_every: Optional[float] = Field(default=None, gt=0.0)
    output_dir: Optional[str] = None
    workers: int = Field(default=1, ge=1)
    scheme: str = settings.DEFAULT_SCHEME
    m: Optional[int] = Field(default=None, ge=1)
    q_values: Optional[List[float]] = None
    bootstrap_sides: Optional[List[int]] = None
    u0: Optional[float] = Field(default=None, ge=0.0, le=1.0)
    dt: float = Field(default=1e-3, gt=0.0)
    densities: Optional[List[float]] = None
    resume_from: Optional[str] = None

    @field_validator("sides", "bootstrap_sides")
    @classmethod
    def _check_sides(cls, value, info):
        if value is None:
            return value
        for side in value:
            if info.field_name == "sides" and (side < 4 or side % 2):
                raise ValueError(f"side length {side} must be even and at least 4")
            if info.field_name == "bootstrap_sides" and side < 2:
                raise ValueError(f"coarse side length {side} must be at least 2")
        return value

    @model_validator(mode="after")
    def _check_consistency(self) -> "ExperimentConfig":
        if self.sides is not None:
            if self.d is None:
                self.d = len(self.sides)
            elif self.d != len(self.sides):
                raise ValueError(f"d={self.d} does not match {len(self.sides)} side lengths")
        if self.payoff is not None and (self.a1 is not None or self.a2 is not None):
            raise ValueError("give either payoff or a1/a2, not both")
        if (self.a1 is None) != (self.a2 is None):
            raise ValueError("a1 and a2 must be given together")
        if self.scheme not in ("active", "naive"):
            raise ValueError(f"scheme must be 'active' or 'naive', got {self.scheme!r}")
        for name in ("q_values", "densities"):
            values = getattr(self, name)
            if values is not None and any(not 0.0 <= v <= 1.0 for v in values):
                raise ValueError(f"{name} must lie in [0, 1]")
        if self.m is not None and self.d is not None and self.m > 2 * self.d:
            raise ValueError(f"m={self.m} exceeds 2d={2 * self.d}")
        if self.mode == ExperimentMode.FIGURE1 and self.d != 2:
            raise ValueError("figure1 runs on a two-dimensional torus")
        if self.mode == ExperimentMode.SIMULATE and self.p is None and self.resume_from is None:
            raise ValueError("simulate needs p or resume_from")
        return self

    @property
    def geometry(self) -> LatticeGeometry:
        return LatticeGeometry(sides=self.sides)

    @property
    def payoff_matrix(self) -> Optional[PayoffMatrix]:
        if self.payoff is None:
            return None
        a11, a12, a21, a22 = self.payoff
        return PayoffMatrix(a11=a11, a12=a12, a21=a21, a22=a22)

    @property
    def direct_params(self) -> Optional[GameParams]:
        """(a1, a2) when given directly rather than through a payoff matrix."""
        if self.a1 is None:
            return None
        return GameParams(a1=self.a1, a2=self.a2)

    @property
    def figure1_densities(self) -> List[float]:
        return list(self.densities) if self.densities else list(FIGURE1_DENSITIES)

    def echo(self) -> Dict[str, str]:
        """Set keys rendered as config-file values."""
        rendered = {}
        for key, value in self.model_dump(exclude_none=True).items():
            if isinstance(value, Enum):
                value = value.value
            if isinstance(value, (list, tuple)):
                value = ",".join(repr(v) if isinstance(v, float) else str(v) for v in value)
            elif isinstance(value, float):
                value = repr(value)
            rendered[key] = str(value)
        return rendered


class RunManifest(BaseModel):
    """Everything needed to reproduce and audit a run directory."""

    engine_version: str
    config: Dict[str, str] = Field(default_factory=dict)
    replica_seeds: List[int] = Field(default_factory=list)
    results: Dict[str, str] = Field(default_factory=dict)
    artifacts: Dict[str, str] = Field(default_factory=dict)
    started_at: datetime = Field(default_factory=datetime.now)
    wall_clock_seconds: float = 0.0
    output_dir: str = ""
    passed: Optional[bool] = None

    def to_text(self) -> str:
        """Flat `key = value` rendering; artifacts are listed with their sha256."""
        lines = [f"engine_version = {self.engine_version}"]
        lines += [f"config.{key} = {value}" for key, value in self.config.items()]
        lines += [f"seed.{i} = {seed}" for i, seed in enumerate(self.replica_seeds)]
        lines += [f"result.{key} = {value}" for key, value in self.results.items()]
        if self.passed is not None:
            lines.append(f"passed = {str(self.passed).lower()}")
        lines += [f"artifact.{name} = {digest}" for name, digest in sorted(self.artifacts.items())]
        lines.append(f"started_at = {self.started_at.isoformat()}")
        lines.append(f"wall_clock_seconds = {self.wall_clock_seconds:.3f}")
        return "\n".join(lines) + "\n"
