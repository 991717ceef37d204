"""Run report models for the dynamics engine."""
from typing import List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field

from latgame.models.field import InfectionField, StrategyField
from latgame.models.lattice import SiteId


class SeriesSample(BaseModel):
    """State summary at one recording time."""

    model_config = ConfigDict(frozen=True)

    t: float
    density1: float = Field(ge=0.0, le=1.0)
    flips: int = Field(ge=0)
    active: int = Field(ge=0)


class Snapshot(BaseModel):
    """Full configuration at a requested time."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    t: float
    field: StrategyField


class RunReport(BaseModel):
    """Outcome of a single best-response run."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    final: StrategyField
    absorbed: bool
    absorption_time: Optional[float] = None
    series: List[SeriesSample] = Field(default_factory=list)
    snapshots: List[Snapshot] = Field(default_factory=list)
    events_processed: int = 0
    flips: int = 0
    end_time: float = 0.0
    seed: Optional[int] = None
    scheme: str = ""

    def snapshot_at(self, t: float) -> Optional[StrategyField]:
        """Snapshot recorded at exactly time t, if any."""
        for snapshot in self.snapshots:
            if snapshot.t == t:
                return snapshot.field
        return None


class InclusionViolation(BaseModel):
    """An event after which a nested pair of coupled fields stopped being nested."""

    model_config = ConfigDict(frozen=True)

    t: float
    site: SiteId
    inner: int
    outer: int


class InclusionReport(BaseModel):
    """Result of monitoring nested coupled runs event by event."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    nested_pairs: List[Tuple[int, int]] = Field(default_factory=list)
    violations: int = 0
    first_violation: Optional[InclusionViolation] = None
    events_processed: int = 0
    reports: List[RunReport] = Field(default_factory=list)


class RichardsonSample(BaseModel):
    """Infected fraction at one recording time."""

    model_config = ConfigDict(frozen=True)

    t: float
    infected: float = Field(ge=0.0, le=1.0)


class RichardsonReport(BaseModel):
    """Outcome of a Richardson growth run."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    final: InfectionField
    series: List[RichardsonSample] = Field(default_factory=list)
    full_time: Optional[float] = None
    events_processed: int = 0
    end_time: float = 0.0


class DominationViolation(BaseModel):
    """An event after which an infected site did not hold strategy 1."""

    model_config = ConfigDict(frozen=True)

    t: float
    site: SiteId


class DominationReport(BaseModel):
    """Result of the coupled best-response / Richardson run."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    violations: int = 0
    first_violation: Optional[DominationViolation] = None
    events_processed: int = 0
    final_strategies: StrategyField
    final_infection: InfectionField
    absorbed: bool = False
    absorption_time: Optional[float] = None

    @property
    def strategy1_fixated(self) -> bool:
        return self.final_strategies.is_full
