"""Mean-field approximation models."""
from enum import Enum
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field


class RegimeKind(str, Enum):
    """Long-time behavior of the mean-field equation."""

    STRATEGY1_WINS = "strategy1-wins"
    STRATEGY2_WINS = "strategy2-wins"
    COEXISTENCE = "coexistence"
    BISTABLE = "bistable"


class Regime(BaseModel):
    """Regime classification with the threshold u* where it is meaningful."""

    model_config = ConfigDict(frozen=True)

    kind: RegimeKind
    threshold: Optional[float] = None


class MeanFieldState(BaseModel):
    """Frequency of strategy-1 players; u2 = 1 - u1 is implicit."""

    model_config = ConfigDict(frozen=True)

    u1: float = Field(ge=0.0, le=1.0)

    @property
    def u2(self) -> float:
        return 1.0 - self.u1


class MeanFieldPoint(BaseModel):
    """Exact and numerical trajectory values at one time."""

    model_config = ConfigDict(frozen=True)

    t: float
    exact: float
    numeric: float
    drift: float
