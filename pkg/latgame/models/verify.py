"""Verification battery and figure reproduction report models."""
from enum import Enum
from typing import Dict, List, Optional

from pydantic import BaseModel, Field


class VerifyItem(BaseModel):
    """One check of the verification battery."""

    key: str
    title: str
    skipped: bool = False
    reason: Optional[str] = None
    violations: int = 0
    checks: int = 0
    details: Dict[str, str] = Field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.skipped or self.violations == 0


class VerifyReport(BaseModel):
    """Per-item results of a verification run."""

    seeds: int
    items: List[VerifyItem] = Field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(item.passed for item in self.items)

    def item(self, key: str) -> Optional[VerifyItem]:
        for item in self.items:
            if item.key == key:
                return item
        return None


class Figure1Outcome(str, Enum):
    """Fate of one run at the horizon."""

    ALL_1 = "all-1"
    ALL_2 = "all-2"
    ABSORBED_MIXED = "absorbed-mixed"
    UNDECIDED = "undecided"


class Figure1Run(BaseModel):
    """Summary row of one figure run."""

    p: float
    seed_index: int
    seed: int
    outcome: Figure1Outcome
    density_start: float
    density_t25: Optional[float] = None
    density_end: float
    end_time: float
    growing_at_horizon: bool = False
