"""Bootstrap percolation models."""
from typing import List, Optional

from pydantic import BaseModel, ConfigDict, Field


class BootstrapParams(BaseModel):
    """Occupation threshold m of bootstrap percolation."""

    model_config = ConfigDict(frozen=True)

    m: int = Field(ge=1)


class SweepCell(BaseModel):
    """Fraction of seeds reaching full occupation at one (L, q)."""

    model_config = ConfigDict(frozen=True)

    q: float = Field(ge=0.0, le=1.0)
    L: int
    fraction_full: float = Field(ge=0.0, le=1.0)
    full_count: int
    seeds: int


class SweepResult(BaseModel):
    """Grid of finite-size full-occupation fractions."""

    d: int
    m: int
    master_seed: int
    cells: List[SweepCell] = Field(default_factory=list)

    def fraction(self, L: int, q: float) -> Optional[float]:
        for cell in self.cells:
            if cell.L == L and cell.q == q:
                return cell.fraction_full
        return None
