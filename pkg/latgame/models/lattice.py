"""Lattice geometry and payoff parameter models."""
import math
from enum import Enum
from typing import Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


SiteId = Tuple[int, ...]


class LatticeGeometry(BaseModel):
    """A d-dimensional torus with even side lengths.

    Sites are addressed by coordinate tuples and linearized in row-major order,
    so the last coordinate varies fastest.
    """

    model_config = ConfigDict(frozen=True)

    d: int = Field(ge=1)
    sides: Tuple[int, ...]

    @model_validator(mode="before")
    @classmethod
    def _fill_dimension(cls, data):
        if isinstance(data, dict) and "d" not in data and "sides" in data:
            data = {**data, "d": len(tuple(data["sides"]))}
        return data

    @model_validator(mode="after")
    def _check_sides(self) -> "LatticeGeometry":
        if len(self.sides) != self.d:
            raise ValueError(f"expected {self.d} side lengths, got {len(self.sides)}")
        for side in self.sides:
            if side < 4:
                raise ValueError(f"side length {side} is smaller than 4")
            if side % 2:
                raise ValueError(f"side length {side} is odd")
        return self

    @classmethod
    def cubic(cls, d: int, side: int) -> "LatticeGeometry":
        """Create a torus with d equal sides."""
        return cls(d=d, sides=(side,) * d)

    @property
    def n_sites(self) -> int:
        """Number of sites on the torus."""
        return math.prod(self.sides)

    @property
    def degree(self) -> int:
        """Number of neighbors of every site."""
        return 2 * self.d

    def canonical(self, x: Union[int, SiteId]) -> SiteId:
        """Wrap coordinates periodically into range."""
        if isinstance(x, int):
            x = (x,)
        if len(x) != self.d:
            raise ValueError(f"site {x} does not have {self.d} coordinates")
        return tuple(int(c) % s for c, s in zip(x, self.sides))

    def index(self, x: Union[int, SiteId]) -> int:
        """Row-major linear index of a site."""
        idx = 0
        for c, s in zip(self.canonical(x), self.sides):
            idx = idx * s + c
        return idx

    def site(self, index: int) -> SiteId:
        """Coordinates of the site with the given row-major index."""
        coords = []
        for s in reversed(self.sides):
            index, c = divmod(index, s)
            coords.append(c)
        return tuple(reversed(coords))


class PayoffMatrix(BaseModel):
    """Two-strategy payoff matrix; a_ij is the payoff of strategy i against strategy j."""

    model_config = ConfigDict(frozen=True)

    a11: float
    a12: float
    a21: float
    a22: float

    @field_validator("a11", "a12", "a21", "a22")
    @classmethod
    def _check_finite(cls, value: float) -> float:
        if not math.isfinite(value):
            raise ValueError("payoff entries must be finite")
        return value


class GameParams(BaseModel):
    """The two payoff differences a1 = a11 - a21 and a2 = a22 - a12."""

    model_config = ConfigDict(frozen=True)

    a1: float
    a2: float

    @field_validator("a1", "a2")
    @classmethod
    def _check_finite(cls, value: float) -> float:
        if not math.isfinite(value):
            raise ValueError("game parameters must be finite")
        return value

    @property
    def monotone(self) -> bool:
        """True when a1 > a2 > 0, the regime where the growth machinery applies."""
        return self.a1 > self.a2 > 0


class StrategyClass(str, Enum):
    """Sign classification of a strategy."""

    SELFISH = "selfish"
    ALTRUISTIC = "altruistic"
    NEUTRAL = "neutral"
