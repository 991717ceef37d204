"""Packed boolean fields over lattice geometries."""
from typing import Iterable, List, Optional, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from latgame.models.lattice import LatticeGeometry, SiteId


class CoarseGeometry(BaseModel):
    """Torus indexing the hypercubes H_z = 2z + {0,1}^d of a fine lattice."""

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
    def _check_sides(self) -> "CoarseGeometry":
        if len(self.sides) != self.d:
            raise ValueError(f"expected {self.d} side lengths, got {len(self.sides)}")
        if any(side < 2 for side in self.sides):
            raise ValueError("coarse side lengths must be at least 2")
        return self

    @classmethod
    def of(cls, fine: LatticeGeometry) -> "CoarseGeometry":
        """Coarse geometry of a fine lattice (even sides guarantee exact division)."""
        return cls(d=fine.d, sides=tuple(s // 2 for s in fine.sides))

    @classmethod
    def cubic(cls, d: int, side: int) -> "CoarseGeometry":
        return cls(d=d, sides=(side,) * d)

    @property
    def n_sites(self) -> int:
        return int(np.prod(self.sides))

    def canonical(self, z: Union[int, SiteId]) -> SiteId:
        if isinstance(z, int):
            z = (z,)
        if len(z) != self.d:
            raise ValueError(f"site {z} does not have {self.d} coordinates")
        return tuple(int(c) % s for c, s in zip(z, self.sides))

    def index(self, z: Union[int, SiteId]) -> int:
        return int(np.ravel_multi_index(self.canonical(z), self.sides))


Geometry = Union[LatticeGeometry, CoarseGeometry]


class PackedField:
    """Immutable boolean field stored one bit per site in row-major order."""

    __slots__ = ("_geometry", "_bits", "_count")

    def __init__(self, geometry: Geometry, bits: np.ndarray, count: Optional[int] = None):
        self._geometry = geometry
        bits = np.asarray(bits, dtype=np.uint8)
        if bits.shape != ((geometry.n_sites + 7) // 8,):
            raise ValueError("packed bits do not match the geometry")
        bits.setflags(write=False)
        self._bits = bits
        self._count = count

    @classmethod
    def from_indicator(cls, geometry: Geometry, indicator) -> "PackedField":
        """Build a field from a boolean array (shape sides or flat)."""
        flat = np.asarray(indicator, dtype=bool).reshape(-1)
        if flat.size != geometry.n_sites:
            raise ValueError(
                f"indicator has {flat.size} entries, geometry has {geometry.n_sites} sites"
            )
        return cls(geometry, np.packbits(flat), int(flat.sum()))

    @classmethod
    def from_sites(cls, geometry: Geometry, sites: Iterable[Union[int, SiteId]]) -> "PackedField":
        """Build a field whose marked set is the given sites."""
        flat = np.zeros(geometry.n_sites, dtype=bool)
        for x in sites:
            flat[geometry.index(x)] = True
        return cls.from_indicator(geometry, flat)

    @classmethod
    def empty(cls, geometry: Geometry) -> "PackedField":
        return cls.from_indicator(geometry, np.zeros(geometry.n_sites, dtype=bool))

    @classmethod
    def full(cls, geometry: Geometry) -> "PackedField":
        return cls.from_indicator(geometry, np.ones(geometry.n_sites, dtype=bool))

    @property
    def geometry(self) -> Geometry:
        return self._geometry

    @property
    def bits(self) -> np.ndarray:
        return self._bits

    def indicator(self) -> np.ndarray:
        """Flat boolean array of marked sites (a fresh, writable copy)."""
        return np.unpackbits(self._bits, count=self._geometry.n_sites).astype(bool)

    def to_array(self) -> np.ndarray:
        """Boolean array of marked sites with shape equal to the geometry sides."""
        return self.indicator().reshape(self._geometry.sides)

    def marked(self, x: Union[int, SiteId]) -> bool:
        i = self._geometry.index(x)
        return bool((self._bits[i >> 3] >> (7 - (i & 7))) & 1)

    def marked_sites(self) -> List[SiteId]:
        """Coordinates of the marked sites in row-major order."""
        return [tuple(int(c) for c in z) for z in np.argwhere(self.to_array())]

    @property
    def count(self) -> int:
        """Number of marked sites."""
        if self._count is None:
            self._count = int(self.indicator().sum())
        return self._count

    @property
    def density(self) -> float:
        return self.count / self._geometry.n_sites

    @property
    def is_full(self) -> bool:
        return self.count == self._geometry.n_sites

    @property
    def is_empty(self) -> bool:
        return self.count == 0

    def _check_same(self, other: "PackedField") -> None:
        if type(other) is not type(self) or other.geometry != self.geometry:
            raise ValueError("fields live on different geometries")

    def issubset(self, other: "PackedField") -> bool:
        """Inclusion of marked sets; padding bits are zero in both operands."""
        self._check_same(other)
        return not np.any(self._bits & ~other.bits)

    def __le__(self, other: "PackedField") -> bool:
        return self.issubset(other)

    def union(self, other: "PackedField") -> "PackedField":
        self._check_same(other)
        return type(self)(self._geometry, self._bits | other.bits)

    def intersection(self, other: "PackedField") -> "PackedField":
        self._check_same(other)
        return type(self)(self._geometry, self._bits & other.bits)

    def __eq__(self, other: object) -> bool:
        if type(other) is not type(self):
            return NotImplemented
        return self.geometry == other.geometry and np.array_equal(self._bits, other.bits)

    def __hash__(self) -> int:
        return hash((type(self).__name__, self._geometry, self._bits.tobytes()))

    def __repr__(self) -> str:
        return f"{type(self).__name__}(sides={self._geometry.sides}, marked={self.count})"


class StrategyField(PackedField):
    """Strategy configuration, identified with its set of strategy-1 sites.

    Every site holds strategy 1 (marked) or strategy 2 (unmarked).
    """

    @classmethod
    def filled(cls, geometry: LatticeGeometry, strategy: int) -> "StrategyField":
        """Configuration where every site holds the given strategy."""
        if strategy not in (1, 2):
            raise ValueError(f"unknown strategy {strategy}")
        return cls.full(geometry) if strategy == 1 else cls.empty(geometry)

    def strategy_at(self, x: Union[int, SiteId]) -> int:
        return 1 if self.marked(x) else 2

    def with_strategy(self, x: Union[int, SiteId], strategy: int) -> "StrategyField":
        flat = self.indicator()
        flat[self.geometry.index(x)] = strategy == 1
        return type(self).from_indicator(self.geometry, flat)

    @property
    def is_mixed(self) -> bool:
        """True when both strategies are present."""
        return not self.is_full and not self.is_empty


class InfectionField(PackedField):
    """Infected set of the Richardson model."""


class CoarseField(PackedField):
    """Occupied set on a coarse lattice (bootstrap state or hypercubic view)."""

    def is_occupied(self, z: Union[int, SiteId]) -> bool:
        return self.marked(z)
