"""Models for the corner-growth certificate."""
from typing import List

from pydantic import BaseModel, Field

from latgame.models.lattice import SiteId


class CornerLayer(BaseModel):
    """Comparison of the n-th Φ iterate with the staged corner layer inside H_z."""

    n: int
    required: List[SiteId] = Field(default_factory=list)
    present: List[SiteId] = Field(default_factory=list)
    included: bool
    exact: bool


class CornerCertificate(BaseModel):
    """Layer-by-layer trace of the corner fill of H_z from d adjacent hypercubes."""

    d: int
    a1: float
    a2: float
    side: int
    layers: List[CornerLayer] = Field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(layer.included for layer in self.layers)

    @property
    def exact(self) -> bool:
        return all(layer.exact for layer in self.layers)
