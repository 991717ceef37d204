"""Mutable lattice states owned by a single run."""
from typing import Optional

import numpy as np

from latgame.core.lattice_rules import flip_targets, neighbor_lists, strategy1_counts
from latgame.models.field import InfectionField, StrategyField
from latgame.models.lattice import GameParams
from latgame.services.event_stream import ActiveSet, UnionActiveSet


class WorkingLattice:
    """Best-response state with incrementally maintained N1 counts and active set.

    A site is active when its flip target is not None. Only a flip changes
    activity, and only at the flipped site and its 2d neighbors.
    """

    def __init__(self, field: StrategyField, params: GameParams, union: Optional[UnionActiveSet] = None):
        geometry = field.geometry
        self.geometry = geometry
        self.params = params
        self.n_sites = geometry.n_sites
        self.neighbors = neighbor_lists(geometry)
        degree = geometry.degree

        indicator = field.indicator()
        self.state = bytearray(indicator.astype(np.uint8).tobytes())
        self.n1 = strategy1_counts(field.to_array()).reshape(-1).tolist()
        self.count1 = field.count

        # Lookup by N1: strict preference for strategy 1 or strategy 2
        self._to_one = [params.a1 * k > params.a2 * (degree - k) for k in range(degree + 1)]
        self._to_two = [params.a1 * k < params.a2 * (degree - k) for k in range(degree + 1)]

        self._union = union
        active = np.flatnonzero(flip_targets(field.to_array(), params).reshape(-1))
        self.active = ActiveSet(self.n_sites, active.tolist())
        if union is not None:
            for i in self.active:
                union.increment(i)

    def _is_active(self, i: int) -> bool:
        k = self.n1[i]
        return self._to_two[k] if self.state[i] else self._to_one[k]

    def _refresh(self, i: int) -> None:
        now = self._is_active(i)
        was = i in self.active
        if now == was:
            return
        if now:
            self.active.add(i)
            if self._union is not None:
                self._union.increment(i)
        else:
            self.active.discard(i)
            if self._union is not None:
                self._union.decrement(i)

    def update(self, i: int) -> int:
        """Apply the best-response rule at site i.

        Returns:
            The new strategy (1 or 2) if the site flipped, else 0.
        """
        k = self.n1[i]
        if self.state[i]:
            if not self._to_two[k]:
                return 0
            self.state[i] = 0
            self.count1 -= 1
            delta, new = -1, 2
        else:
            if not self._to_one[k]:
                return 0
            self.state[i] = 1
            self.count1 += 1
            delta, new = 1, 1
        n1 = self.n1
        row = self.neighbors[i]
        for j in row:
            n1[j] += delta
        self._refresh(i)
        for j in row:
            self._refresh(j)
        return new

    @property
    def absorbed(self) -> bool:
        return not self.active.members

    @property
    def density1(self) -> float:
        return self.count1 / self.n_sites

    def to_field(self) -> StrategyField:
        indicator = np.frombuffer(bytes(self.state), dtype=np.uint8).astype(bool)
        return StrategyField.from_indicator(self.geometry, indicator)


class InfectionLattice:
    """Richardson state: a healthy site with an infected neighbor is active."""

    def __init__(self, field: InfectionField, union: Optional[UnionActiveSet] = None):
        geometry = field.geometry
        self.geometry = geometry
        self.n_sites = geometry.n_sites
        self.neighbors = neighbor_lists(geometry)
        indicator = field.to_array()
        self.infected = bytearray(field.indicator().astype(np.uint8).tobytes())
        self.infected_neighbors = strategy1_counts(indicator).reshape(-1).tolist()
        self.count = field.count

        self._union = union
        frontier = np.flatnonzero((~indicator & (strategy1_counts(indicator) > 0)).reshape(-1))
        self.active = ActiveSet(self.n_sites, frontier.tolist())
        if union is not None:
            for i in self.active:
                union.increment(i)

    def _deactivate(self, i: int) -> None:
        if i in self.active:
            self.active.discard(i)
            if self._union is not None:
                self._union.decrement(i)

    def _activate(self, i: int) -> None:
        if i not in self.active:
            self.active.add(i)
            if self._union is not None:
                self._union.increment(i)

    def update(self, i: int) -> bool:
        """Infect site i if it is healthy and has an infected neighbor."""
        if self.infected[i] or not self.infected_neighbors[i]:
            return False
        self.infected[i] = 1
        self.count += 1
        self._deactivate(i)
        for j in self.neighbors[i]:
            self.infected_neighbors[j] += 1
            if not self.infected[j]:
                self._activate(j)
        return True

    @property
    def is_full(self) -> bool:
        return self.count == self.n_sites

    @property
    def fraction(self) -> float:
        return self.count / self.n_sites

    def to_field(self) -> InfectionField:
        indicator = np.frombuffer(bytes(self.infected), dtype=np.uint8).astype(bool)
        return InfectionField.from_indicator(self.geometry, indicator)
