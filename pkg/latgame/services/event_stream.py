"""Seeded update events and the index sets they are drawn from."""
import math
from typing import List, Optional, Tuple

from latgame.config import settings
from latgame.core.seeding import EVENT_STREAM, make_rng
from latgame.exceptions import InvalidInputError


class EventStream:
    """Source of (time, slot) update events.

    Each event consumes one standard exponential and one uniform. The gap is
    the exponential divided by the number of eligible sites and the slot is
    uniform over them, which superposes independent rate-one clocks on the
    eligible sites. Times are strictly increasing.
    """

    def __init__(self, seed: int, batch_size: Optional[int] = None):
        self.seed = int(seed)
        self.time = 0.0
        self.drawn = 0
        self._rng = make_rng(self.seed, EVENT_STREAM)
        self._batch = int(batch_size or settings.EVENT_BATCH_SIZE)
        self._gaps: List[float] = []
        self._uniforms: List[float] = []
        self._pos = 0

    def _refill(self) -> None:
        self._gaps = self._rng.standard_exponential(self._batch).tolist()
        self._uniforms = self._rng.random(self._batch).tolist()
        self._pos = 0

    def next_event(self, eligible: int) -> Tuple[float, int]:
        """Advance to the next event among ``eligible`` sites.

        Returns:
            The event time and a slot in [0, eligible).
        """
        if eligible <= 0:
            raise InvalidInputError("an event needs at least one eligible site")
        if self._pos >= len(self._gaps):
            self._refill()
        gap = self._gaps[self._pos] / eligible
        slot = int(self._uniforms[self._pos] * eligible)
        self._pos += 1
        self.drawn += 1

        t = self.time + gap
        if t <= self.time:
            t = math.nextafter(self.time, math.inf)
        self.time = t
        return t, min(slot, eligible - 1)


class ActiveSet:
    """Set of site indices with O(1) add, discard and uniform access by slot."""

    __slots__ = ("members", "_position")

    def __init__(self, n_sites: int, initial=()):
        self.members: List[int] = []
        self._position = [-1] * n_sites
        for i in initial:
            self.add(int(i))

    def add(self, i: int) -> None:
        if self._position[i] < 0:
            self._position[i] = len(self.members)
            self.members.append(i)

    def discard(self, i: int) -> None:
        pos = self._position[i]
        if pos < 0:
            return
        last = self.members.pop()
        if last != i:
            self.members[pos] = last
            self._position[last] = pos
        self._position[i] = -1

    def __contains__(self, i: int) -> bool:
        return self._position[i] >= 0

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self.members)


class UnionActiveSet(ActiveSet):
    """Union of several active sets, kept current through per-site membership counts."""

    __slots__ = ("_counts",)

    def __init__(self, n_sites: int):
        super().__init__(n_sites)
        self._counts = [0] * n_sites

    def increment(self, i: int) -> None:
        self._counts[i] += 1
        if self._counts[i] == 1:
            self.add(i)

    def decrement(self, i: int) -> None:
        self._counts[i] -= 1
        if self._counts[i] == 0:
            self.discard(i)
