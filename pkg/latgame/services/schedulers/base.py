"""Base scheduler for the best-response engine."""
from abc import ABC, abstractmethod

from latgame.services.working_lattice import WorkingLattice


class BaseScheduler(ABC):
    """Decides which sites receive update events."""

    name: str = ""

    @abstractmethod
    def eligible_count(self, lattice: WorkingLattice) -> int:
        """Number of sites whose clocks are currently scheduled.

        Args:
            lattice: State of the running field.

        Returns:
            Count of eligible sites; the next gap is exponential with this rate.
        """
        pass

    @abstractmethod
    def pick(self, lattice: WorkingLattice, slot: int) -> int:
        """Map a uniform slot in [0, eligible_count) to a site index.

        Args:
            lattice: State of the running field.
            slot: Slot drawn by the event stream.

        Returns:
            Row-major index of the site to update.
        """
        pass
