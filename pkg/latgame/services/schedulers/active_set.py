"""Scheduler restricted to the active set."""
from latgame.services.schedulers.base import BaseScheduler
from latgame.services.working_lattice import WorkingLattice


class ActiveSetScheduler(BaseScheduler):
    """Only sites with a flip target are eligible.

    Rings at stable sites change nothing, so skipping them leaves the law of
    the trajectory unchanged; every scheduled event is a flip.
    """

    name = "active"

    def eligible_count(self, lattice: WorkingLattice) -> int:
        return len(lattice.active)

    def pick(self, lattice: WorkingLattice, slot: int) -> int:
        return lattice.active.members[slot]
