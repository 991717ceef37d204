"""Scheduler ringing every site's clock."""
from latgame.services.schedulers.base import BaseScheduler
from latgame.services.working_lattice import WorkingLattice


class NaiveScheduler(BaseScheduler):
    """All sites are eligible; events at stable sites are no-ops."""

    name = "naive"

    def eligible_count(self, lattice: WorkingLattice) -> int:
        return lattice.n_sites

    def pick(self, lattice: WorkingLattice, slot: int) -> int:
        return slot
