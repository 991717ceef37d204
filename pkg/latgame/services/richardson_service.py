"""Richardson growth and its domination by the best-response dynamics."""
import logging
from typing import Optional

from latgame.config import settings
from latgame.core.lattice_rules import strategy1_counts
from latgame.exceptions import InvalidInputError
from latgame.models.field import InfectionField, StrategyField
from latgame.models.lattice import GameParams
from latgame.models.reports import (
    DominationReport,
    DominationViolation,
    RichardsonReport,
    RichardsonSample,
)
from latgame.services.event_stream import EventStream, UnionActiveSet
from latgame.services.working_lattice import InfectionLattice, WorkingLattice


logger = logging.getLogger(__name__)


def richardson_init(field: StrategyField) -> InfectionField:
    """Infect the strategy-1 sites that have at least one strategy-1 neighbor."""
    indicator = field.to_array()
    infected = indicator & (strategy1_counts(indicator) > 0)
    return InfectionField.from_indicator(field.geometry, infected)


def simulate_richardson(
    infection: InfectionField,
    t_max: float,
    seed: int,
    record_every: Optional[float] = None,
) -> RichardsonReport:
    """Grow the infected set: a healthy site with an infected neighbor is infected at rate one.

    Args:
        infection: Initial infected set.
        t_max: Time horizon, positive.
        seed: Seed of the event stream.
        record_every: Spacing of samples of the infected fraction.

    Returns:
        RichardsonReport with the final infected set and the sampled fractions.
    """
    if not t_max > 0:
        raise InvalidInputError(f"t_max={t_max} must be positive")
    record_every = record_every or settings.DEFAULT_RECORD_EVERY
    lattice = InfectionLattice(infection)
    stream = EventStream(seed)
    series = []
    k = 0
    events = 0
    last = 0.0
    while lattice.active.members:
        t, slot = stream.next_event(len(lattice.active))
        if t > t_max:
            break
        while k * record_every < t:
            series.append(RichardsonSample(t=k * record_every, infected=lattice.fraction))
            k += 1
        lattice.update(lattice.active.members[slot])
        events += 1
        last = t

    stalled = not lattice.active.members
    end = last if stalled else t_max
    while k * record_every <= end:
        series.append(RichardsonSample(t=k * record_every, infected=lattice.fraction))
        k += 1
    if not series or series[-1].t != end:
        series.append(RichardsonSample(t=end, infected=lattice.fraction))
    return RichardsonReport(
        final=lattice.to_field(),
        series=series,
        full_time=last if lattice.is_full else None,
        events_processed=events,
        end_time=end,
    )


def check_richardson_domination(
    field: StrategyField,
    params: GameParams,
    t_max: float,
    seed: int,
) -> DominationReport:
    """Couple the dynamics with Richardson growth from richardson_init(field).

    Both processes read the same events; at every event the updated site is
    checked for infected ⊆ strategy 1. The coupling is valid when
    a1 > (2d - 1) a2 > 0: an infected site always has an infected (hence
    strategy-1) neighbor, which then outweighs the other 2d - 1.

    Raises:
        InvalidInputError: if a1 > (2d - 1) a2 > 0 fails, or t_max <= 0.
    """
    geometry = field.geometry
    if not params.a1 > (2 * geometry.d - 1) * params.a2 > 0:
        raise InvalidInputError(
            f"domination requires a1 > (2d - 1) a2 > 0, got a1={params.a1}, a2={params.a2}, d={geometry.d}"
        )
    if not t_max > 0:
        raise InvalidInputError(f"t_max={t_max} must be positive")

    union = UnionActiveSet(geometry.n_sites)
    dynamics = WorkingLattice(field, params, union)
    growth = InfectionLattice(richardson_init(field), union)
    stream = EventStream(seed)

    violations = 0
    first: Optional[DominationViolation] = None
    events = 0
    absorption_time: Optional[float] = 0.0 if dynamics.absorbed else None
    while union.members:
        t, slot = stream.next_event(len(union))
        if t > t_max:
            break
        site = union.members[slot]
        events += 1
        if dynamics.update(site) and dynamics.absorbed:
            absorption_time = t
        growth.update(site)
        if growth.infected[site] > dynamics.state[site]:
            violations += 1
            if first is None:
                first = DominationViolation(t=t, site=geometry.site(site))

    if violations:
        logger.warning("Richardson domination broken %d times (first at t=%.6g)", violations, first.t)
    return DominationReport(
        violations=violations,
        first_violation=first,
        events_processed=events,
        final_strategies=dynamics.to_field(),
        final_infection=growth.to_field(),
        absorbed=dynamics.absorbed,
        absorption_time=absorption_time if dynamics.absorbed else None,
    )
