"""Continuous-time best-response dynamics and coupled runs."""
import logging
from typing import Callable, Iterable, List, Optional, Sequence, Tuple

from latgame.config import settings
from latgame.exceptions import InvalidInputError
from latgame.models.field import StrategyField
from latgame.models.lattice import GameParams
from latgame.models.reports import (
    InclusionReport,
    InclusionViolation,
    RunReport,
    SeriesSample,
    Snapshot,
)
from latgame.services.event_stream import EventStream, UnionActiveSet
from latgame.services.schedulers.active_set import ActiveSetScheduler
from latgame.services.schedulers.base import BaseScheduler
from latgame.services.schedulers.factory import create_scheduler
from latgame.services.schedulers.naive import NaiveScheduler
from latgame.services.working_lattice import WorkingLattice


logger = logging.getLogger(__name__)

FlipObserver = Callable[[float, int, int], None]
EventObserver = Callable[[float, int, Sequence[WorkingLattice]], None]


class SeriesRecorder:
    """Samples a running lattice at times 0, r, 2r, ... and at requested snapshot times.

    A sample at time s reflects every event with time <= s.
    """

    def __init__(self, record_every: float, snapshot_times: Iterable[float] = ()):
        if record_every <= 0:
            raise InvalidInputError(f"record_every={record_every} must be positive")
        self.record_every = record_every
        self.series: List[SeriesSample] = []
        self.snapshots: List[Snapshot] = []
        self._k = 0
        self._pending = sorted(set(float(t) for t in snapshot_times if t >= 0))

    def _sample(self, t: float, lattice: WorkingLattice, flips: int) -> None:
        self.series.append(
            SeriesSample(t=t, density1=lattice.density1, flips=flips, active=len(lattice.active))
        )

    def before_event(self, t: float, lattice: WorkingLattice, flips: int) -> None:
        """Record everything strictly earlier than an event at time t."""
        while self._k * self.record_every < t:
            self._sample(self._k * self.record_every, lattice, flips)
            self._k += 1
        while self._pending and self._pending[0] < t:
            self.snapshots.append(Snapshot(t=self._pending.pop(0), field=lattice.to_field()))

    def finish(self, end: float, t_max: float, lattice: WorkingLattice, flips: int) -> None:
        """Close the series at ``end``; snapshots up to t_max see the frozen final state."""
        while self._k * self.record_every <= end:
            self._sample(self._k * self.record_every, lattice, flips)
            self._k += 1
        if not self.series or self.series[-1].t != end:
            self._sample(end, lattice, flips)
        while self._pending and self._pending[0] <= t_max:
            self.snapshots.append(Snapshot(t=self._pending.pop(0), field=lattice.to_field()))


def _check_horizon(t_max: float) -> None:
    if not t_max > 0:
        raise InvalidInputError(f"t_max={t_max} must be positive")


class DynamicsEngine:
    """Runs the best-response dynamics with a given scheduler."""

    def __init__(self, scheduler: Optional[BaseScheduler] = None):
        """Initialize the engine.

        Args:
            scheduler: Event scheduler. If None, use the scheme specified in settings.
        """
        self.scheduler = scheduler or create_scheduler()

    def run(
        self,
        field: StrategyField,
        params: GameParams,
        t_max: float,
        seed: int,
        record_every: Optional[float] = None,
        snapshot_times: Iterable[float] = (),
        on_flip: Optional[FlipObserver] = None,
    ) -> RunReport:
        """Simulate one trajectory until absorption or t_max.

        Args:
            field: Initial configuration.
            params: Game parameters (a1, a2).
            t_max: Time horizon, positive.
            seed: Replica seed; the event stream is derived from it.
            record_every: Spacing of series samples.
            snapshot_times: Times at which full configurations are kept.
            on_flip: Called as on_flip(t, site_index, new_strategy) after each flip.

        Returns:
            RunReport of the run.
        """
        _check_horizon(t_max)
        record_every = record_every or settings.DEFAULT_RECORD_EVERY
        lattice = WorkingLattice(field, params)
        recorder = SeriesRecorder(record_every, snapshot_times)
        stream = EventStream(seed)
        scheduler = self.scheduler

        events = 0
        flips = 0
        last_flip = 0.0
        while not lattice.absorbed:
            t, slot = stream.next_event(scheduler.eligible_count(lattice))
            if t > t_max:
                break
            recorder.before_event(t, lattice, flips)
            site = scheduler.pick(lattice, slot)
            events += 1
            new = lattice.update(site)
            if new:
                flips += 1
                last_flip = t
                if on_flip is not None:
                    on_flip(t, site, new)

        absorbed = lattice.absorbed
        end = last_flip if absorbed else t_max
        recorder.finish(end, t_max, lattice, flips)
        if absorbed:
            logger.debug("Seed %d absorbed at t=%.6g after %d events", seed, end, events)
        return RunReport(
            final=lattice.to_field(),
            absorbed=absorbed,
            absorption_time=end if absorbed else None,
            series=recorder.series,
            snapshots=recorder.snapshots,
            events_processed=events,
            flips=flips,
            end_time=end,
            seed=seed,
            scheme=scheduler.name,
        )


def simulate(
    field: StrategyField,
    params: GameParams,
    t_max: float,
    seed: int,
    record_every: Optional[float] = None,
    snapshot_times: Iterable[float] = (),
    on_flip: Optional[FlipObserver] = None,
) -> RunReport:
    """Run with every site's clock ringing (the literal graphical construction)."""
    return DynamicsEngine(NaiveScheduler()).run(
        field, params, t_max, seed, record_every, snapshot_times, on_flip
    )


def simulate_active_set(
    field: StrategyField,
    params: GameParams,
    t_max: float,
    seed: int,
    record_every: Optional[float] = None,
    snapshot_times: Iterable[float] = (),
    on_flip: Optional[FlipObserver] = None,
) -> RunReport:
    """Run with only active sites scheduled; same law as simulate."""
    return DynamicsEngine(ActiveSetScheduler()).run(
        field, params, t_max, seed, record_every, snapshot_times, on_flip
    )


def simulate_coupled(
    fields: Sequence[StrategyField],
    params: GameParams,
    t_max: float,
    seed: int,
    record_every: Optional[float] = None,
    on_event: Optional[EventObserver] = None,
) -> List[RunReport]:
    """Evolve several fields under one shared event stream.

    Every event (t, x) is applied to each field with that field's own flip
    rule. Events are drawn over the union of the fields' active sets, since a
    ring elsewhere changes no field.

    Args:
        fields: Initial configurations on one geometry.
        params: Game parameters.
        t_max: Time horizon, positive.
        seed: Seed of the shared event stream.
        record_every: Spacing of series samples.
        on_event: Called as on_event(t, site_index, lattices) after each event.

    Returns:
        One RunReport per field, in input order.
    """
    _check_horizon(t_max)
    if not fields:
        raise InvalidInputError("simulate_coupled needs at least one field")
    geometry = fields[0].geometry
    if any(f.geometry != geometry for f in fields):
        raise InvalidInputError("coupled fields must share one geometry")

    record_every = record_every or settings.DEFAULT_RECORD_EVERY
    union = UnionActiveSet(geometry.n_sites)
    lattices = [WorkingLattice(f, params, union) for f in fields]
    recorders = [SeriesRecorder(record_every) for _ in fields]
    flips = [0] * len(fields)
    absorbed_at: List[Optional[float]] = [0.0 if lat.absorbed else None for lat in lattices]
    stream = EventStream(seed)

    events = 0
    while union.members:
        t, slot = stream.next_event(len(union))
        if t > t_max:
            break
        site = union.members[slot]
        events += 1
        for idx, lattice in enumerate(lattices):
            # Absorbed lattices are frozen; their series closes at absorbed_at
            if lattice.absorbed:
                continue
            recorders[idx].before_event(t, lattice, flips[idx])
            if lattice.update(site):
                flips[idx] += 1
                if lattice.absorbed:
                    absorbed_at[idx] = t
        if on_event is not None:
            on_event(t, site, lattices)

    reports = []
    for idx, lattice in enumerate(lattices):
        absorbed = lattice.absorbed
        end = absorbed_at[idx] if absorbed else t_max
        recorders[idx].finish(end, t_max, lattice, flips[idx])
        reports.append(
            RunReport(
                final=lattice.to_field(),
                absorbed=absorbed,
                absorption_time=end if absorbed else None,
                series=recorders[idx].series,
                events_processed=events,
                flips=flips[idx],
                end_time=end,
                seed=seed,
                scheme="coupled",
            )
        )
    return reports


def check_coupled_inclusion(
    inner: StrategyField,
    outer: StrategyField,
    params: GameParams,
    t_max: float,
    seed: int,
) -> InclusionReport:
    """Run a coupled pair and check the nesting inner ⊆ outer after every event.

    Only the updated site can change, so each event is checked at that site.
    When the pair is not nested initially no claim is made and the runs are
    still reported.
    """
    nested = inner.issubset(outer)
    report = InclusionReport(nested_pairs=[(0, 1)] if nested else [])

    def observe(t: float, site: int, lattices: Sequence[WorkingLattice]) -> None:
        if not nested:
            return
        a, b = lattices[0].state[site], lattices[1].state[site]
        if a > b:
            report.violations += 1
            if report.first_violation is None:
                report.first_violation = InclusionViolation(
                    t=t,
                    site=inner.geometry.site(site),
                    inner=1 if a else 2,
                    outer=1 if b else 2,
                )

    reports = simulate_coupled([inner, outer], params, t_max, seed, on_event=observe)
    report.reports = reports
    report.events_processed = reports[0].events_processed
    if report.violations:
        logger.warning("Inclusion broken %d times (first at t=%.6g)", report.violations, report.first_violation.t)
    return report


def run_replica(
    field: StrategyField,
    params: GameParams,
    t_max: float,
    seed: int,
    scheme: Optional[str] = None,
    record_every: Optional[float] = None,
    snapshot_times: Tuple[float, ...] = (),
) -> RunReport:
    """Single run with the named scheme; a picklable entry point for worker pools."""
    return DynamicsEngine(create_scheduler(scheme)).run(
        field, params, t_max, seed, record_every, snapshot_times
    )
