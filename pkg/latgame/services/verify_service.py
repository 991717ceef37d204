"""Verification battery for the monotone growth machinery.

Items:
    attractiveness     nested coupled runs stay nested after every event
    sparse-monotone    a run from sparse_reduce(η0) never loses a strategy-1 site
    phi-iterates       Φ^n of every sampled state of that run lies in its absorbing state
    bootstrap-domination
                       corner-rule growth of the hypercubic view lies in the final view
    coarse-density     coarse occupation frequency matches p^(2^d)

With a1 > a2 > 0 any violation is an engine bug, never noise.
"""
import logging
import math
import multiprocessing
from typing import Dict, List, Optional, Tuple

import numpy as np
from tqdm import tqdm

from latgame.config import settings
from latgame.core.bootstrap import limit_indicator
from latgame.core.lattice_rules import random_field
from latgame.core.reductions import (
    coarse_indicator,
    phi_closure_depth,
    phi_indicator,
    sparse_reduce,
)
from latgame.core.seeding import derive_seed
from latgame.models.experiment import ExperimentConfig
from latgame.models.lattice import GameParams, LatticeGeometry
from latgame.models.verify import VerifyItem, VerifyReport
from latgame.services.config_parser import resolve_params
from latgame.services.dynamics_service import check_coupled_inclusion, simulate_active_set


logger = logging.getLogger(__name__)

# Two-sided 99.9% normal quantile for the coarse-density check
DENSITY_Z = 3.29
MIN_DOMINATION_SIDE = 8


def corner_step(occupied: np.ndarray) -> np.ndarray:
    """Occupy z when along every axis at least one of z - e_j, z + e_j is occupied."""
    grow = np.ones(occupied.shape, dtype=bool)
    for axis in range(occupied.ndim):
        grow &= np.roll(occupied, 1, axis=axis) | np.roll(occupied, -1, axis=axis)
    return occupied | grow


def corner_limit(occupied: np.ndarray) -> np.ndarray:
    current = occupied
    for _ in range(current.size + 1):
        nxt = corner_step(current)
        if np.array_equal(nxt, current):
            break
        current = nxt
    return current


def _snapshot_times(config: ExperimentConfig) -> Tuple[float, ...]:
    every = config.snapshot_every or config.t_max / 4
    count = int(math.floor(config.t_max / every))
    return tuple(k * every for k in range(count + 1))


def _verify_replica(args: Tuple[LatticeGeometry, GameParams, float, float, int, Tuple[float, ...]]) -> Dict[str, int]:
    """Counts of checks and violations for one replica."""
    geometry, params, p, t_max, seed, snapshot_times = args
    counts: Dict[str, int] = {}
    field = random_field(geometry, p, seed)
    coarse = coarse_indicator(field.to_array())
    sparse = sparse_reduce(field)
    counts["coarse_occupied"] = int(coarse.sum())
    counts["coarse_sites"] = int(coarse.size)

    if params.a1 > 0 and params.a2 > 0:
        inclusion = check_coupled_inclusion(sparse, field, params, t_max, seed)
        counts["attractiveness_violations"] = inclusion.violations
        counts["attractiveness_checks"] = inclusion.events_processed

    if not params.monotone:
        return counts

    shrinks = [0]

    def on_flip(t: float, site: int, new: int) -> None:
        if new == 2:
            shrinks[0] += 1

    run = simulate_active_set(sparse, params, t_max, seed, snapshot_times=snapshot_times, on_flip=on_flip)
    counts["monotone_violations"] = shrinks[0]
    counts["monotone_checks"] = run.flips
    closure, depth = phi_closure_depth(sparse, params)
    violations = checks = 0
    if run.absorbed:
        reference = run.final
        counts["closure_mismatch"] = int(closure != run.final)
    else:
        # The closure is the state the run absorbs in; the horizon state must already lie inside it
        counts["unabsorbed"] = 1
        reference = closure
        checks += 1
        violations += int(not run.final <= closure)
    final = reference.to_array()

    for snapshot in run.snapshots:
        current = snapshot.field.to_array()
        for _ in range(depth + 1):
            checks += 1
            if np.any(current & ~final):
                violations += 1
            current = phi_indicator(current, params)
    counts["phi_violations"] = violations + counts.get("closure_mismatch", 0)
    counts["phi_checks"] = checks

    if min(geometry.sides) >= MIN_DOMINATION_SIDE:
        final_view = coarse_indicator(final)
        start = coarse_indicator(sparse.to_array())
        grown = corner_limit(start)
        literal, _ = limit_indicator(start, geometry.d)
        counts["domination_violations"] = int(np.sum(grown & ~final_view))
        counts["domination_checks"] = int(grown.size)
        counts["literal_excess"] = int(np.sum(literal & ~final_view))
    return counts


class VerifyService:
    """Runs the verification battery over seeded replicas."""

    def __init__(self, workers: Optional[int] = None, show_progress: Optional[bool] = None):
        self.workers = workers or settings.DEFAULT_WORKERS
        self.show_progress = settings.SHOW_PROGRESS if show_progress is None else show_progress

    def verify_suite(self, config: ExperimentConfig) -> VerifyReport:
        """Run every item with config.seeds replicas.

        Args:
            config: Verify config (sides, params, p, t_max, seeds, master_seed).

        Returns:
            VerifyReport; items whose parameter precondition fails are skipped with a reason.
        """
        params = resolve_params(config)
        geometry = config.geometry
        seeds = [derive_seed(config.master_seed, i) for i in range(config.seeds)]
        times = _snapshot_times(config)
        tasks = [(geometry, params, config.p, config.t_max, seed, times) for seed in seeds]
        logger.info("Verifying %d replicas on %s with a=(%g, %g), p=%g", len(tasks), geometry.sides, params.a1, params.a2, config.p)

        workers = config.workers if config.workers > 1 else self.workers
        results: List[Dict[str, int]] = []
        with tqdm(total=len(tasks), desc="verify", disable=not self.show_progress) as progress:
            if workers > 1:
                with multiprocessing.Pool(workers) as pool:
                    for result in pool.imap(_verify_replica, tasks):
                        results.append(result)
                        progress.update(1)
            else:
                for task in tasks:
                    results.append(_verify_replica(task))
                    progress.update(1)

        def total(key: str) -> int:
            return sum(r.get(key, 0) for r in results)

        report = VerifyReport(seeds=len(seeds))
        monotone_reason = None if params.monotone else "requires a1 > a2 > 0"

        report.items.append(
            VerifyItem(
                key="attractiveness",
                title="nested coupled runs stay nested",
                skipped=not (params.a1 > 0 and params.a2 > 0),
                reason=None if params.a1 > 0 and params.a2 > 0 else "requires a1 > 0 and a2 > 0",
                violations=total("attractiveness_violations"),
                checks=total("attractiveness_checks"),
            )
        )
        report.items.append(
            VerifyItem(
                key="sparse-monotone",
                title="sparse run never loses strategy 1",
                skipped=monotone_reason is not None,
                reason=monotone_reason,
                violations=total("monotone_violations"),
                checks=total("monotone_checks"),
            )
        )
        unabsorbed = total("unabsorbed")
        report.items.append(
            VerifyItem(
                key="phi-iterates",
                title="Φ iterates of sampled states lie in the absorbing state",
                skipped=monotone_reason is not None,
                reason=monotone_reason,
                violations=total("phi_violations"),
                checks=total("phi_checks"),
                details={
                    "unabsorbed_runs": str(unabsorbed),
                    "closure_mismatches": str(total("closure_mismatch")),
                },
            )
        )
        short = min(geometry.sides) < MIN_DOMINATION_SIDE
        report.items.append(
            VerifyItem(
                key="bootstrap-domination",
                title="corner-rule bootstrap limit lies in the final hypercubic view",
                skipped=monotone_reason is not None or short,
                reason=monotone_reason or (f"requires side lengths >= {MIN_DOMINATION_SIDE}" if short else None),
                violations=total("domination_violations"),
                checks=total("domination_checks"),
                details={
                    "unabsorbed_runs": str(unabsorbed),
                    "literal_m_equals_d_excess": str(total("literal_excess")),
                },
            )
        )

        occupied, sites = total("coarse_occupied"), total("coarse_sites")
        q = config.p ** (2 ** geometry.d)
        observed = occupied / sites
        if q in (0.0, 1.0):
            off = observed != q
            bound = 0.0
        else:
            bound = DENSITY_Z * math.sqrt(q * (1.0 - q) / sites)
            off = abs(observed - q) > bound
        report.items.append(
            VerifyItem(
                key="coarse-density",
                title="coarse initial density matches p^(2^d)",
                violations=int(off),
                checks=1,
                details={"expected": repr(q), "observed": repr(observed), "bound": repr(bound)},
            )
        )

        for item in report.items:
            status = "skipped" if item.skipped else ("pass" if item.passed else "FAIL")
            logger.info("%s: %s (%d violations / %d checks)", item.key, status, item.violations, item.checks)
        return report


def verify_suite(config: ExperimentConfig) -> VerifyReport:
    return VerifyService(show_progress=False).verify_suite(config)


# Default service instance
default_verify_service = VerifyService()
