"""Finite-size sweeps of bootstrap percolation full-occupation fractions."""
import logging
import multiprocessing
from typing import Dict, List, Optional, Sequence, Tuple

from tqdm import tqdm

from latgame.config import settings
from latgame.core.bootstrap import check_threshold, limit_indicator
from latgame.core.seeding import FIELD_STREAM, derive_seed, make_rng
from latgame.exceptions import InvalidInputError
from latgame.models.bootstrap import SweepCell, SweepResult


logger = logging.getLogger(__name__)


def _sweep_worker(args: Tuple[int, int, int, Tuple[float, ...], int, int]) -> Tuple[int, int, List[bool]]:
    """Outcomes of one (L, seed) pair across all q, from one shared uniform field.

    Site z is initially occupied iff U_z < q, so the initial fields are nested
    in q and so are the limits.
    """
    d, m, L, q_values, seed_index, master_seed = args
    rng = make_rng(derive_seed(master_seed, L, seed_index), FIELD_STREAM)
    uniforms = rng.random((L,) * d)
    outcomes = []
    for q in q_values:
        limit, _ = limit_indicator(uniforms < q, m)
        outcomes.append(bool(limit.all()))
    return L, seed_index, outcomes


class BootstrapSweepService:
    """Runs full-occupation sweeps over side lengths and initial densities."""

    def __init__(self, workers: Optional[int] = None, show_progress: Optional[bool] = None):
        self.workers = workers or settings.DEFAULT_WORKERS
        self.show_progress = settings.SHOW_PROGRESS if show_progress is None else show_progress

    def sweep_critical_density(
        self,
        d: int,
        m: int,
        sides: Sequence[int],
        q_values: Sequence[float],
        seeds: int,
        master_seed: int,
    ) -> SweepResult:
        """Fraction of seeds whose bootstrap limit is the whole torus, per (L, q).

        Args:
            d: Dimension of the coarse lattice.
            m: Occupation threshold, 1 <= m <= 2d.
            sides: Coarse side lengths L.
            q_values: Initial occupation probabilities.
            seeds: Number of seeds per cell.
            master_seed: Master seed; field seeds are derived from (master_seed, L, seed index).

        Returns:
            SweepResult with one cell per (L, q), ordered by L then q.
        """
        if not sides or not q_values:
            raise InvalidInputError("side and q lists must be nonempty")
        if seeds < 1:
            raise InvalidInputError(f"seeds={seeds} must be positive")
        if any(not 0.0 <= q <= 1.0 for q in q_values):
            raise InvalidInputError(f"q values must lie in [0, 1], got {list(q_values)}")
        if any(L < 2 for L in sides):
            raise InvalidInputError(f"coarse sides must be at least 2, got {list(sides)}")
        check_threshold(m, d)

        # Repeated entries collapse to one cell, first occurrence order kept
        sides = list(dict.fromkeys(int(L) for L in sides))
        q_values = tuple(dict.fromkeys(float(q) for q in q_values))
        tasks = [(d, m, L, q_values, i, master_seed) for L in sides for i in range(seeds)]
        logger.info("Bootstrap sweep: d=%d m=%d sides=%s q=%s seeds=%d", d, m, list(sides), list(q_values), seeds)

        progress = tqdm(total=len(tasks), desc="bootstrap sweep", disable=not self.show_progress)
        full: Dict[Tuple[int, float], int] = {(L, q): 0 for L in sides for q in q_values}
        if self.workers > 1:
            with multiprocessing.Pool(self.workers) as pool:
                results = []
                for result in pool.imap(_sweep_worker, tasks):
                    results.append(result)
                    progress.update(1)
        else:
            results = []
            for task in tasks:
                results.append(_sweep_worker(task))
                progress.update(1)
        progress.close()

        for L, _, outcomes in results:
            for q, reached in zip(q_values, outcomes):
                full[(L, q)] += int(reached)

        result = SweepResult(d=d, m=m, master_seed=master_seed)
        for L in sides:
            for q in q_values:
                count = full[(L, q)]
                result.cells.append(
                    SweepCell(q=q, L=L, fraction_full=count / seeds, full_count=count, seeds=seeds)
                )
        return result


def sweep_critical_density(
    d: int,
    m: int,
    sides: Sequence[int],
    q_values: Sequence[float],
    seeds: int,
    master_seed: int,
    workers: Optional[int] = None,
) -> SweepResult:
    """Module-level shortcut for BootstrapSweepService.sweep_critical_density."""
    service = BootstrapSweepService(workers=workers, show_progress=False)
    return service.sweep_critical_density(d, m, sides, q_values, seeds, master_seed)


# Default service instance
default_bootstrap_service = BootstrapSweepService()
