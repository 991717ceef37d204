"""Experiment orchestration: replicas, artifacts and manifests."""
import logging
import math
import multiprocessing
import time
from pathlib import Path
from typing import Callable, List, Optional, Sequence, Tuple, TypeVar

from tqdm import tqdm

from latgame import __version__
from latgame.config import settings
from latgame.core.lattice_rules import random_field
from latgame.core.meanfield import classify_regime, long_time_limit, meanfield_series
from latgame.core.reductions import (
    corner_fill_certificate,
    hypercubic_view,
    phi_closure_depth,
    sparse_reduce,
)
from latgame.core.seeding import derive_seed
from latgame.exceptions import InvalidInputError, UnsupportedError
from latgame.models.experiment import ExperimentConfig, ExperimentMode, RunManifest
from latgame.models.field import StrategyField
from latgame.models.reports import RunReport
from latgame.models.verify import Figure1Outcome, Figure1Run, VerifyReport
from latgame.services.artifact_writer import (
    read_checkpoint,
    record_artifact,
    write_aggregate_csv,
    write_checkpoint,
    write_density_csv,
    write_lines,
    write_manifest,
    write_snapshot,
)
from latgame.services.bootstrap_service import BootstrapSweepService
from latgame.services.config_parser import resolve_params
from latgame.services.dynamics_service import run_replica
from latgame.services.verify_service import VerifyService


logger = logging.getLogger(__name__)

T = TypeVar("T")

FIGURE1_SNAPSHOT_TIMES = (0.0, 5.0, 25.0)


def _grid(every: float, t_max: float) -> Tuple[float, ...]:
    return tuple(k * every for k in range(int(math.floor(t_max / every)) + 1))


def _simulate_replica(args) -> RunReport:
    """Worker entry point; module level so worker processes can import it."""
    field, params, t_max, seed, scheme, record_every, snapshot_times = args
    return run_replica(field, params, t_max, seed, scheme, record_every, snapshot_times)


def classify_outcome(report: RunReport) -> Figure1Outcome:
    """all-1 / all-2 by final density, absorbed-mixed when frozen with both present, else undecided."""
    if report.final.is_full:
        return Figure1Outcome.ALL_1
    if report.final.is_empty:
        return Figure1Outcome.ALL_2
    if report.absorbed and report.final.is_mixed:
        return Figure1Outcome.ABSORBED_MIXED
    return Figure1Outcome.UNDECIDED


def growing_at_horizon(report: RunReport) -> bool:
    """True when the density rose over the last recorded interval of an unabsorbed run."""
    series = report.series
    return not report.absorbed and len(series) >= 2 and series[-1].density1 > series[-2].density1


def _fmt(value: float) -> str:
    return repr(float(value))


class ExperimentRunner:
    """Dispatches experiment configs and writes their artifacts."""

    def __init__(self, workers: Optional[int] = None, show_progress: Optional[bool] = None):
        """Initialize the runner.

        Args:
            workers: Replica processes. If None, use the config's workers key.
            show_progress: Show tqdm progress bars. If None, use settings.
        """
        self.workers = workers
        self.show_progress = settings.SHOW_PROGRESS if show_progress is None else show_progress

    def _map(self, func: Callable[..., T], tasks: Sequence, workers: int, desc: str) -> List[T]:
        """Apply func to tasks; results are in task order whatever the worker count."""
        results: List[T] = []
        with tqdm(total=len(tasks), desc=desc, disable=not self.show_progress) as progress:
            if workers > 1 and len(tasks) > 1:
                with multiprocessing.Pool(min(workers, len(tasks))) as pool:
                    for result in pool.imap(func, tasks):
                        results.append(result)
                        progress.update(1)
            else:
                for task in tasks:
                    results.append(func(task))
                    progress.update(1)
        return results

    def run_experiment(self, config: ExperimentConfig, output_dir: Optional[str] = None) -> RunManifest:
        """Run a config and write artifacts plus manifest.txt into the output directory.

        Args:
            config: Validated experiment config.
            output_dir: Overrides config.output_dir; defaults to OUTPUT_DIR/<mode>.

        Returns:
            RunManifest listing every artifact with its sha256.
        """
        out = Path(output_dir or config.output_dir or Path(settings.OUTPUT_DIR) / config.mode.value)
        out.mkdir(parents=True, exist_ok=True)
        workers = self.workers or config.workers
        manifest = RunManifest(engine_version=__version__, config=config.echo(), output_dir=str(out))
        started = time.perf_counter()
        logger.info("Running %s experiment into %s", config.mode.value, out)

        handlers = {
            ExperimentMode.SIMULATE: self._simulate,
            ExperimentMode.MEANFIELD: self._meanfield,
            ExperimentMode.BOOTSTRAP: self._bootstrap,
            ExperimentMode.REDUCE: self._reduce,
            ExperimentMode.VERIFY: self._verify,
            ExperimentMode.FIGURE1: self._figure1,
        }
        handlers[config.mode](config, out, manifest, workers)

        manifest.wall_clock_seconds = time.perf_counter() - started
        write_manifest(manifest, out)
        logger.info("Finished %s in %.2fs", config.mode.value, manifest.wall_clock_seconds)
        return manifest

    def _initial_field(self, config: ExperimentConfig, seed: int) -> StrategyField:
        if config.resume_from:
            field = read_checkpoint(config.resume_from)
            if field.geometry != config.geometry:
                raise InvalidInputError(
                    f"checkpoint sides {field.geometry.sides} differ from config sides {config.geometry.sides}"
                )
            return field
        return random_field(config.geometry, config.p, seed)

    def _simulate(self, config: ExperimentConfig, out: Path, manifest: RunManifest, workers: int) -> None:
        params = resolve_params(config)
        seeds = [derive_seed(config.master_seed, i) for i in range(config.seeds)]
        manifest.replica_seeds = seeds
        snapshot_times = _grid(config.snapshot_every, config.t_max) if config.snapshot_every else ()
        if snapshot_times and config.geometry.d != 2:
            logger.warning("Snapshots are written for d = 2 only; skipping them for d = %d", config.geometry.d)
            snapshot_times = ()
        tasks = [
            (self._initial_field(config, seed), params, config.t_max, seed, config.scheme, config.record_every, snapshot_times)
            for seed in seeds
        ]
        reports = self.simulate_replicas(tasks, workers)

        for i, report in enumerate(reports):
            record_artifact(manifest, out, write_density_csv(report, out / f"series_{i:04d}.csv"))
            record_artifact(manifest, out, write_checkpoint(report.final, out / f"final_{i:04d}.rle"))
            for snapshot in report.snapshots:
                path = write_snapshot(snapshot.field, out / f"snapshot_{i:04d}_t{snapshot.t:g}.pgm")
                record_artifact(manifest, out, path)
            manifest.results[f"{i}.absorbed"] = str(report.absorbed).lower()
            if report.absorbed:
                manifest.results[f"{i}.absorption_time"] = _fmt(report.absorption_time)
            manifest.results[f"{i}.final_density1"] = _fmt(report.final.density)
            manifest.results[f"{i}.events"] = str(report.events_processed)
        record_artifact(manifest, out, write_aggregate_csv(reports, out / "aggregate.csv"))

    def simulate_replicas(self, tasks: Sequence, workers: int) -> List[RunReport]:
        return self._map(_simulate_replica, tasks, workers, "replicas")

    def _meanfield(self, config: ExperimentConfig, out: Path, manifest: RunManifest, workers: int) -> None:
        params = resolve_params(config)
        points = meanfield_series(config.u0, params, config.t_max, config.dt, config.record_every)
        lines = ["t,exact,numeric,drift"]
        lines += [f"{_fmt(pt.t)},{_fmt(pt.exact)},{_fmt(pt.numeric)},{_fmt(pt.drift)}" for pt in points]
        record_artifact(manifest, out, write_lines(out / "meanfield.csv", lines))
        try:
            regime = classify_regime(params)
        except UnsupportedError as e:
            manifest.results["regime"] = f"unsupported ({e})"
            return
        manifest.results["regime"] = regime.kind.value
        if regime.threshold is not None:
            manifest.results["threshold"] = _fmt(regime.threshold)
        manifest.results["long_time_limit"] = _fmt(long_time_limit(config.u0, params))
        manifest.results["max_deviation"] = _fmt(max(abs(pt.exact - pt.numeric) for pt in points))

    def _bootstrap(self, config: ExperimentConfig, out: Path, manifest: RunManifest, workers: int) -> None:
        service = BootstrapSweepService(workers=workers, show_progress=self.show_progress)
        result = service.sweep_critical_density(
            config.d, config.m, config.bootstrap_sides, config.q_values, config.seeds, config.master_seed
        )
        lines = ["L,q,fraction_full,full_count,seeds"]
        lines += [f"{c.L},{_fmt(c.q)},{_fmt(c.fraction_full)},{c.full_count},{c.seeds}" for c in result.cells]
        record_artifact(manifest, out, write_lines(out / "sweep.csv", lines))
        # Finite tori only show a trend toward the infinite-lattice statement
        manifest.results["finite_size_trend"] = "true"

    def _reduce(self, config: ExperimentConfig, out: Path, manifest: RunManifest, workers: int) -> None:
        params = resolve_params(config)
        geometry = config.geometry
        seeds = [derive_seed(config.master_seed, i) for i in range(config.seeds)]
        manifest.replica_seeds = seeds
        lines = ["seed,density1,sparse_density1,coarse_occupied,closure_density1,closure_depth"]
        for i, seed in enumerate(seeds):
            field = random_field(geometry, config.p, seed)
            sparse = sparse_reduce(field)
            view = hypercubic_view(field)
            closure_density, depth = "", ""
            if params.monotone:
                closure, steps = phi_closure_depth(sparse, params)
                closure_density, depth = _fmt(closure.density), str(steps)
                if geometry.d == 2:
                    record_artifact(manifest, out, write_snapshot(closure, out / f"closure_{i:04d}.pgm"))
            if geometry.d == 2:
                record_artifact(manifest, out, write_snapshot(field, out / f"initial_{i:04d}.pgm"))
                record_artifact(manifest, out, write_snapshot(sparse, out / f"sparse_{i:04d}.pgm"))
            lines.append(
                f"{seed},{_fmt(field.density)},{_fmt(sparse.density)},{view.count},{closure_density},{depth}"
            )
        record_artifact(manifest, out, write_lines(out / "reduce.csv", lines))
        if params.monotone:
            for d in (1, 2, 3):
                certificate = corner_fill_certificate(d, params)
                manifest.results[f"corner.d{d}"] = "pass" if certificate.passed else "fail"

    def _verify(self, config: ExperimentConfig, out: Path, manifest: RunManifest, workers: int) -> None:
        report = self.verify(config, workers)
        manifest.replica_seeds = [derive_seed(config.master_seed, i) for i in range(config.seeds)]
        lines = ["item,status,violations,checks,reason"]
        for item in report.items:
            status = "skipped" if item.skipped else ("pass" if item.passed else "fail")
            lines.append(f"{item.key},{status},{item.violations},{item.checks},{item.reason or ''}")
            for key, value in item.details.items():
                manifest.results[f"{item.key}.{key}"] = value
        record_artifact(manifest, out, write_lines(out / "verify.csv", lines))
        manifest.passed = report.passed

    def verify(self, config: ExperimentConfig, workers: Optional[int] = None) -> VerifyReport:
        service = VerifyService(workers=workers or config.workers, show_progress=self.show_progress)
        return service.verify_suite(config)

    def _figure1(self, config: ExperimentConfig, out: Path, manifest: RunManifest, workers: int) -> None:
        runs, reports = self.figure1(config, workers)
        manifest.replica_seeds = [run.seed for run in runs]
        lines = ["p,seed_index,seed,outcome,density_start,density_t25,density_end,end_time,growing"]
        for run, report in zip(runs, reports):
            t25 = "" if run.density_t25 is None else _fmt(run.density_t25)
            lines.append(
                f"{_fmt(run.p)},{run.seed_index},{run.seed},{run.outcome.value},{_fmt(run.density_start)},"
                f"{t25},{_fmt(run.density_end)},{_fmt(run.end_time)},{str(run.growing_at_horizon).lower()}"
            )
            tag = f"p{run.p:g}_seed{run.seed_index:04d}"
            for snapshot in report.snapshots:
                path = write_snapshot(snapshot.field, out / f"fig1_{tag}_t{snapshot.t:g}.pgm")
                record_artifact(manifest, out, path)
            path = write_snapshot(report.final, out / f"fig1_{tag}_final.pgm")
            record_artifact(manifest, out, path)
        record_artifact(manifest, out, write_lines(out / "figure1_summary.csv", lines))
        for p in config.figure1_densities:
            for outcome in Figure1Outcome:
                count = sum(1 for run in runs if run.p == p and run.outcome == outcome)
                manifest.results[f"p{p:g}.{outcome.value}"] = str(count)

    def figure1(self, config: ExperimentConfig, workers: Optional[int] = None) -> Tuple[List[Figure1Run], List[RunReport]]:
        """Runs at each density with snapshots at t = 0, 5, 25 and the final state.

        Returns:
            Summary rows and the run reports, ordered by density then seed index.
        """
        if config.geometry.d != 2:
            raise InvalidInputError("figure1 runs on a two-dimensional torus")
        params = resolve_params(config)
        keys: List[Tuple[float, int, int]] = []
        tasks = []
        for k, p in enumerate(config.figure1_densities):
            for i in range(config.seeds):
                seed = derive_seed(config.master_seed, k, i)
                keys.append((p, i, seed))
                snapshot_times = tuple(t for t in FIGURE1_SNAPSHOT_TIMES if t <= config.t_max)
                tasks.append(
                    (random_field(config.geometry, p, seed), params, config.t_max, seed, config.scheme, config.record_every, snapshot_times)
                )
        reports = self._map(_simulate_replica, tasks, workers or config.workers, "figure1")

        runs = []
        for (p, i, seed), report in zip(keys, reports):
            at25 = report.snapshot_at(25.0)
            runs.append(
                Figure1Run(
                    p=p,
                    seed_index=i,
                    seed=seed,
                    outcome=classify_outcome(report),
                    density_start=report.series[0].density1,
                    density_t25=None if at25 is None else at25.density,
                    density_end=report.final.density,
                    end_time=report.end_time,
                    growing_at_horizon=growing_at_horizon(report),
                )
            )
        return runs, reports


# Default runner instance
default_experiment_runner = ExperimentRunner()
