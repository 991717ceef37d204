"""Tests for experiment orchestration and the command line."""
import pytest

from latgame.cli import EXIT_INVALID, EXIT_OK, EXIT_VERIFY_FAILED, main
from latgame.exceptions import InvalidInputError
from latgame.models.reports import RunReport, SeriesSample
from latgame.models.verify import Figure1Outcome
from latgame.services.artifact_writer import read_checkpoint, verify_manifest, write_checkpoint
from latgame.services.config_parser import parse_config
from latgame.services.experiment_service import ExperimentRunner, classify_outcome
from latgame.models.field import StrategyField
from latgame.models.lattice import LatticeGeometry


SIMULATE = """\
mode = simulate
sides = 16,16
a1 = 1.01
a2 = 1
p = {p}
t_max = 20
record_every = 2
seeds = {seeds}
master_seed = 3
"""


def run(text, out, workers=None):
    return ExperimentRunner(workers=workers, show_progress=False).run_experiment(parse_config(text, env={}), str(out))


def artifact_bytes(out, manifest):
    return {name: (out / name).read_bytes() for name in manifest.artifacts}


class TestSimulateMode:
    def test_one_series_per_replica_plus_aggregate(self, tmp_path):
        manifest = run(SIMULATE.format(p=0.3, seeds=20), tmp_path)
        series = sorted(p.name for p in tmp_path.glob("series_*.csv"))
        assert series == [f"series_{i:04d}.csv" for i in range(20)]
        assert (tmp_path / "aggregate.csv").is_file()
        assert len(manifest.replica_seeds) == 20
        assert verify_manifest(tmp_path) == []

    def test_absorbing_run_records_absorption_time(self, tmp_path):
        manifest = run(SIMULATE.format(p=0.0, seeds=1), tmp_path)
        assert manifest.results["0.absorbed"] == "true"
        assert manifest.results["0.absorption_time"] == "0.0"
        text = (tmp_path / "manifest.txt").read_text(encoding="utf-8")
        assert "result.0.absorption_time = 0.0" in text

    def test_reruns_are_byte_identical(self, tmp_path):
        first = run(SIMULATE.format(p=0.3, seeds=4), tmp_path / "a")
        second = run(SIMULATE.format(p=0.3, seeds=4), tmp_path / "b")
        assert first.artifacts == second.artifacts
        assert artifact_bytes(tmp_path / "a", first) == artifact_bytes(tmp_path / "b", second)

    def test_parallel_replicas_match_serial(self, tmp_path):
        serial = run(SIMULATE.format(p=0.3, seeds=4), tmp_path / "serial", workers=1)
        parallel = run(SIMULATE.format(p=0.3, seeds=4), tmp_path / "parallel", workers=2)
        assert serial.artifacts == parallel.artifacts

    def test_snapshots_for_square_lattices(self, tmp_path):
        manifest = run(SIMULATE.format(p=0.3, seeds=1) + "snapshot_every = 10\n", tmp_path)
        assert {"snapshot_0000_t0.pgm", "snapshot_0000_t10.pgm", "snapshot_0000_t20.pgm"} <= set(manifest.artifacts)

    def test_final_checkpoint_matches_run(self, tmp_path):
        run(SIMULATE.format(p=0.3, seeds=1), tmp_path)
        final = read_checkpoint(tmp_path / "final_0000.rle")
        assert final.geometry == LatticeGeometry.cubic(2, 16)

    def test_resume_from_checkpoint(self, tmp_path):
        geometry = LatticeGeometry.cubic(2, 16)
        checkpoint = write_checkpoint(StrategyField.filled(geometry, 1), tmp_path / "start.rle")
        text = SIMULATE.format(p=0.3, seeds=1).replace("p = 0.3\n", f"resume_from = {checkpoint}\n")
        manifest = run(text, tmp_path / "out")
        assert manifest.results["0.final_density1"] == "1.0"

    def test_resume_rejects_other_geometry(self, tmp_path):
        checkpoint = write_checkpoint(StrategyField.empty(LatticeGeometry.cubic(2, 8)), tmp_path / "start.rle")
        text = SIMULATE.format(p=0.3, seeds=1).replace("p = 0.3\n", f"resume_from = {checkpoint}\n")
        with pytest.raises(InvalidInputError):
            run(text, tmp_path / "out")


class TestOtherModes:
    def test_meanfield(self, tmp_path):
        manifest = run("mode = meanfield\na1 = -1\na2 = -3\nu0 = 0.1\nt_max = 5\nrecord_every = 0.5\n", tmp_path)
        lines = (tmp_path / "meanfield.csv").read_text(encoding="utf-8").splitlines()
        assert lines[0] == "t,exact,numeric,drift"
        assert len(lines) == 12
        assert manifest.results["regime"] == "coexistence"
        assert manifest.results["long_time_limit"] == "0.75"
        assert float(manifest.results["max_deviation"]) < 1e-6

    def test_meanfield_neutral_parameters(self, tmp_path):
        manifest = run("mode = meanfield\na1 = 0\na2 = 1\nu0 = 0.1\nt_max = 1\n", tmp_path)
        assert manifest.results["regime"].startswith("unsupported")

    def test_bootstrap(self, tmp_path):
        text = "mode = bootstrap\nd = 2\nm = 2\nq_values = 0, 1\nbootstrap_sides = 8\nseeds = 3\nmaster_seed = 0\n"
        run(text, tmp_path)
        lines = (tmp_path / "sweep.csv").read_text(encoding="utf-8").splitlines()
        assert lines == ["L,q,fraction_full,full_count,seeds", "8,0.0,0.0,0,3", "8,1.0,1.0,3,3"]

    def test_reduce(self, tmp_path):
        text = "mode = reduce\nsides = 16,16\na1 = 1.01\na2 = 1\np = 0.6\nseeds = 2\nmaster_seed = 1\n"
        manifest = run(text, tmp_path)
        assert len((tmp_path / "reduce.csv").read_text(encoding="utf-8").splitlines()) == 3
        assert {"initial_0000.pgm", "sparse_0000.pgm", "closure_0000.pgm"} <= set(manifest.artifacts)
        assert manifest.results["corner.d2"] == "pass"

    def test_verify(self, tmp_path):
        text = "mode = verify\nsides = 16,16\na1 = 1.01\na2 = 1\np = 0.3\nt_max = 50\nseeds = 3\nmaster_seed = 0\n"
        manifest = run(text, tmp_path)
        assert manifest.passed is True
        assert (tmp_path / "verify.csv").read_text(encoding="utf-8").startswith("item,status,violations,checks,reason\n")

    def test_figure1_small(self, tmp_path):
        text = "mode = figure1\nsides = 16,16\na1 = 1.01\na2 = 1\nt_max = 30\nseeds = 2\nmaster_seed = 0\ndensities = 0.15, 1.0\n"
        manifest = run(text, tmp_path)
        assert manifest.results["p1.all-1"] == "2"
        assert "fig1_p1_seed0000_t0.pgm" in manifest.artifacts
        assert "fig1_p0.15_seed0001_final.pgm" in manifest.artifacts

    def test_figure1_classifies_uniform_start(self):
        config = parse_config(
            "mode = figure1\nsides = 8,8\na1 = 1.01\na2 = 1\nt_max = 5\nmaster_seed = 0\ndensities = 1\n", env={}
        )
        runs, reports = ExperimentRunner(show_progress=False).figure1(config)
        assert [run.outcome for run in runs] == [Figure1Outcome.ALL_1]
        assert reports[0].absorption_time == 0.0

    def test_figure1_uses_configured_scheme(self):
        config = parse_config(
            "mode = figure1\nsides = 8,8\na1 = 1.01\na2 = 1\nt_max = 5\nmaster_seed = 0\ndensities = 0.5\nscheme = naive\n",
            env={},
        )
        _, reports = ExperimentRunner(show_progress=False).figure1(config)
        assert [report.scheme for report in reports] == ["naive"]


class TestClassifyOutcome:
    def _report(self, field, absorbed):
        return RunReport(
            final=field,
            absorbed=absorbed,
            absorption_time=1.0 if absorbed else None,
            series=[SeriesSample(t=0.0, density1=field.density, flips=0, active=0)],
            seed=0,
        )

    def test_frozen_mixture(self, torus8):
        field = StrategyField.from_sites(torus8, [(0, 0), (0, 1), (1, 0), (1, 1)])
        assert classify_outcome(self._report(field, True)) == Figure1Outcome.ABSORBED_MIXED
        assert classify_outcome(self._report(field, False)) == Figure1Outcome.UNDECIDED

    @pytest.mark.parametrize("strategy, outcome", [(1, Figure1Outcome.ALL_1), (2, Figure1Outcome.ALL_2)])
    def test_uniform_final_state(self, torus8, strategy, outcome):
        assert classify_outcome(self._report(StrategyField.filled(torus8, strategy), True)) == outcome


class TestCli:
    def _config(self, tmp_path, text):
        path = tmp_path / "run.cfg"
        path.write_text(text, encoding="utf-8")
        return str(path)

    def test_verify_success(self, tmp_path):
        path = self._config(
            tmp_path, "sides = 16,16\na1 = 1.01\na2 = 1\np = 0.2\nt_max = 40\nseeds = 2\nmaster_seed = 0\n"
        )
        assert main(["verify", "--config", path, "--out", str(tmp_path / "out")]) == EXIT_OK
        assert (tmp_path / "out" / "manifest.txt").is_file()

    def test_parse_error_exit_code(self, tmp_path):
        path = self._config(tmp_path, "sides = 5,5\na1 = 1.01\na2 = 1\np = 0.2\nt_max = 40\nmaster_seed = 0\n")
        assert main(["simulate", "--config", path, "--out", str(tmp_path / "out")]) == EXIT_INVALID

    def test_mode_mismatch(self, tmp_path):
        path = self._config(tmp_path, "mode = meanfield\na1 = 1\na2 = 1\nu0 = 0.2\nt_max = 1\n")
        assert main(["simulate", "--config", path]) == EXIT_INVALID

    def test_missing_config_file(self, tmp_path):
        assert main(["simulate", "--config", str(tmp_path / "nope.cfg")]) == EXIT_INVALID

    def test_non_utf8_config(self, tmp_path):
        path = tmp_path / "run.cfg"
        path.write_bytes(b"mode = simulate\n# caf\xe9\n")
        assert main(["simulate", "--config", str(path)]) == EXIT_INVALID

    def test_check_manifest(self, tmp_path):
        out = tmp_path / "out"
        run(SIMULATE.format(p=0.3, seeds=1), out)
        assert main(["check-manifest", str(out)]) == EXIT_OK
        (out / "aggregate.csv").write_text("tampered\n", encoding="utf-8")
        assert main(["check-manifest", str(out)]) == EXIT_VERIFY_FAILED

    def test_settings(self, capsys):
        assert main(["settings"]) == EXIT_OK
        assert "DEFAULT_SCHEME" in capsys.readouterr().out
