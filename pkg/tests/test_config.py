"""Tests for the experiment config parser."""
import pytest

from latgame.exceptions import ArtifactError, ConfigParseError
from latgame.models.experiment import ExperimentMode
from latgame.models.lattice import GameParams
from latgame.services.config_parser import load_config, parse_config, resolve_params


MINIMAL_SIMULATE = """\
# growth figure parameters
mode = simulate
d = 2
sides = 300,300
a1 = 1.01
a2 = 1
p = 0.15
t_max = 100
master_seed = 1
"""


def test_minimal_simulate_config():
    config = parse_config(MINIMAL_SIMULATE, env={})
    assert config.mode == ExperimentMode.SIMULATE
    assert config.sides == (300, 300)
    assert config.geometry.n_sites == 90000
    assert resolve_params(config) == GameParams(a1=1.01, a2=1.0)
    assert config.seeds == 1
    assert config.scheme == "active"


def test_odd_sides_report_their_line():
    text = MINIMAL_SIMULATE.replace("sides = 300,300", "sides = 5,5")
    with pytest.raises(ConfigParseError) as excinfo:
        parse_config(text, env={})
    assert excinfo.value.line == 4
    assert "line 4" in str(excinfo.value)


def test_density_out_of_range():
    text = MINIMAL_SIMULATE.replace("p = 0.15", "p = 1.5")
    with pytest.raises(ConfigParseError) as excinfo:
        parse_config(text, env={})
    assert excinfo.value.line == 7


def test_unknown_key():
    with pytest.raises(ConfigParseError) as excinfo:
        parse_config(MINIMAL_SIMULATE + "colour = black\n", env={})
    assert excinfo.value.line == 10


def test_duplicate_key():
    with pytest.raises(ConfigParseError) as excinfo:
        parse_config(MINIMAL_SIMULATE + "p = 0.2\n", env={})
    assert excinfo.value.line == 10


def test_bad_number():
    text = MINIMAL_SIMULATE.replace("t_max = 100", "t_max = soon")
    with pytest.raises(ConfigParseError) as excinfo:
        parse_config(text, env={})
    assert excinfo.value.line == 8


def test_missing_line_separator():
    with pytest.raises(ConfigParseError) as excinfo:
        parse_config("mode simulate\n", env={})
    assert excinfo.value.line == 1


def test_missing_required_key_has_no_line():
    text = MINIMAL_SIMULATE.replace("t_max = 100\n", "")
    with pytest.raises(ConfigParseError) as excinfo:
        parse_config(text, env={})
    assert excinfo.value.line == 0
    assert "t_max" in str(excinfo.value)


def test_missing_mode():
    with pytest.raises(ConfigParseError):
        parse_config("d = 2\n", env={})


def test_unknown_mode():
    with pytest.raises(ConfigParseError) as excinfo:
        parse_config("mode = plot\n", env={})
    assert excinfo.value.line == 1


def test_dimension_must_match_sides():
    text = MINIMAL_SIMULATE.replace("d = 2", "d = 3")
    with pytest.raises(ConfigParseError):
        parse_config(text, env={})


def test_seed_override_from_environment():
    config = parse_config(MINIMAL_SIMULATE, env={"LATGAME_SEED": "42"})
    assert config.master_seed == 42


def test_bad_seed_override():
    with pytest.raises(ConfigParseError):
        parse_config(MINIMAL_SIMULATE, env={"LATGAME_SEED": "abc"})


def test_payoff_matrix_instead_of_differences():
    text = MINIMAL_SIMULATE.replace("a1 = 1.01\na2 = 1\n", "payoff = 3, 1, 2, 5\n")
    config = parse_config(text, env={})
    assert resolve_params(config) == GameParams(a1=1.0, a2=4.0)


def test_payoff_and_differences_conflict():
    with pytest.raises(ConfigParseError):
        parse_config(MINIMAL_SIMULATE + "payoff = 1, 0, 0, 1\n", env={})


def test_meanfield_needs_no_lattice():
    config = parse_config("mode = meanfield\na1 = -1\na2 = -3\nu0 = 0.1\nt_max = 5\n", env={})
    assert config.sides is None
    assert config.u0 == 0.1


def test_bootstrap_threshold_bounded_by_dimension():
    text = "mode = bootstrap\nd = 2\nm = 5\nq_values = 0.1 0.2\nbootstrap_sides = 16, 32\nmaster_seed = 0\n"
    with pytest.raises(ConfigParseError):
        parse_config(text, env={})


def test_figure1_requires_square_lattice_dimension():
    text = "mode = figure1\nsides = 8,8,8\na1 = 1.01\na2 = 1\nt_max = 10\nmaster_seed = 0\n"
    with pytest.raises(ConfigParseError):
        parse_config(text, env={})


def test_comments_and_blank_lines():
    text = "\n# header\n" + MINIMAL_SIMULATE.replace("p = 0.15", "p = 0.15  # initial density")
    assert parse_config(text, env={}).p == 0.15


def test_echo_renders_config_values():
    echo = parse_config(MINIMAL_SIMULATE, env={}).echo()
    assert echo["mode"] == "simulate"
    assert echo["sides"] == "300,300"
    assert echo["a1"] == "1.01"


def test_load_config(tmp_path):
    path = tmp_path / "run.cfg"
    path.write_text(MINIMAL_SIMULATE, encoding="utf-8")
    assert load_config(path, env={}).t_max == 100.0


def test_load_non_utf8_file(tmp_path):
    path = tmp_path / "latin1.cfg"
    path.write_bytes(MINIMAL_SIMULATE.replace("# growth", "# caf\xe9 growth").encode("latin-1"))
    with pytest.raises(ConfigParseError) as excinfo:
        load_config(path, env={})
    assert "UTF-8" in str(excinfo.value)


def test_load_missing_file(tmp_path):
    with pytest.raises(ArtifactError):
        load_config(tmp_path / "absent.cfg", env={})
