"""Shared fixtures and test configuration."""
import os

import pytest
from hypothesis import HealthCheck, settings as hypothesis_settings

from latgame.config import settings
from latgame.models.field import StrategyField
from latgame.models.lattice import GameParams, LatticeGeometry


hypothesis_settings.register_profile("fast", max_examples=25, deadline=None)
hypothesis_settings.register_profile(
    "ci", max_examples=200, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
hypothesis_settings.load_profile(os.getenv("HYPOTHESIS_PROFILE", "fast"))


def pytest_addoption(parser):
    parser.addoption(
        "--runslow", action="store_true", default=False, help="run minutes-scale reproduction tests"
    )


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture(autouse=True)
def isolated_settings(monkeypatch, tmp_path):
    """Keep logs and outputs inside the test's tmp dir and ignore a developer's seed override."""
    monkeypatch.delenv(settings.SEED_ENV_VAR, raising=False)
    monkeypatch.setattr(settings, "LOGS_DIR", str(tmp_path / "logs"))
    monkeypatch.setattr(settings, "DATA_DIR", str(tmp_path / "data"))
    monkeypatch.setattr(settings, "OUTPUT_DIR", str(tmp_path / "runs"))
    monkeypatch.setattr(settings, "SHOW_PROGRESS", False)


@pytest.fixture
def fig_params():
    """Parameters of the two-dimensional growth figure: a1 = 1.01 > a2 = 1."""
    return GameParams(a1=1.01, a2=1.0)


@pytest.fixture
def torus8():
    return LatticeGeometry.cubic(2, 8)


def block_field(geometry, corners, size=2):
    """Field whose strategy-1 set is the union of size^d blocks at the given corners."""
    sites = []
    for corner in corners:
        grid = [()]
        for c in corner:
            grid = [g + (c + k,) for g in grid for k in range(size)]
        sites.extend(grid)
    return StrategyField.from_sites(geometry, sites)
