# tests/conftest.py

from importlib import resources
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from gkatcheck.core.config import Config, set_config

# automaton construction time varies a lot with the drawn expression;
# the per-test config fixture is read-only inside property tests
settings.register_profile(
    "gkatcheck",
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.function_scoped_fixture],
)
settings.load_profile("gkatcheck")


@pytest.fixture(autouse=True)
def isolated_config(tmp_path, monkeypatch):
    """Every test runs against built-in defaults, never the user's config file."""
    path = tmp_path / "config.json"
    monkeypatch.setenv("GKATCHECK_CONFIG", str(path))
    config = Config(str(path))
    set_config(config)
    yield config
    set_config(None)


@pytest.fixture
def programs_dir() -> Path:
    return Path(str(resources.files("gkatcheck").joinpath("resources", "programs")))


@pytest.fixture
def fixtures_dir() -> Path:
    return Path(str(resources.files("gkatcheck").joinpath("resources", "fixtures")))
