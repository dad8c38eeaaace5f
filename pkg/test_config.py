"""
Tests for environment settings
"""

import pytest

from config import Settings, get_settings
from errors import ConfigError

ENV_NAMES = [
    "ELASTICA_THREADS", "ELASTICA_GRID", "ELASTICA_QUAD_NODES", "ELASTICA_TOL",
    "ELASTICA_MAX_ITER", "ELASTICA_CACHE", "LOG_LEVEL",
]


@pytest.fixture
def clean_env(monkeypatch):
    for name in ENV_NAMES:
        monkeypatch.delenv(name, raising=False)
    return monkeypatch


def test_defaults(clean_env):
    s = Settings.from_env()
    assert s.grid == 8192
    assert s.quadrature_nodes == 2048
    assert s.tolerance == 1e-10
    assert s.cache_path is None
    assert s.log_level == "INFO"


def test_reads_environment(clean_env):
    clean_env.setenv("ELASTICA_THREADS", "3")
    clean_env.setenv("ELASTICA_GRID", "1024")
    clean_env.setenv("ELASTICA_TOL", "1e-9")
    clean_env.setenv("ELASTICA_CACHE", "seeds.json")
    clean_env.setenv("LOG_LEVEL", "debug")
    s = Settings.from_env()
    assert (s.threads, s.grid, s.tolerance) == (3, 1024, 1e-9)
    assert s.cache_path == "seeds.json"
    assert s.log_level == "DEBUG"


def test_blank_values_fall_back(clean_env):
    clean_env.setenv("ELASTICA_GRID", " ")
    assert Settings.from_env().grid == 8192


@pytest.mark.parametrize("name, value", [
    ("ELASTICA_THREADS", "many"),
    ("ELASTICA_THREADS", "0"),
    ("ELASTICA_GRID", "32"),
    ("ELASTICA_QUAD_NODES", "512"),
    ("ELASTICA_TOL", "-1e-8"),
    ("ELASTICA_TOL", "tight"),
])
def test_rejects_bad_values(clean_env, name, value):
    clean_env.setenv(name, value)
    with pytest.raises(ConfigError, match=name):
        Settings.from_env()


def test_get_settings_is_cached():
    assert get_settings() is get_settings()
