"""Shared fixtures: one solver per session so continuation seeds carry over"""

import pytest

from config import Settings
from shooting import ShapeSolver
from warm_start import WarmStartCache


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: long continuation runs (deselect with -m 'not slow')")


@pytest.fixture(scope="session")
def solver():
    return ShapeSolver(Settings(grid=4096, threads=2), WarmStartCache())


@pytest.fixture(scope="session")
def shape4(solver):
    return solver.solve(4.0)


@pytest.fixture(scope="session")
def shape8(solver):
    return solver.solve(8.0)
