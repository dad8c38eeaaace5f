"""
Runtime settings read from the environment (.env supported)
"""

import os
import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

from dotenv import load_dotenv

from errors import ConfigError

load_dotenv()

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


def _env_int(name: str, default: int, minimum: int = 1) -> int:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        value = int(raw)
    except ValueError:
        raise ConfigError(f"{name} must be an integer, got {raw!r}")
    if value < minimum:
        raise ConfigError(f"{name} must be >= {minimum}, got {value}")
    return value


def _env_float(name: str, default: float) -> float:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        value = float(raw)
    except ValueError:
        raise ConfigError(f"{name} must be a number, got {raw!r}")
    if not value > 0:
        raise ConfigError(f"{name} must be positive, got {value}")
    return value


@dataclass(frozen=True)
class Settings:
    threads: int = min(os.cpu_count() or 1, 8)
    grid: int = 8192
    quadrature_nodes: int = 2048
    tolerance: float = 1e-10
    max_iterations: int = 200
    cache_path: Optional[str] = None
    log_level: str = "INFO"

    @classmethod
    def from_env(cls) -> "Settings":
        """Build settings from ELASTICA_* variables"""
        defaults = cls()
        return cls(
            threads=_env_int("ELASTICA_THREADS", defaults.threads),
            grid=_env_int("ELASTICA_GRID", defaults.grid, minimum=64),
            quadrature_nodes=_env_int("ELASTICA_QUAD_NODES", defaults.quadrature_nodes,
                                      minimum=2048),
            tolerance=_env_float("ELASTICA_TOL", defaults.tolerance),
            max_iterations=_env_int("ELASTICA_MAX_ITER", defaults.max_iterations),
            cache_path=os.getenv("ELASTICA_CACHE") or None,
            log_level=os.getenv("LOG_LEVEL", defaults.log_level).upper(),
        )


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    return Settings.from_env()


def configure_logging(level: Optional[str] = None):
    """Configure root logging once for CLI and service entry points"""
    level_name = (level or get_settings().log_level).upper()
    logging.basicConfig(level=getattr(logging, level_name, logging.INFO), format=LOG_FORMAT)
