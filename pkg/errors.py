"""
Exception hierarchy for the elastica optimizer.
Each error also derives from the builtin the callers already expect.
"""

from typing import Optional, Tuple


class ElasticaError(Exception):
    """Base class for every error raised by this package"""


class ConfigError(ElasticaError, ValueError):
    """An environment variable could not be parsed"""


class DomainError(ElasticaError, ValueError):
    """Special-function argument outside its domain"""


class NotStrictlyConvexError(ElasticaError, ValueError):
    """Radius of curvature is not positive on the quadrature grid"""


class SolvabilityError(ElasticaError, ValueError):
    """h'' + h = phi has no periodic solution (resonant first harmonic)"""


class ConstraintViolationError(ElasticaError, ValueError):
    """Tangent-angle samples violate monotonicity, turning or closure"""


class InconsistentParametersError(ElasticaError, ValueError):
    """(mu, lambda, k_M) do not define an oscillating curvature"""


class ModeMismatchError(ElasticaError, ValueError):
    """Segments were requested but the curvature never vanishes"""


class BracketError(ElasticaError, ValueError):
    """Bisection bracket does not straddle the transition"""


class AssemblyError(ElasticaError, RuntimeError):
    """The assembled boundary does not close"""


class NonConvergenceError(ElasticaError, RuntimeError):
    """Iterative solver stopped before reaching its tolerance"""

    def __init__(self, message: str, best: Optional[Tuple[float, float]] = None,
                 residual: float = float("nan"), iterations: int = 0,
                 mode: Optional[str] = None):
        super().__init__(message)
        self.best = best
        self.residual = residual
        self.iterations = iterations
        self.mode = mode

    def to_dict(self) -> dict:
        return {
            "error": str(self),
            "best": list(self.best) if self.best is not None else None,
            "residual": self.residual,
            "iterations": self.iterations,
            "mode": self.mode,
        }
