"""
Numerical integration helpers
Adaptive Gauss-Kronrod (7/15) for closed-form integrands and Simpson-type
rules for sampled data on uniform grids.
"""

import heapq
import logging
from typing import Callable, Tuple

import numpy as np
from scipy.integrate import cumulative_simpson as _scipy_cumulative_simpson

from errors import NonConvergenceError

logger = logging.getLogger(__name__)

# Kronrod nodes on [0, 1]; the odd positions carry the Gauss weights
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

# full 15-point rule on [-1, 1]
_NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
_KRONROD = np.concatenate([_WGK[:-1], _WGK[::-1]])
_GAUSS = np.zeros(15)
_GAUSS[1:7:2] = _WG[:3]
_GAUSS[7] = _WG[3]
_GAUSS[9:15:2] = _WG[2::-1]


def gauss_kronrod(f: Callable[[np.ndarray], np.ndarray], a: float, b: float) -> Tuple[float, float]:
    """
    Single G7/K15 panel on [a, b].
    f must accept a numpy array of abscissae. Returns (K15 value, |K15 - G7|).
    """
    half = 0.5 * (b - a)
    center = 0.5 * (a + b)
    values = np.asarray(f(center + half * _NODES), dtype=float)
    kronrod = half * float(np.dot(_KRONROD, values))
    gauss = half * float(np.dot(_GAUSS, values))
    return kronrod, abs(kronrod - gauss)


def integrate(f: Callable[[np.ndarray], np.ndarray], a: float, b: float,
              abs_tol: float = 1e-12, rel_tol: float = 1e-12,
              min_intervals: int = 1, limit: int = 2000) -> float:
    """
    Adaptive integration: the panel with the largest error estimate is split
    until the summed estimate meets max(abs_tol, rel_tol * |I|).
    """
    if a == b:
        return 0.0
    if b < a:
        return -integrate(f, b, a, abs_tol, rel_tol, min_intervals, limit)

    edges = np.linspace(a, b, max(int(min_intervals), 1) + 1)
    heap = []
    total = 0.0
    error = 0.0
    for left, right in zip(edges[:-1], edges[1:]):
        value, err = gauss_kronrod(f, left, right)
        heapq.heappush(heap, (-err, left, right, value))
        total += value
        error += err

    while error > max(abs_tol, rel_tol * abs(total)):
        if len(heap) >= limit:
            raise NonConvergenceError(
                f"adaptive quadrature on [{a}, {b}] stalled at error {error:.3e}",
                residual=error, iterations=len(heap))
        neg_err, left, right, value = heapq.heappop(heap)
        mid = 0.5 * (left + right)
        v1, e1 = gauss_kronrod(f, left, mid)
        v2, e2 = gauss_kronrod(f, mid, right)
        heapq.heappush(heap, (-e1, left, mid, v1))
        heapq.heappush(heap, (-e2, mid, right, v2))
        total += v1 + v2 - value
        error += e1 + e2 + neg_err

    # re-sum to drop the drift of the running updates
    return float(sum(item[3] for item in heap))


def cumulative_simpson(values: np.ndarray, h: float) -> np.ndarray:
    """
    Running integral of uniformly sampled values, starting at 0.
    Even nodes carry composite Simpson, odd nodes a three-point interior rule.
    """
    f = np.asarray(values, dtype=float)
    if f.size < 2:
        return np.zeros_like(f)
    if f.size == 2:
        return np.array([0.0, 0.5 * h * (f[0] + f[1])])
    return _scipy_cumulative_simpson(f, dx=h, initial=0.0)


def periodic_derivative(values: np.ndarray, h: float) -> np.ndarray:
    """Fourth-order centred difference of periodic samples (no repeated endpoint)"""
    f = np.asarray(values, dtype=float)
    return (8.0 * (np.roll(f, -1) - np.roll(f, 1)) - (np.roll(f, -2) - np.roll(f, 2))) / (12.0 * h)


def periodic_trapezoid(values: np.ndarray, h: float) -> float:
    """Trapezoid rule over one period of periodic samples (no repeated endpoint)"""
    return float(h * np.sum(values))
