"""
Complete elliptic integrals and Jacobi elliptic functions.

All functions use the parameter convention: m multiplies t^2 in
K(m) = int_0^1 dt / sqrt((1 - t^2)(1 - m t^2)), and cn(u|m) is the elliptic
cosine with that parameter. The modulus k = sqrt(m) never appears in the API.
"""

import math
import logging
from functools import lru_cache
from typing import NamedTuple, Tuple, Union

import numpy as np
from scipy import special

from errors import DomainError

logger = logging.getLogger(__name__)

ArrayLike = Union[float, np.ndarray]

_MAX_AGM_STEPS = 64


class JacobiTriple(NamedTuple):
    sn: ArrayLike
    cn: ArrayLike
    dn: ArrayLike


def _check_parameter(m: float, allow_one: bool) -> float:
    m = float(m)
    if not math.isfinite(m) or m < 0.0 or m > 1.0 or (m == 1.0 and not allow_one):
        upper = "1]" if allow_one else "1)"
        raise DomainError(f"elliptic parameter m={m} outside [0, {upper}")
    return m


@lru_cache(maxsize=4096)
def _landen_sequence(m: float) -> Tuple[Tuple[float, ...], Tuple[float, ...]]:
    """AGM sequences (a_n, c_n) started from a_0 = 1, b_0 = sqrt(1 - m), c_0 = sqrt(m)"""
    a = [1.0]
    c = [math.sqrt(m)]
    b = math.sqrt(1.0 - m)
    for _ in range(_MAX_AGM_STEPS):
        if abs(c[-1]) <= 1e-17 * a[-1]:
            break
        a_prev = a[-1]
        a.append(0.5 * (a_prev + b))
        c.append(0.5 * (a_prev - b))
        b = math.sqrt(a_prev * b)
    return tuple(a), tuple(c)


def complete_elliptic_K(m: float) -> float:
    """K(m) for 0 <= m < 1 by the arithmetic-geometric mean"""
    m = _check_parameter(m, allow_one=False)
    a, _ = _landen_sequence(m)
    return math.pi / (2.0 * a[-1])


def complete_elliptic_E(m: float) -> float:
    """
    Complete integral of the second kind, 0 <= m <= 1.
    E(m) = K(m) * (1 - sum_n 2^(n-1) c_n^2) with the AGM sequence of K.
    """
    m = _check_parameter(m, allow_one=True)
    if m == 1.0:
        return 1.0
    a, c = _landen_sequence(m)
    correction = sum(2.0 ** (n - 1) * cn * cn for n, cn in enumerate(c))
    return math.pi / (2.0 * a[-1]) * (1.0 - correction)


def jacobi_elliptic(u: ArrayLike, m: float) -> JacobiTriple:
    """
    (sn, cn, dn)(u|m) by descending Landen transformation.
    Accepts scalars or numpy arrays for u; the return type follows the input.
    """
    m = _check_parameter(m, allow_one=True)
    scalar = np.ndim(u) == 0
    if scalar and 0.0 < m < 1.0:
        return _jacobi_scalar(float(u), m)
    x = np.asarray(u, dtype=float)
    if not np.all(np.isfinite(x)):
        raise DomainError("jacobi_elliptic needs a finite argument")

    if m == 0.0:
        sn, cn, dn = np.sin(x), np.cos(x), np.ones_like(x)
    elif m == 1.0:
        sn, cn = np.tanh(x), 1.0 / np.cosh(x)
        dn = cn.copy()
    else:
        a, c = _landen_sequence(m)
        n_steps = len(a) - 1
        phi = (2.0 ** n_steps) * a[-1] * x
        for n in range(n_steps, 0, -1):
            phi = 0.5 * (phi + np.arcsin(c[n] / a[n] * np.sin(phi)))
        sn, cn = np.sin(phi), np.cos(phi)
        dn = np.sqrt(1.0 - m * sn * sn)

    if scalar:
        return JacobiTriple(float(sn), float(cn), float(dn))
    return JacobiTriple(sn, cn, dn)


def incomplete_elliptic_F(phi: float, m: float) -> float:
    """F(phi|m), used only to seed root searches on cn"""
    m = _check_parameter(m, allow_one=False)
    return float(special.ellipkinc(phi, m))


def _jacobi_scalar(u: float, m: float) -> JacobiTriple:
    # same recursion on plain floats; the solvers call this in tight loops
    if not math.isfinite(u):
        raise DomainError("jacobi_elliptic needs a finite argument")
    a, c = _landen_sequence(m)
    n_steps = len(a) - 1
    phi = (2.0 ** n_steps) * a[-1] * u
    for n in range(n_steps, 0, -1):
        phi = 0.5 * (phi + math.asin(c[n] / a[n] * math.sin(phi)))
    sn, cn = math.sin(phi), math.cos(phi)
    return JacobiTriple(sn, cn, math.sqrt(1.0 - m * sn * sn))


def rho_constant() -> float:
    """rho = 2 sqrt(2 pi) [2 E(1/2) - K(1/2)], the large-penalty energy scale"""
    return 2.0 * math.sqrt(2.0 * math.pi) * (2.0 * complete_elliptic_E(0.5) - complete_elliptic_K(0.5))
