"""
Closed-form curvature of the elastica with area penalty.

On strictly convex arcs an optimal boundary satisfies
    k'' = -k^3/2 - lambda k + mu,
with first integral (k')^2 = Q(k) = -k^4/4 - lambda k^2 + 2 mu k + C, k'(0) = 0, k(0) = k_M.
Its solution is a Moebius transform of the Jacobi elliptic cosine:
    k(s) = (alpha cn(omega s|m) + beta) / (gamma cn(omega s|m) + 1).
"""

import math
import logging
from dataclasses import dataclass, asdict
from typing import Optional, Tuple, Union

import numpy as np
from scipy.optimize import brentq

from errors import InconsistentParametersError
from quadrature import integrate
from special_functions import (
    complete_elliptic_K,
    incomplete_elliptic_F,
    jacobi_elliptic,
)

logger = logging.getLogger(__name__)

ArrayLike = Union[float, np.ndarray]

DEGENERACY_GAP = 1e-9
EQUILIBRIUM_TOL = 1e-8


@dataclass(frozen=True)
class ElasticaParams:
    """All constants of one elastica; `lam` is the perimeter multiplier lambda"""
    mu: float
    lam: float
    k_M: float
    C: float
    k_m: float
    sigma: float
    delta: float
    gamma: float
    alpha: float
    beta: float
    omega: float
    m: float
    R0_sq: float
    q: int = 1
    degenerate: bool = False

    @property
    def R0(self) -> float:
        """Real radius when R0^2 >= 0; the disk below mu = 2 only has a formal R0^2 < 0"""
        return math.sqrt(max(self.R0_sq, 0.0))

    @property
    def half_period(self) -> float:
        """Arclength from k_M down to k_m"""
        if self.omega <= 0.0:
            return math.inf
        return 2.0 * complete_elliptic_K(self.m) / self.omega

    @property
    def period(self) -> float:
        return 2.0 * self.half_period

    def to_dict(self) -> dict:
        record = asdict(self)
        record["lambda"] = record.pop("lam")
        record["R0"] = self.R0
        return record


def first_integral_polynomial(mu: float, lam: float, C: float, z: ArrayLike) -> ArrayLike:
    """Q(z) = -z^4/4 - lambda z^2 + 2 mu z + C in Horner form"""
    return ((-0.25 * z * z - lam) * z + 2.0 * mu) * z + C


def _deflated_cubic(mu: float, lam: float, k_M: float):
    # Q(z) = (z - k_M) R(z); R is strictly decreasing when lam >= 0
    def R(z: float) -> float:
        return -0.25 * (((z + k_M) * z + k_M * k_M) * z + k_M ** 3) - lam * (z + k_M) + 2.0 * mu
    return R


def _degenerate_params(mu: float, lam: float, k_M: float, C: float, q: int) -> ElasticaParams:
    # linearisation frequency about the constant solution, m = 0
    omega_sq = 0.5 * (3.0 * k_M * k_M + 2.0 * lam)
    return ElasticaParams(
        mu=mu, lam=lam, k_M=k_M, C=C, k_m=k_M,
        sigma=k_M, delta=0.0, gamma=0.0, alpha=0.0, beta=k_M,
        omega=math.sqrt(max(omega_sq, 0.0)), m=0.0,
        R0_sq=(lam * lam + C) / mu ** 2,
        q=q, degenerate=True,
    )


def build_params(mu: float, lam: float, k_M: float, q: int = 1) -> ElasticaParams:
    """
    Derive every constant of the closed form from (mu, lambda, k_M).

    The second real root k_m of Q is the unique root of the deflated cubic
    below k_M. When the two roots merge the constant-curvature branch is
    returned; it must satisfy the equilibrium -k^3/2 - lambda k + mu = 0.
    """
    if not (math.isfinite(mu) and mu > 0.0):
        raise InconsistentParametersError(f"mu must be positive, got {mu}")
    if not (math.isfinite(k_M) and k_M > 0.0):
        raise InconsistentParametersError(f"k_M must be positive, got {k_M}")
    if not math.isfinite(lam):
        raise InconsistentParametersError(f"lambda must be finite, got {lam}")
    if q < 1:
        raise InconsistentParametersError(f"q must be a positive integer, got {q}")

    C = 0.25 * k_M ** 4 + lam * k_M ** 2 - 2.0 * mu * k_M
    equilibrium = -0.5 * k_M ** 3 - lam * k_M + mu
    eq_tol = EQUILIBRIUM_TOL * max(1.0, mu)

    if lam < 0.0:
        if abs(equilibrium) <= eq_tol:
            return _degenerate_params(mu, lam, k_M, C, q)
        raise InconsistentParametersError(
            f"lambda={lam} < 0 is only accepted on the constant-curvature branch")

    R = _deflated_cubic(mu, lam, k_M)
    slope = R(k_M)
    if slope > eq_tol:
        raise InconsistentParametersError(
            f"k_M={k_M} is not a maximum of the curvature for mu={mu}, lambda={lam}")
    if slope >= -eq_tol and abs(equilibrium) <= eq_tol:
        return _degenerate_params(mu, lam, k_M, C, q)

    lo = k_M - 1.0
    while R(lo) <= 0.0:
        lo = k_M - 2.0 * (k_M - lo)
        if lo < -1e12:
            raise InconsistentParametersError("second root of Q could not be bracketed")
    k_m = brentq(R, lo, k_M, xtol=1e-15, rtol=4.0 * np.finfo(float).eps, maxiter=200)

    if k_M - k_m <= DEGENERACY_GAP:
        if abs(equilibrium) > eq_tol:
            raise InconsistentParametersError(
                f"double root at k_M={k_M} violates the equilibrium identity by {equilibrium:.3e}")
        return _degenerate_params(mu, lam, k_M, C, q)

    sigma = 0.5 * (k_M + k_m)
    delta = 0.5 * (k_M - k_m)
    if sigma <= 0.0:
        raise InconsistentParametersError(f"k_M + k_m = {2 * sigma} must be positive")

    b = (3.0 * sigma ** 2 + delta ** 2 + 2.0 * lam) / (sigma * delta)
    disc = math.sqrt(max(b * b - 4.0, 0.0))
    gamma = -2.0 / (b + disc)
    alpha = gamma * sigma + delta
    beta = gamma * delta + sigma
    omega_sq = sigma * delta * (gamma ** 2 - 1.0) / (2.0 * gamma)
    m = (gamma ** 2 + delta * gamma / (2.0 * sigma)) / (gamma ** 2 - 1.0)
    if -1e-15 < m < 0.0:
        m = 0.0
    if not (omega_sq > 0.0 and 0.0 <= m < 1.0):
        raise InconsistentParametersError(
            f"no oscillating solution: omega^2={omega_sq:.6g}, m={m:.6g}")

    return ElasticaParams(
        mu=mu, lam=lam, k_M=k_M, C=C, k_m=k_m,
        sigma=sigma, delta=delta, gamma=gamma, alpha=alpha, beta=beta,
        omega=math.sqrt(omega_sq), m=m,
        R0_sq=(lam * lam + C) / mu ** 2,
        q=q, degenerate=False,
    )


def _phase(p: ElasticaParams, s: ArrayLike) -> ArrayLike:
    return p.omega * (np.asarray(s, dtype=float) if np.ndim(s) else float(s))


def curvature_at(p: ElasticaParams, s: ArrayLike) -> ArrayLike:
    if p.degenerate:
        return p.k_M if np.ndim(s) == 0 else np.full(np.shape(s), p.k_M)
    cn = jacobi_elliptic(_phase(p, s), p.m).cn
    return (p.alpha * cn + p.beta) / (p.gamma * cn + 1.0)


def curvature_derivative(p: ElasticaParams, s: ArrayLike) -> ArrayLike:
    """k'(s) from cn' = -sn dn"""
    if p.degenerate:
        return 0.0 if np.ndim(s) == 0 else np.zeros(np.shape(s))
    sn, cn, dn = jacobi_elliptic(_phase(p, s), p.m)
    denom = p.gamma * cn + 1.0
    return -p.delta * (1.0 - p.gamma ** 2) * p.omega * sn * dn / (denom * denom)


def first_integral_residual(p: ElasticaParams, s: ArrayLike) -> ArrayLike:
    """(k')^2 - Q(k); zero by convention on the constant branch"""
    if p.degenerate:
        return 0.0 if np.ndim(s) == 0 else np.zeros(np.shape(s))
    k = curvature_at(p, s)
    dk = curvature_derivative(p, s)
    return dk * dk - first_integral_polynomial(p.mu, p.lam, p.C, k)


def _panels(p: ElasticaParams, s: float) -> int:
    if p.degenerate:
        return 1
    return max(1, int(math.ceil(4.0 * s / p.half_period)))


def theta_integral(p: ElasticaParams, s: float) -> float:
    """Tangent angle gained on [0, s]"""
    if s < 0.0:
        raise ValueError(f"theta_integral needs s >= 0, got {s}")
    if p.degenerate:
        return p.k_M * s
    return integrate(lambda u: curvature_at(p, u), 0.0, s,
                     abs_tol=1e-12, rel_tol=1e-13, min_intervals=_panels(p, s))


def curvature_moment(p: ElasticaParams, s: float, power: int) -> float:
    """integral of k^power over [0, s]"""
    if p.degenerate:
        return p.k_M ** power * s
    return integrate(lambda u: curvature_at(p, u) ** power, 0.0, s,
                     abs_tol=1e-12, rel_tol=1e-13, min_intervals=_panels(p, s))


def first_zero(p: ElasticaParams, s_max: float) -> Optional[float]:
    """
    Smallest s1 in (0, s_max] with k(s1) = 0, or None.

    k decreases strictly on the first half period, so a zero exists exactly
    when k_m < 0. The incomplete integral inverts cn for a starting bracket
    which is then tightened by Brent's method.
    """
    if p.degenerate or p.k_m >= 0.0:
        return None

    half = p.half_period
    target = min(max(-p.beta / p.alpha, -1.0), 1.0)
    guess = incomplete_elliptic_F(math.acos(target), p.m) / p.omega

    def k(u: float) -> float:
        return curvature_at(p, u)

    width = 1e-6 * max(half, 1e-12)
    lo, hi = max(guess - width, 0.0), min(guess + width, half)
    if not (k(lo) > 0.0 and k(hi) < 0.0):
        lo, hi = 0.0, half
    s1 = brentq(k, lo, hi, xtol=1e-15, rtol=4.0 * np.finfo(float).eps, maxiter=200)
    if s1 > s_max:
        return None
    return s1


def integrate_curvature_ode(p: ElasticaParams, s_end: float, steps: int = 4000
                            ) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Fixed-step RK4 on k'' = -k^3/2 - lambda k + mu from k(0) = k_M, k'(0) = 0.
    Slow reference path; the closed form is what the solver uses.
    """
    h = s_end / steps
    s = np.linspace(0.0, s_end, steps + 1)
    k = np.empty(steps + 1)
    dk = np.empty(steps + 1)
    k[0], dk[0] = p.k_M, 0.0

    def accel(x: float) -> float:
        return -0.5 * x ** 3 - p.lam * x + p.mu

    for i in range(steps):
        x, v = k[i], dk[i]
        a1, b1 = v, accel(x)
        a2, b2 = v + 0.5 * h * b1, accel(x + 0.5 * h * a1)
        a3, b3 = v + 0.5 * h * b2, accel(x + 0.5 * h * a2)
        a4, b4 = v + h * b3, accel(x + h * a3)
        k[i + 1] = x + h / 6.0 * (a1 + 2 * a2 + 2 * a3 + a4)
        dk[i + 1] = v + h / 6.0 * (b1 + 2 * b2 + 2 * b3 + b4)
    return s, k, dk
