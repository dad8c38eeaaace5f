"""
Optimal shapes for E + mu A at perimeter 2 pi.

The boundary is made of 2q congruent arcs of the closed-form elastica,
optionally separated by 2q straight segments. (k_M, lambda) solve a 2x2
shooting system:

    strict   : 2 K(m) = omega pi / (2q),        int_0^{pi/2q} k = pi/(2q)
    segments : int_0^{s1} k = pi/(2q),          2 sqrt(C)/mu + 2 s1 = pi/q
    disk     : -k^3/2 - lambda k + mu = 0,       k = 1

Solutions are found by Levenberg-Marquardt with continuation in mu from the
disk bifurcation at mu = 4q^2 - 1.
"""

import math
import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Dict, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np
from scipy.integrate import simpson
from scipy.interpolate import CubicHermiteSpline

from config import Settings, get_settings
from convex_geometry import (
    DiagramPoint,
    Functionals,
    Polyline,
    ThetaFunction,
    family_body,
    functionals_from_support,
    reconstruct_polyline,
)
from elastica import (
    ElasticaParams,
    build_params,
    curvature_at,
    curvature_moment,
    first_zero,
    theta_integral,
)
from errors import (
    AssemblyError,
    ElasticaError,
    ModeMismatchError,
    NonConvergenceError,
)
from quadrature import cumulative_simpson
from special_functions import complete_elliptic_K
from warm_start import WarmStartCache, WarmStartRecord

logger = logging.getLogger(__name__)

TWO_PI = 2.0 * math.pi
SEGMENT_THRESHOLD = 47.775
CLOSURE_LIMIT = 1e-4
ARC_POINTS = 2048


class ShootingMode(str, Enum):
    STRICTLY_CONVEX = "strict"
    WITH_SEGMENTS = "segments"
    DISK = "disk"


MODE_CHOICES = ("auto",) + tuple(m.value for m in ShootingMode)


def disk_stability_threshold(n: int = 2) -> float:
    """Penalty past which the n-th Fourier mode destabilises the disk"""
    return float(n * n - 1)


# ----------------------------------------------------------------------------
# Shooting residual
# ----------------------------------------------------------------------------

def shooting_residual(k_M: float, lam: float, mu: float, q: int = 1,
                      mode: ShootingMode = ShootingMode.WITH_SEGMENTS) -> Tuple[float, float]:
    mode = ShootingMode(mode)
    quarter = math.pi / (2 * q)
    if mode is ShootingMode.DISK:
        return -0.5 * k_M ** 3 - lam * k_M + mu, k_M - 1.0

    p = build_params(mu, lam, k_M, q)
    if mode is ShootingMode.STRICTLY_CONVEX:
        return (2.0 * complete_elliptic_K(p.m) - p.omega * quarter,
                theta_integral(p, quarter) - quarter)

    s1 = first_zero(p, quarter)
    if s1 is None:
        raise ModeMismatchError(
            f"curvature has no zero in (0, {quarter:.6g}] at mu={mu}, k_M={k_M}, lambda={lam}")
    return (theta_integral(p, s1) - quarter,
            2.0 / mu * math.sqrt(p.C) + 2.0 * s1 - math.pi / q)


# ----------------------------------------------------------------------------
# Levenberg-Marquardt
# ----------------------------------------------------------------------------

@dataclass
class LMResult:
    x: np.ndarray
    residual: np.ndarray
    norm: float
    iterations: int
    converged: bool


def _jacobian(fun: Callable[[np.ndarray], np.ndarray], x: np.ndarray, r: np.ndarray,
              rel_step: float) -> np.ndarray:
    J = np.empty((r.size, x.size))
    for j in range(x.size):
        h = rel_step * max(abs(x[j]), 1.0)
        for sign in (1.0, -1.0):
            xp = x.copy()
            xp[j] += sign * h
            try:
                J[:, j] = sign * (fun(xp) - r) / h
                break
            except ElasticaError:
                if sign < 0:
                    raise
    return J


def levenberg_marquardt(fun: Callable[[np.ndarray], np.ndarray], x0: Sequence[float],
                        tol: float = 1e-10, max_iterations: int = 200,
                        damping: float = 1e-3, rel_step: float = 1e-7,
                        admissible: Optional[Callable[[np.ndarray], bool]] = None) -> LMResult:
    """
    Damped Gauss-Newton with Marquardt scaling diag(J^T J).
    Trial points where `fun` raises an ElasticaError or `admissible` is false
    count as rejected steps. Convergence is on the residual norm.
    """
    x = np.asarray(x0, dtype=float).copy()
    r = np.asarray(fun(x), dtype=float)
    norm = float(np.linalg.norm(r))
    lam = damping
    iterations = 0

    while norm > tol and iterations < max_iterations:
        iterations += 1
        J = _jacobian(fun, x, r, rel_step)
        A = J.T @ J
        g = J.T @ r
        scale = np.maximum(np.diag(A), 1e-12)
        accepted = False
        while lam < 1e16:
            try:
                step = np.linalg.solve(A + lam * np.diag(scale), -g)
            except np.linalg.LinAlgError:
                lam *= 10.0
                continue
            trial = x + step
            if admissible is not None and not admissible(trial):
                lam *= 10.0
                continue
            try:
                r_trial = np.asarray(fun(trial), dtype=float)
            except ElasticaError as e:
                logger.debug("Rejected LM step to %s: %s", trial, e)
                lam *= 10.0
                continue
            norm_trial = float(np.linalg.norm(r_trial))
            if norm_trial < norm:
                x, r, norm = trial, r_trial, norm_trial
                lam = max(lam / 10.0, 1e-15)
                accepted = True
                break
            lam *= 10.0
        if not accepted:
            logger.debug("LM stalled at |r|=%.3e after %d iterations", norm, iterations)
            break

    return LMResult(x, r, norm, iterations, norm <= tol)


# ----------------------------------------------------------------------------
# Shapes
# ----------------------------------------------------------------------------

class Assembly(NamedTuple):
    tf: ThetaFunction
    poly: Polyline
    L: Optional[float]
    curvature: np.ndarray


@dataclass
class BranchSolution:
    mode: ShootingMode
    k_M: float
    lam: float
    params: ElasticaParams
    s1: Optional[float]
    residual_norm: float
    iterations: int

    @property
    def arc_end(self) -> float:
        if self.mode is ShootingMode.WITH_SEGMENTS:
            return self.s1
        return math.pi / (2 * self.params.q)

    @property
    def energy(self) -> float:
        return 2.0 * self.params.q * curvature_moment(self.params, self.arc_end, 2)

    def objective_estimate(self) -> float:
        # E + mu A with A eliminated through lambda = (2 mu A - E) / (2 pi)
        return 1.5 * self.energy + math.pi * self.lam


@dataclass
class OptimalShape:
    mu: float
    q: int
    mode: ShootingMode
    params: ElasticaParams
    s1: Optional[float]
    L: Optional[float]
    tf: ThetaFunction
    poly: Polyline
    curvature: np.ndarray
    f: Functionals
    objective: float
    diagram: DiagramPoint
    residual_norm: float
    iterations: int = 0
    cubic_integral: float = float("nan")

    @property
    def k_M(self) -> float:
        return self.params.k_M

    @property
    def lam(self) -> float:
        return self.params.lam

    @property
    def segment_count(self) -> int:
        return 2 * self.q if self.mode is ShootingMode.WITH_SEGMENTS else 0

    def to_record(self) -> Dict:
        """JSON-ready description with every elastica constant"""
        return {
            "mu": self.mu,
            "q": self.q,
            "mode": self.mode.value,
            "params": self.params.to_dict(),
            "s1": self.s1,
            "L": self.L,
            "segments": self.segment_count,
            "A": self.f.area,
            "P": self.f.perimeter,
            "E": self.f.energy,
            "objective": self.objective,
            "x": self.diagram.x,
            "y": self.diagram.y,
            "residual_norm": self.residual_norm,
            "iterations": self.iterations,
            "closure": self.poly.closure_residual,
        }


def _theta_on_arc(p: ElasticaParams, arc_end: float):
    """Hermite interpolant of theta on [0, arc_end] with theta' = k"""
    u = np.linspace(0.0, arc_end, ARC_POINTS + 1)
    k = curvature_at(p, u)
    theta = cumulative_simpson(k, u[1] - u[0])
    return CubicHermiteSpline(u, theta, k), float(theta[-1])


def assemble_shape(params: ElasticaParams, mode: ShootingMode, s1: Optional[float],
                   mu: float, q: int = 1, points: Optional[int] = None) -> Assembly:
    """
    Full boundary from one fundamental arc.

    The curvature is even about every maximum and about the middle of every
    segment (or every minimum), so theta(period - s) = 2 theta_half - theta(s)
    and theta(s + period) = theta(s) + 2 theta_half, period = pi/q.
    The curve starts at the origin, heading along +x, at a curvature maximum.
    """
    mode = ShootingMode(mode)
    if points is None:
        points = get_settings().grid
    points = max(int(points), 2 * int(math.ceil(32.0 * params.k_M)))
    points += points % 2
    s = np.linspace(0.0, TWO_PI, points + 1)

    if mode is ShootingMode.DISK:
        k = np.full(s.shape, params.k_M)
        tf = ThetaFunction(s, params.k_M * s, TWO_PI)
        L = None
    else:
        if mode is ShootingMode.WITH_SEGMENTS:
            if s1 is None:
                raise AssemblyError("segment assembly needs the first zero s1")
            arc_end = s1
            L = 2.0 * math.sqrt(max(params.C, 0.0)) / mu
        else:
            arc_end = math.pi / (2 * q)
            L = None
        half = arc_end + 0.5 * (L or 0.0)
        period = 2.0 * half
        arc, theta_half = _theta_on_arc(params, arc_end)

        n_period = np.floor(s / period)
        u = s - n_period * period
        mirrored = u > half
        r = np.where(mirrored, period - u, u)
        on_arc = r <= arc_end
        r_arc = np.minimum(r, arc_end)
        g = np.where(on_arc, arc(r_arc), theta_half)
        theta = n_period * 2.0 * theta_half + np.where(mirrored, 2.0 * theta_half - g, g)
        k = np.where(on_arc, curvature_at(params, r_arc), 0.0)
        tf = ThetaFunction(s, theta, TWO_PI)

    poly = reconstruct_polyline(tf)
    closure = poly.closure_residual
    if closure > CLOSURE_LIMIT:
        raise AssemblyError(
            f"boundary does not close at mu={mu} ({mode.value}): residual {closure:.3e}")
    if closure > 1e-6:
        logger.warning("Closure residual %.3e at mu=%s exceeds 1e-6", closure, mu)
    return Assembly(tf, poly, L, k)


def symmetric_area(params: ElasticaParams, mode: ShootingMode, s1: Optional[float], q: int = 1) -> float:
    """
    Enclosed area from one half period of the 2q-fold symmetric boundary.

    The symmetry centre lies on the normals at s = 0 and at the end of the half
    period. The sector over the half period is 1/2 int <X - c, n> ds: Simpson
    on the elastic arc, where everything is smooth, and an exact triangle over
    the half segment.
    """
    mode = ShootingMode(mode)
    if mode is ShootingMode.DISK:
        return math.pi / params.k_M ** 2
    if mode is ShootingMode.WITH_SEGMENTS:
        if s1 is None:
            raise AssemblyError("segment area needs the first zero s1")
        arc_end, half_L = s1, math.sqrt(max(params.C, 0.0)) / params.mu
    else:
        arc_end, half_L = math.pi / (2 * q), 0.0

    u = np.linspace(0.0, arc_end, ARC_POINTS + 1)
    h = u[1] - u[0]
    theta = cumulative_simpson(curvature_at(params, u), h)
    x = cumulative_simpson(np.cos(theta), h)
    y = cumulative_simpson(np.sin(theta), h)
    theta_h = float(theta[-1])
    sin_h, cos_h = math.sin(theta_h), math.cos(theta_h)
    end_x, end_y = float(x[-1]), float(y[-1])
    half_x, half_y = end_x + half_L * cos_h, end_y + half_L * sin_h
    # centre (0, cy): where the inward normal at the half point meets x = 0
    cy = half_y + half_x * cos_h / sin_h

    arc_sector = 0.5 * simpson(x * np.sin(theta) - (y - cy) * np.cos(theta), dx=h)
    triangle = 0.5 * half_L * (end_x * sin_h - (end_y - cy) * cos_h)
    return 4.0 * q * float(arc_sector + triangle)


def build_shape(mu: float, branch: BranchSolution, points: Optional[int] = None) -> OptimalShape:
    p = branch.params
    q = p.q
    assembly = assemble_shape(p, branch.mode, branch.s1, mu, q, points)
    energy = branch.energy
    cubic = 4.0 * q * curvature_moment(p, branch.arc_end, 3)
    area = symmetric_area(p, branch.mode, branch.s1, q)
    f = Functionals(area, TWO_PI, energy)
    return OptimalShape(
        mu=mu, q=q, mode=branch.mode, params=p, s1=branch.s1, L=assembly.L,
        tf=assembly.tf, poly=assembly.poly, curvature=assembly.curvature,
        f=f, objective=f.objective(mu), diagram=f.diagram_point("solved"),
        residual_norm=branch.residual_norm, iterations=branch.iterations,
        cubic_integral=cubic,
    )


# ----------------------------------------------------------------------------
# Solver with continuation
# ----------------------------------------------------------------------------

class ShapeSolver:
    """
    Solves for optimal shapes at given mu, reusing earlier solutions.

    The cache may be shared between solvers; each solve only reads the nearest
    record and writes the values it computes.
    """

    ADDITIVE_STEP = 0.05
    GEOMETRIC_STEP = 1.2
    ADDITIVE_LIMIT = 4.0
    SEED_AMPLITUDES = (0.3, 0.15, 0.6, 1.0)
    MAX_SUBDIVISIONS = 4

    def __init__(self, settings: Optional[Settings] = None, cache: Optional[WarmStartCache] = None):
        self.settings = settings or get_settings()
        self.cache = cache if cache is not None else WarmStartCache(self.settings.cache_path)

    # -- single branch -------------------------------------------------------

    def solve_branch(self, mu: float, q: int, mode: ShootingMode,
                     seed: Tuple[float, float]) -> BranchSolution:
        mode = ShootingMode(mode)
        if mode is ShootingMode.DISK:
            return self.disk_branch(mu, q)

        def fun(x: np.ndarray) -> np.ndarray:
            return np.array(shooting_residual(x[0], x[1], mu, q, mode))

        result = levenberg_marquardt(
            fun, seed, tol=self.settings.tolerance, max_iterations=self.settings.max_iterations,
            admissible=lambda x: x[0] > 0.0 and x[1] >= 0.0)
        if not result.converged:
            raise NonConvergenceError(
                f"{mode.value} shooting did not converge at mu={mu}: |r|={result.norm:.3e}",
                best=(float(result.x[0]), float(result.x[1])), residual=result.norm,
                iterations=result.iterations, mode=mode.value)
        k_M, lam = float(result.x[0]), float(result.x[1])
        p = build_params(mu, lam, k_M, q)
        s1 = first_zero(p, math.pi / (2 * q)) if mode is ShootingMode.WITH_SEGMENTS else None
        logger.debug("mu=%.6g %s: k_M=%.12g lambda=%.12g |r|=%.2e (%d it)",
                     mu, mode.value, k_M, lam, result.norm, result.iterations)
        return BranchSolution(mode, k_M, lam, p, s1, result.norm, result.iterations)

    def disk_branch(self, mu: float, q: int = 1) -> BranchSolution:
        k_M, lam = 1.0, mu - 0.5
        p = build_params(mu, lam, k_M, q)
        r = shooting_residual(k_M, lam, mu, q, ShootingMode.DISK)
        return BranchSolution(ShootingMode.DISK, k_M, lam, p, None, float(np.hypot(*r)), 0)

    # -- continuation ----------------------------------------------------------

    def _step(self, mu: float, q: int, mode: ShootingMode, seed: Tuple[float, float],
              switching: bool) -> BranchSolution:
        if mode is ShootingMode.WITH_SEGMENTS:
            try:
                return self.solve_branch(mu, q, mode, seed)
            except ModeMismatchError:
                if not switching:
                    raise
                logger.info("No curvature zero at mu=%.6g; back to strictly convex arcs", mu)
                return self.solve_branch(mu, q, ShootingMode.STRICTLY_CONVEX, seed)

        branch = self.solve_branch(mu, q, ShootingMode.STRICTLY_CONVEX, seed)
        if switching and branch.params.k_m < 0.0:
            logger.info("Curvature changes sign at mu=%.6g; switching to segments", mu)
            return self.solve_branch(mu, q, ShootingMode.WITH_SEGMENTS, (branch.k_M, branch.lam))
        return branch

    def _advance(self, current: BranchSolution, mu_from: float, mu_to: float, q: int,
                 switching: bool, depth: int = 0) -> BranchSolution:
        ratio = mu_to / mu_from
        if min(mu_from, mu_to) >= self.ADDITIVE_LIMIT:
            seed = (current.k_M * math.sqrt(ratio), current.lam * math.sqrt(ratio))
        else:
            seed = (current.k_M, current.lam + (mu_to - mu_from))
        try:
            return self._step(mu_to, q, current.mode, seed, switching)
        except (NonConvergenceError, ModeMismatchError) as e:
            if depth >= self.MAX_SUBDIVISIONS:
                raise
            mid = 0.5 * (mu_from + mu_to)
            logger.info("Step %.6g -> %.6g failed (%s); halving", mu_from, mu_to, e)
            halfway = self._advance(current, mu_from, mid, q, switching, depth + 1)
            return self._advance(halfway, mid, mu_to, q, switching, depth + 1)

    def continuation_path(self, mu_from: float, mu_to: float) -> List[float]:
        path = []
        mu = mu_from
        while mu != mu_to:
            if mu_to > mu:
                nxt = mu + self.ADDITIVE_STEP if mu < self.ADDITIVE_LIMIT else mu * self.GEOMETRIC_STEP
                mu = min(nxt, mu_to)
            else:
                nxt = mu - self.ADDITIVE_STEP if mu <= self.ADDITIVE_LIMIT else mu / self.GEOMETRIC_STEP
                mu = max(nxt, mu_to)
            path.append(mu)
        return path

    def _anchor(self, mu: float, q: int) -> Tuple[float, BranchSolution]:
        """Strictly convex solution just past the disk bifurcation"""
        threshold = disk_stability_threshold(2 * q)
        target = min(mu, threshold + self.ADDITIVE_STEP)
        last_error = None
        for amplitude in self.SEED_AMPLITUDES:
            seed = (1.0 + amplitude * math.sqrt(target - threshold), target - 0.5)
            try:
                branch = self.solve_branch(target, q, ShootingMode.STRICTLY_CONVEX, seed)
            except ElasticaError as e:
                last_error = e
                continue
            if branch.k_M - branch.params.k_m > 1e-6:
                return target, branch
        raise NonConvergenceError(
            f"no strictly convex branch found near mu={target} for q={q}: {last_error}",
            mode=ShootingMode.STRICTLY_CONVEX.value)

    def _continue_to(self, mu: float, q: int, switching: bool) -> BranchSolution:
        shooting_modes = (ShootingMode.STRICTLY_CONVEX.value, ShootingMode.WITH_SEGMENTS.value)
        exact = self.cache.get(mu, q)
        if exact is not None and exact.mode in shooting_modes and (
                switching or exact.mode == ShootingMode.STRICTLY_CONVEX.value):
            return self.solve_branch(mu, q, ShootingMode(exact.mode), (exact.k_M, exact.lam))

        record = self.cache.get_nearest(mu, q, modes=shooting_modes)
        if record is None:
            mu_from, current = self._anchor(mu, q)
            self._remember(mu_from, current)
        else:
            mu_from = record.mu
            mode = ShootingMode(record.mode)
            if not switching:
                mode = ShootingMode.STRICTLY_CONVEX
            current = self._step(mu_from, q, mode, (record.k_M, record.lam), switching)

        for mu_next in self.continuation_path(mu_from, mu):
            current = self._advance(current, mu_from, mu_next, q, switching)
            if switching:
                self._remember(mu_next, current)
            mu_from = mu_next
        return current

    def _remember(self, mu: float, branch: BranchSolution):
        self.cache.put(WarmStartRecord(mu, branch.params.q, branch.mode.value, branch.k_M, branch.lam))

    def _choose(self, mu: float, q: int, branch: BranchSolution) -> BranchSolution:
        """Best valid candidate at mu; ties go to strictly convex arcs, then to the disk"""
        candidates = []
        if branch.mode is ShootingMode.WITH_SEGMENTS or branch.params.k_m >= 0.0:
            candidates.append(branch)
        other = (ShootingMode.STRICTLY_CONVEX if branch.mode is ShootingMode.WITH_SEGMENTS
                 else ShootingMode.WITH_SEGMENTS)
        # both families only coexist near the bifurcation
        if mu <= 2.0 * (disk_stability_threshold(2 * q) + 1.0):
            try:
                alt = self.solve_branch(mu, q, other, (branch.k_M, branch.lam))
                if alt.mode is ShootingMode.WITH_SEGMENTS or alt.params.k_m >= 0.0:
                    candidates.append(alt)
            except ElasticaError:
                pass
        if not candidates:
            candidates.append(branch)

        def rank(b: BranchSolution):
            order = {ShootingMode.STRICTLY_CONVEX: 0, ShootingMode.WITH_SEGMENTS: 1, ShootingMode.DISK: 2}
            return (round(b.objective_estimate(), 10), order[b.mode])

        best = min(candidates, key=rank)
        disk = self.disk_branch(mu, q)
        if disk.objective_estimate() < best.objective_estimate() - 1e-10:
            logger.info("Disk beats the %s branch at mu=%.6g", best.mode.value, mu)
            return disk
        return best

    # -- public ----------------------------------------------------------------

    def solve_branch_auto(self, mu: float, q: int = 1, mode: str = "auto") -> BranchSolution:
        if not (math.isfinite(mu) and mu > 0.0):
            raise ValueError(f"mu must be positive, got {mu}")
        if mode not in MODE_CHOICES:
            raise ValueError(f"mode must be one of {MODE_CHOICES}, got {mode!r}")
        threshold = disk_stability_threshold(2 * q)

        if mode == ShootingMode.DISK.value:
            return self.disk_branch(mu, q)
        if mu <= threshold:
            if mode == ShootingMode.WITH_SEGMENTS.value:
                raise ModeMismatchError(f"no segment solution below the disk threshold {threshold}")
            if mode == "auto" or mu == threshold:
                return self.disk_branch(mu, q)

        if mode == ShootingMode.STRICTLY_CONVEX.value:
            if mu <= threshold:
                return self.disk_branch(mu, q)
            return self._continue_to(mu, q, switching=False)

        branch = self._continue_to(mu, q, switching=True)
        if mode == ShootingMode.WITH_SEGMENTS.value:
            if branch.mode is not ShootingMode.WITH_SEGMENTS:
                branch = self.solve_branch(mu, q, ShootingMode.WITH_SEGMENTS, (branch.k_M, branch.lam))
            return branch
        return self._choose(mu, q, branch)

    def solve(self, mu: float, q: int = 1, mode: str = "auto", points: Optional[int] = None) -> OptimalShape:
        branch = self.solve_branch_auto(mu, q, mode)
        shape = build_shape(mu, branch, points or self.settings.grid)
        logger.info("mu=%.6g q=%d mode=%s k_M=%.10g lambda=%.10g objective=%.10g",
                    mu, q, shape.mode.value, shape.k_M, shape.lam, shape.objective)
        return shape


def solve_mu(mu: float, q: int = 1, mode: str = "auto", solver: Optional[ShapeSolver] = None) -> OptimalShape:
    return (solver or ShapeSolver()).solve(mu, q, mode)


# ----------------------------------------------------------------------------
# Reference values
# ----------------------------------------------------------------------------

def disk_objective(mu: float) -> float:
    return math.pi * (1.0 + mu)


def stadium_objective(mu: float, radius: float) -> float:
    """Stadium of perimeter 2 pi made of two half disks of the given radius"""
    if not 0.0 < radius <= 1.0:
        raise ValueError(f"stadium radius must lie in (0, 1], got {radius}")
    area = TWO_PI * radius - math.pi * radius ** 2
    return math.pi / radius + mu * area


def stadium(mu: float) -> float:
    """Best-radius stadium, radius 1/sqrt(mu): 3 pi sqrt(mu) - pi"""
    if mu < 1.0:
        raise ValueError("the optimal stadium radius 1/sqrt(mu) needs mu >= 1")
    return stadium_objective(mu, 1.0 / math.sqrt(mu))


def stadium_half_rectangle(mu: float) -> float:
    """Stadium of radius 1/2: 2 pi + 3 pi mu / 4"""
    return stadium_objective(mu, 0.5)


def disk_perturbation_gain(mu: float, eps: float, n: int = 2) -> float:
    """J(h = 1 + eps cos nt) - J(disk) with J = E + mu A, exact functionals"""
    f = functionals_from_support(family_body(n, eps))
    return f.objective(mu) - disk_objective(mu)


def disk_perturbation_expansion(mu: float, eps: float, n: int = 2, order: int = 2) -> float:
    """
    Series of disk_perturbation_gain in eps: the area is exactly quadratic,
    E = pi / sqrt(1 - (n^2 - 1)^2 eps^2) contributes the higher terms.
    """
    c = n * n - 1
    value = 0.5 * math.pi * eps ** 2 * (c * c - mu * c)
    if order >= 4:
        value += 0.375 * math.pi * c ** 4 * eps ** 4
    return value


# ----------------------------------------------------------------------------
# Bound checks
# ----------------------------------------------------------------------------

@dataclass
class BoundCheck:
    name: str
    description: str
    applicable: bool
    passed: bool
    value: float = float("nan")
    bound: float = float("nan")


@dataclass
class BoundsReport:
    mu: float
    checks: List[BoundCheck] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> List[BoundCheck]:
        return [c for c in self.checks if not c.passed]

    def add(self, name: str, description: str, applicable: bool, ok: bool,
            value: float = float("nan"), bound: float = float("nan")):
        self.checks.append(BoundCheck(name, description, applicable, bool(ok) or not applicable,
                                      float(value), float(bound)))


def _optimality_geometry(shape: OptimalShape) -> Tuple[float, float]:
    """Largest deviations of the two pointwise optimality identities"""
    pts = shape.poly.vertices[:-1]
    theta = shape.tf.theta[:-1]
    k = shape.curvature[:-1]
    n_pts = pts.shape[0]
    centre = 0.5 * (pts[0] + pts[n_pts // 2])
    qm = pts - centre
    normal = np.column_stack([np.sin(theta), -np.cos(theta)])
    mu, lam = shape.mu, shape.lam
    support = np.sum(qm * normal, axis=1)
    support_error = float(np.max(np.abs(support - (lam / mu + k * k / (2.0 * mu)))))

    arcs = k > 1e-3 * max(shape.k_M, 1.0)
    radial = 0.5 * mu * (np.sum(qm * qm, axis=1) - shape.params.R0_sq)
    radial_error = float(np.max(np.abs(radial[arcs] - k[arcs]))) if arcs.any() else 0.0
    return support_error, radial_error


def check_bounds(shape: OptimalShape, slack: float = 1e-9) -> BoundsReport:
    mu = shape.mu
    E, A = shape.f.energy, shape.f.area
    J = shape.objective
    report = BoundsReport(mu)
    segments = shape.mode is ShootingMode.WITH_SEGMENTS

    lower, upper = TWO_PI * math.sqrt(mu), 3.0 * math.pi * math.sqrt(mu) - math.pi
    report.add("energy_bounds", "2 pi sqrt(mu) <= E + mu A <= 3 pi sqrt(mu) - pi", mu > 1.0,
               lower - slack <= J <= upper + slack, J, upper)
    report.add("gage", "E A >= pi^2", True, E * A >= math.pi ** 2 - slack, E * A, math.pi ** 2)
    report.add("segment_balance", "E <= mu A <= 2E", segments,
               E - 1e-6 <= mu * A <= 2.0 * E + 1e-6, mu * A, E)
    cubic_gap = TWO_PI * mu - (TWO_PI * shape.lam + 0.5 * shape.cubic_integral)
    report.add("cubic_identity", "2 pi mu = 2 pi lambda + 1/2 int k^3", True,
               abs(cubic_gap) <= 1e-6 * max(1.0, mu), cubic_gap, 0.0)
    report.add("energy_upper", "E <= pi sqrt(2 mu)", mu >= 1.0,
               E <= math.pi * math.sqrt(2.0 * mu) + slack, E, math.pi * math.sqrt(2.0 * mu))
    area_bound = 0.25 * math.pi * (math.sqrt(1.0 + 16.0 * mu) - 1.0)
    report.add("area_lower", "mu A >= (pi/4)(sqrt(1 + 16 mu) - 1)", mu >= 1.0,
               mu * A >= area_bound - slack, mu * A, area_bound)
    report.add("segments_required", "segments present for mu > 47.775", mu > SEGMENT_THRESHOLD,
               segments, float(shape.segment_count), 2.0)

    support_error, radial_error = _optimality_geometry(shape)
    tol = 1e-6 * max(1.0, shape.k_M)
    report.add("support_identity", "<QM, n> = lambda/mu + k^2/(2 mu)", True,
               support_error <= tol, support_error, tol)
    report.add("radial_identity", "k = (mu/2)(|QM|^2 - R0^2) on arcs", True,
               radial_error <= tol * max(1.0, mu), radial_error, tol * max(1.0, mu))
    report.add("elastic_lower", "E >= pi", True, E >= math.pi - slack, E, math.pi)
    report.add("isoperimetric", "A <= pi", True, A <= math.pi + slack, A, math.pi)

    lam_from_functionals = (2.0 * mu * A - E) / TWO_PI
    report.add("lambda_relation", "lambda = (2 mu A - E) / (2 pi)", True,
               abs(lam_from_functionals - shape.lam) <= 1e-6 * max(1.0, abs(shape.lam)),
               lam_from_functionals, shape.lam)
    report.add("perimeter", "P = 2 pi", True, abs(shape.f.perimeter - TWO_PI) <= 1e-6,
               shape.f.perimeter, TWO_PI)
    report.add("turning", "theta(2 pi) - theta(0) = 2 pi", True,
               abs(shape.tf.turning - TWO_PI) <= 1e-6, shape.tf.turning, TWO_PI)
    report.add("closure", "boundary closes", True, shape.poly.closure_residual <= 1e-6,
               shape.poly.closure_residual, 1e-6)
    return report
