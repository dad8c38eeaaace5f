"""
Convex bodies in three representations and the functionals A, P, E on each.

- SupportBody: Fourier series of the support function h(t), t the outward
  normal angle. Radius of curvature phi = h'' + h, ds = phi dt.
- ThetaFunction: tangent angle theta sampled on a uniform arclength grid.
- Polyline: boundary vertices reconstructed from theta.

A = 1/2 int h phi dt, P = int h dt, E = 1/2 int k^2 ds = 1/2 int dt / phi.
"""

import math
import logging
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np
from scipy.interpolate import PchipInterpolator

from errors import ConstraintViolationError, NotStrictlyConvexError, SolvabilityError
from quadrature import cumulative_simpson, periodic_derivative, periodic_trapezoid

logger = logging.getLogger(__name__)

DEFAULT_NODES = 2048
MONOTONE_TOL = 1e-10
TURNING_TOL = 1e-6
CLOSURE_TOL = 1e-6
RESONANCE_TOL = 1e-10


# ----------------------------------------------------------------------------
# Fourier series and support functions
# ----------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class FourierSeries:
    """f(t) = a0 + sum_k a_k cos(kt) + b_k sin(kt); cos[i], sin[i] hold k = i + 1"""
    a0: float
    cos: np.ndarray = field(default_factory=lambda: np.zeros(0))
    sin: np.ndarray = field(default_factory=lambda: np.zeros(0))

    def __post_init__(self):
        c = np.asarray(self.cos, dtype=float).ravel()
        s = np.asarray(self.sin, dtype=float).ravel()
        n = max(c.size, s.size)
        object.__setattr__(self, "a0", float(self.a0))
        object.__setattr__(self, "cos", np.pad(c, (0, n - c.size)))
        object.__setattr__(self, "sin", np.pad(s, (0, n - s.size)))

    @property
    def order(self) -> int:
        return int(self.cos.size)

    @property
    def wavenumbers(self) -> np.ndarray:
        return np.arange(1, self.order + 1, dtype=float)

    def harmonics(self) -> List[Tuple[int, float, float]]:
        return [(k, float(a), float(b)) for k, a, b in zip(range(1, self.order + 1), self.cos, self.sin)]

    def padded(self, order: int) -> Tuple[np.ndarray, np.ndarray]:
        extra = max(order - self.order, 0)
        return np.pad(self.cos, (0, extra)), np.pad(self.sin, (0, extra))

    def evaluate(self, t: np.ndarray, derivative: int = 0) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        out = np.full(t.shape, self.a0 if derivative == 0 else 0.0)
        if self.order == 0:
            return out
        k = self.wavenumbers
        kt = np.multiply.outer(t, k)
        c, s = np.cos(kt), np.sin(kt)
        # d^n/dt^n of cos, sin cycles through (cos, sin) with powers of k
        scale = k ** derivative
        phase = derivative % 4
        if phase == 0:
            terms = c * self.cos + s * self.sin
        elif phase == 1:
            terms = -s * self.cos + c * self.sin
        elif phase == 2:
            terms = -c * self.cos - s * self.sin
        else:
            terms = s * self.cos - c * self.sin
        return out + terms @ scale

    def max_harmonic(self) -> float:
        if self.order == 0:
            return 0.0
        return float(np.max(np.hypot(self.cos, self.sin)))

    @classmethod
    def from_samples(cls, values: np.ndarray, order: Optional[int] = None) -> "FourierSeries":
        """Coefficients of uniformly sampled periodic values on [0, 2 pi)"""
        values = np.asarray(values, dtype=float)
        n = values.size
        spectrum = np.fft.rfft(values) / n
        top = spectrum.size - 1 if order is None else min(order, spectrum.size - 1)
        coeffs = spectrum[1:top + 1]
        return cls(float(spectrum[0].real), 2.0 * coeffs.real, -2.0 * coeffs.imag)


class SupportBody(FourierSeries):
    """Support function of a convex body"""

    @classmethod
    def disk(cls, radius: float = 1.0) -> "SupportBody":
        return cls(radius)

    def radius_of_curvature(self) -> FourierSeries:
        k = self.wavenumbers
        return FourierSeries(self.a0, (1.0 - k * k) * self.cos, (1.0 - k * k) * self.sin)

    def min_radius_of_curvature(self, nodes: int = DEFAULT_NODES) -> float:
        t = sample_grid(max(nodes, 8 * self.order))
        return float(np.min(self.radius_of_curvature().evaluate(t)))

    def is_convex(self, nodes: int = DEFAULT_NODES) -> bool:
        return self.min_radius_of_curvature(nodes) >= 0.0

    def boundary_points(self, t: np.ndarray) -> np.ndarray:
        """X(t) = h(t) n(t) + h'(t) n'(t)"""
        h = self.evaluate(t)
        dh = self.evaluate(t, derivative=1)
        c, s = np.cos(t), np.sin(t)
        return np.column_stack([h * c - dh * s, h * s + dh * c])

    def to_text(self) -> str:
        lines = [f"a0 {self.a0!r}"]
        lines += [f"{k} {a!r} {b!r}" for k, a, b in self.harmonics()]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "SupportBody":
        """Parse 'a0 <value>' followed by 'k a_k b_k' lines; blank and # lines ignored"""
        a0 = None
        entries = {}
        for raw in text.splitlines():
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if parts[0] == "a0":
                if len(parts) != 2:
                    raise ValueError(f"malformed a0 line: {raw!r}")
                a0 = float(parts[1])
                continue
            if len(parts) != 3:
                raise ValueError(f"expected 'k a_k b_k', got {raw!r}")
            k = int(parts[0])
            if k < 1 or k in entries:
                raise ValueError(f"invalid or repeated harmonic index {k}")
            entries[k] = (float(parts[1]), float(parts[2]))
        if a0 is None:
            raise ValueError("support function text has no a0 line")
        order = max(entries, default=0)
        cos = np.zeros(order)
        sin = np.zeros(order)
        for k, (a, b) in entries.items():
            cos[k - 1], sin[k - 1] = a, b
        return cls(a0, cos, sin)


def sample_grid(nodes: int) -> np.ndarray:
    return 2.0 * math.pi * np.arange(nodes) / nodes


# ----------------------------------------------------------------------------
# Value types
# ----------------------------------------------------------------------------

@dataclass(frozen=True)
class DiagramPoint:
    """Normalised point (4 pi A / P^2, E P / (2 pi^2)) of the diagram"""
    x: float
    y: float
    source: str = "reference"
    n: Optional[int] = None
    a: Optional[float] = None

    def is_admissible(self, slack: float = 1e-9) -> bool:
        return 0.0 < self.x <= 1.0 + slack and self.y >= 1.0 - slack and self.x * self.y >= 1.0 - slack


@dataclass(frozen=True)
class Functionals:
    area: float
    perimeter: float
    energy: float
    # |quadrature area - closed-form area| when both are available
    area_deviation: float = 0.0

    def objective(self, mu: float) -> float:
        return self.energy + mu * self.area

    def diagram_point(self, source: str = "reference") -> DiagramPoint:
        P = self.perimeter
        return DiagramPoint(4.0 * math.pi * self.area / P ** 2, self.energy * P / (2.0 * math.pi ** 2), source)


@dataclass(frozen=True, eq=False)
class ThetaFunction:
    """theta sampled at s_i = i P / n, i = 0..n (endpoint included)"""
    grid: np.ndarray
    theta: np.ndarray
    perimeter: float

    @property
    def step(self) -> float:
        return self.perimeter / (self.grid.size - 1)

    @property
    def turning(self) -> float:
        return float(self.theta[-1] - self.theta[0])

    @classmethod
    def from_function(cls, func, perimeter: float, points: int = 8192) -> "ThetaFunction":
        s = np.linspace(0.0, perimeter, points + 1)
        return cls(s, np.asarray(func(s), dtype=float), perimeter)

    def validate(self, monotone_tol: float = MONOTONE_TOL, turning_tol: float = TURNING_TOL,
                 closure_tol: float = CLOSURE_TOL):
        drops = np.diff(self.theta)
        if drops.size and drops.min() < -monotone_tol:
            i = int(np.argmin(drops))
            raise ConstraintViolationError(
                f"theta decreases by {-drops[i]:.3e} at s={self.grid[i]:.6g}")
        if abs(self.turning - 2.0 * math.pi) > turning_tol:
            raise ConstraintViolationError(
                f"total turning {self.turning:.12g} differs from 2 pi")
        th = self.theta[:-1]
        gap_x = periodic_trapezoid(np.cos(th), self.step)
        gap_y = periodic_trapezoid(np.sin(th), self.step)
        if max(abs(gap_x), abs(gap_y)) > closure_tol:
            raise ConstraintViolationError(
                f"curve is not closed: int cos theta = {gap_x:.3e}, int sin theta = {gap_y:.3e}")


@dataclass(frozen=True, eq=False)
class Polyline:
    vertices: np.ndarray
    closed: bool = True

    @property
    def closure_residual(self) -> float:
        return float(np.hypot(*(self.vertices[-1] - self.vertices[0])))

    @property
    def segment_lengths(self) -> np.ndarray:
        return np.hypot(*np.diff(self.vertices, axis=0).T)

    @property
    def length(self) -> float:
        return float(self.segment_lengths.sum())

    def shoelace_area(self) -> float:
        x, y = self.vertices[:, 0], self.vertices[:, 1]
        return 0.5 * float(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))


# ----------------------------------------------------------------------------
# Functionals
# ----------------------------------------------------------------------------

def _fourier_area(body: SupportBody) -> float:
    k = body.wavenumbers
    return math.pi * body.a0 ** 2 + 0.5 * math.pi * float(np.sum((1.0 - k * k) * (body.cos ** 2 + body.sin ** 2)))


def functionals_from_support(body: SupportBody, nodes: int = DEFAULT_NODES) -> Functionals:
    nodes = max(int(nodes), 8 * body.order, DEFAULT_NODES)
    t = sample_grid(nodes)
    dt = 2.0 * math.pi / nodes
    h = body.evaluate(t)
    phi = body.radius_of_curvature().evaluate(t)
    if phi.min() <= 0.0:
        raise NotStrictlyConvexError(
            f"radius of curvature reaches {phi.min():.3e} at t={t[int(np.argmin(phi))]:.6g}")

    area = _fourier_area(body)
    perimeter = 2.0 * math.pi * body.a0
    area_quad = 0.5 * periodic_trapezoid(h * phi, dt)
    if abs(area_quad - area) > 1e-10 * max(1.0, abs(area)):
        logger.warning("Quadrature area %.15g disagrees with Fourier area %.15g", area_quad, area)

    energy = 0.5 * periodic_trapezoid(1.0 / phi, dt)
    return Functionals(area, perimeter, energy, abs(area_quad - area))


def apply_G(phi: FourierSeries) -> SupportBody:
    """Periodic solution of h'' + h = phi with vanishing first harmonic"""
    if phi.order >= 1 and max(abs(phi.cos[0]), abs(phi.sin[0])) > RESONANCE_TOL:
        raise SolvabilityError(
            f"phi has first harmonic ({phi.cos[0]:.3e}, {phi.sin[0]:.3e}); h'' + h = phi has no periodic solution")
    k = phi.wavenumbers
    denom = 1.0 - k * k
    denom[:1] = 1.0
    cos = phi.cos / denom
    sin = phi.sin / denom
    if phi.order >= 1:
        cos[0] = sin[0] = 0.0
    return SupportBody(phi.a0, cos, sin)


def minkowski_combine(b0: SupportBody, b1: SupportBody, tau: float) -> SupportBody:
    if not 0.0 <= tau <= 1.0:
        raise ValueError(f"tau must lie in [0, 1], got {tau}")
    order = max(b0.order, b1.order)
    c0, s0 = b0.padded(order)
    c1, s1 = b1.padded(order)
    return SupportBody(tau * b1.a0 + (1.0 - tau) * b0.a0,
                       tau * c1 + (1.0 - tau) * c0,
                       tau * s1 + (1.0 - tau) * s0)


def _arclength_of_normal_angle(body: SupportBody, t: np.ndarray) -> np.ndarray:
    # s(t) = int_0^t phi
    k = body.wavenumbers
    w = (1.0 - k * k) / k
    kt = np.multiply.outer(t, k)
    return body.a0 * t + (np.sin(kt) * body.cos - (np.cos(kt) - 1.0) * body.sin) @ w


def theta_from_support(body: SupportBody, points: int = 8192, nodes: int = DEFAULT_NODES) -> ThetaFunction:
    """
    Tangent angle on a uniform arclength grid, starting at the boundary point
    with outward normal angle 0 (theta = t + pi/2 there).
    The map t -> s(t) is inverted by monotone cubic interpolation, then two
    Newton steps on s(t) = s.
    """
    if body.min_radius_of_curvature(nodes) <= 0.0:
        raise NotStrictlyConvexError("theta parametrisation needs phi > 0")
    phi = body.radius_of_curvature()
    dense = max(nodes, 8 * body.order, points // 2)
    t_nodes = np.linspace(0.0, 2.0 * math.pi, dense + 1)
    s_nodes = _arclength_of_normal_angle(body, t_nodes)
    perimeter = 2.0 * math.pi * body.a0
    s = np.linspace(0.0, perimeter, points + 1)
    t = PchipInterpolator(s_nodes, t_nodes)(s)
    for _ in range(2):
        t = t - (_arclength_of_normal_angle(body, t) - s) / phi.evaluate(t)
    t[0], t[-1] = 0.0, 2.0 * math.pi
    return ThetaFunction(s, t + 0.5 * math.pi, perimeter)


def reconstruct_polyline(tf: ThetaFunction) -> Polyline:
    """x = int cos theta, y = int sin theta from the origin"""
    h = tf.step
    x = cumulative_simpson(np.cos(tf.theta), h)
    y = cumulative_simpson(np.sin(tf.theta), h)
    return Polyline(np.column_stack([x, y]), closed=True)


def functionals_from_theta(tf: ThetaFunction) -> Functionals:
    """
    E = 1/2 int theta'^2 with theta' from periodic fourth-order differences of
    theta - 2 pi s / P; A = 1/2 int (x sin theta - y cos theta) ds, the
    continuous shoelace integral on the reconstructed boundary.
    """
    tf.validate()
    P = tf.perimeter
    h = tf.step
    slope = 2.0 * math.pi / P
    psi = tf.theta[:-1] - slope * tf.grid[:-1]
    dtheta = periodic_derivative(psi, h) + slope
    energy = 0.5 * periodic_trapezoid(dtheta ** 2, h)

    return Functionals(theta_area(tf), P, energy)


def theta_area(tf: ThetaFunction, poly: Optional[Polyline] = None) -> float:
    """1/2 int (x sin theta - y cos theta) ds, periodic trapezoid"""
    if poly is None:
        poly = reconstruct_polyline(tf)
    x, y = poly.vertices[:-1, 0], poly.vertices[:-1, 1]
    th = tf.theta[:-1]
    return 0.5 * periodic_trapezoid(x * np.sin(th) - y * np.cos(th), tf.step)


def curve_functionals(points: np.ndarray) -> Functionals:
    """
    (A, P, E) of a smooth closed curve sampled at uniformly spaced parameter
    values (no repeated endpoint), with spectral derivatives.
    """
    pts = np.asarray(points, dtype=float)
    n = pts.shape[0]
    freq = np.fft.rfftfreq(n, d=1.0 / n)
    dt = 2.0 * math.pi / n

    def derivative(values: np.ndarray, order: int) -> np.ndarray:
        coeffs = np.fft.rfft(values) * (1j * freq) ** order
        if n % 2 == 0 and order % 2 == 1:
            coeffs[-1] = 0.0
        return np.fft.irfft(coeffs, n)

    x, y = pts[:, 0], pts[:, 1]
    dx, dy = derivative(x, 1), derivative(y, 1)
    ddx, ddy = derivative(x, 2), derivative(y, 2)
    speed = np.hypot(dx, dy)
    curvature = (dx * ddy - dy * ddx) / speed ** 3
    return Functionals(
        area=0.5 * dt * float(np.sum(x * dy - y * dx)),
        perimeter=dt * float(np.sum(speed)),
        energy=0.5 * dt * float(np.sum(curvature ** 2 * speed)),
    )


# ----------------------------------------------------------------------------
# Shape derivatives
# ----------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class VectorField:
    """Deformation field on the boundary as Fourier series of the normal angle"""
    vx: FourierSeries
    vy: FourierSeries

    def evaluate(self, t: np.ndarray) -> np.ndarray:
        return np.column_stack([self.vx.evaluate(t), self.vy.evaluate(t)])

    def normal_component(self, t: np.ndarray) -> np.ndarray:
        return self.vx.evaluate(t) * np.cos(t) + self.vy.evaluate(t) * np.sin(t)

    @classmethod
    def translation(cls, cx: float, cy: float) -> "VectorField":
        return cls(FourierSeries(cx), FourierSeries(cy))

    @classmethod
    def position(cls, body: SupportBody, nodes: int = DEFAULT_NODES) -> "VectorField":
        """V(X) = X, the generator of dilations about the origin"""
        pts = body.boundary_points(sample_grid(nodes))
        order = min(body.order + 1, nodes // 2 - 1)
        return cls(FourierSeries.from_samples(pts[:, 0], order),
                   FourierSeries.from_samples(pts[:, 1], order))


def shape_derivatives(body: SupportBody, V: VectorField,
                      nodes: int = DEFAULT_NODES) -> Tuple[float, float, float]:
    """
    First variations of (A, P, E) under X -> X + eps V(X):
        dA = int <V,n> ds, dP = int k <V,n> ds, dE = -int (k_ss + k^3/2) <V,n> ds,
    with k = 1/phi and k_ss = -phi''/phi^4 + 3 phi'^2/phi^5.
    """
    nodes = max(int(nodes), 8 * max(body.order, V.vx.order, V.vy.order), DEFAULT_NODES)
    t = sample_grid(nodes)
    dt = 2.0 * math.pi / nodes
    rc = body.radius_of_curvature()
    phi = rc.evaluate(t)
    if phi.min() <= 0.0:
        raise NotStrictlyConvexError(f"shape derivatives need phi > 0, min is {phi.min():.3e}")
    dphi = rc.evaluate(t, derivative=1)
    ddphi = rc.evaluate(t, derivative=2)

    vn = V.normal_component(t)
    k = 1.0 / phi
    k_ss = -ddphi / phi ** 4 + 3.0 * dphi ** 2 / phi ** 5

    dA = dt * float(np.sum(vn * phi))
    dP = dt * float(np.sum(vn))
    dE = -dt * float(np.sum((k_ss + 0.5 * k ** 3) * vn * phi))
    return dA, dP, dE


def random_support_body(rng: np.random.Generator, order: int = 6, scale: float = 0.3,
                        max_tries: int = 1000) -> SupportBody:
    """Rejection-sampled strictly convex body with a0 = 1"""
    k = np.arange(1, order + 1, dtype=float)
    for _ in range(max_tries):
        amp = scale * rng.uniform(0.0, 1.0) / (k * k)
        cos = amp * rng.standard_normal(order)
        sin = amp * rng.standard_normal(order)
        cos[0] = sin[0] = 0.0
        body = SupportBody(1.0, cos, sin)
        if body.min_radius_of_curvature() > 0.05:
            return body
    raise RuntimeError("could not sample a strictly convex body")


def family_body(n: int, a: float) -> SupportBody:
    """h = 1 + a cos(n t)"""
    cos = np.zeros(n)
    cos[n - 1] = a
    return SupportBody(1.0, cos, np.zeros(n))

