"""
Diagram of attainable (4 pi A / P^2, E P / (2 pi^2)) pairs for convex bodies.

The lower-left boundary is traced by the optimal shapes of E + mu A at
perimeter 2 pi; every body lies above each supporting line
y + mu x = objective(mu) / pi.
"""

import math
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from config import Settings, get_settings
from convex_geometry import DiagramPoint, family_body, functionals_from_support
from errors import BracketError, ElasticaError
from shooting import OptimalShape, ShapeSolver, ShootingMode, check_bounds
from special_functions import complete_elliptic_K, rho_constant
from warm_start import WarmStartCache

logger = logging.getLogger(__name__)

SWEEP_COLUMNS = ["mu", "mode", "k_M", "lambda", "s1", "L", "A", "E", "objective", "x", "y", "residual_norm"]
FAILED = "failed"

__all__ = [
    "DiagramPoint", "SweepRow", "SweepTable", "SWEEP_COLUMNS", "sweep", "find_segment_onset",
    "interior_families", "family_deviation", "asymptote_metrics", "asymptotic_ratios", "boundary_gap",
    "boundary_violations",
]


@dataclass
class SweepRow:
    mu: float
    mode: str
    k_M: float
    lam: float
    s1: float
    L: float
    A: float
    E: float
    objective: float
    x: float
    y: float
    residual_norm: float
    bounds_passed: bool = True
    message: str = ""

    @property
    def converged(self) -> bool:
        return self.mode != FAILED

    @classmethod
    def from_shape(cls, shape: OptimalShape) -> "SweepRow":
        report = check_bounds(shape)
        failures = ", ".join(c.name for c in report.failures())
        nan = float("nan")
        return cls(
            mu=shape.mu, mode=shape.mode.value, k_M=shape.k_M, lam=shape.lam,
            s1=shape.s1 if shape.s1 is not None else nan,
            L=shape.L if shape.L is not None else nan,
            A=shape.f.area, E=shape.f.energy, objective=shape.objective,
            x=shape.diagram.x, y=shape.diagram.y, residual_norm=shape.residual_norm,
            bounds_passed=report.passed, message=failures,
        )

    @classmethod
    def failed(cls, mu: float, error: Exception) -> "SweepRow":
        nan = float("nan")
        best = getattr(error, "best", None) or (nan, nan)
        return cls(mu=mu, mode=FAILED, k_M=best[0], lam=best[1], s1=nan, L=nan, A=nan, E=nan,
                   objective=nan, x=nan, y=nan, residual_norm=getattr(error, "residual", nan),
                   bounds_passed=False, message=str(error))

    def values(self) -> list:
        return [self.mu, self.mode, self.k_M, self.lam, self.s1, self.L, self.A, self.E,
                self.objective, self.x, self.y, self.residual_norm]

    def point(self) -> DiagramPoint:
        return DiagramPoint(self.x, self.y, "solved")


@dataclass
class SweepTable:
    rows: List[SweepRow] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.rows)

    @property
    def failures(self) -> List[SweepRow]:
        return [r for r in self.rows if not r.converged]

    @property
    def converged_rows(self) -> List[SweepRow]:
        return [r for r in self.rows if r.converged]

    @property
    def is_complete(self) -> bool:
        return not self.failures

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame([r.values() for r in self.rows], columns=SWEEP_COLUMNS)

    def to_csv(self, path: Optional[str] = None) -> Optional[str]:
        """17 significant digits, empty cells for absent values, no index"""
        return self.to_frame().to_csv(path, index=False, float_format="%.17g", na_rep="",
                                      lineterminator="\n")

    @classmethod
    def from_frame(cls, frame: pd.DataFrame) -> "SweepTable":
        missing = [c for c in SWEEP_COLUMNS if c not in frame.columns]
        if missing:
            raise ValueError(f"sweep table is missing columns {missing}")
        rows = []
        for rec in frame[SWEEP_COLUMNS].itertuples(index=False):
            values = list(rec)
            rows.append(SweepRow(values[0], str(values[1]), *[float(v) for v in values[2:]]))
        return cls(rows)

    @classmethod
    def read_csv(cls, path) -> "SweepTable":
        return cls.from_frame(pd.read_csv(path, float_precision="round_trip"))

    def points(self) -> List[DiagramPoint]:
        return [r.point() for r in self.converged_rows]


def _mu_grid(mu_min: float, mu_max: float, steps: int, spacing: str) -> np.ndarray:
    if spacing == "geometric":
        grid = np.geomspace(mu_min, mu_max, steps)
    elif spacing == "uniform":
        grid = np.linspace(mu_min, mu_max, steps)
    else:
        raise ValueError(f"spacing must be 'geometric' or 'uniform', got {spacing!r}")
    grid[0], grid[-1] = mu_min, mu_max
    return grid


def _solve_row(mu: float, q: int, mode: str, settings: Settings, seeds: WarmStartCache) -> SweepRow:
    solver = ShapeSolver(settings, seeds.snapshot())
    try:
        return SweepRow.from_shape(solver.solve(mu, q, mode))
    except ElasticaError as first:
        logger.warning("mu=%.6g failed (%s); retrying with halved continuation steps", mu, first)
        solver = ShapeSolver(settings, seeds.snapshot())
        solver.ADDITIVE_STEP = 0.5 * ShapeSolver.ADDITIVE_STEP
        solver.GEOMETRIC_STEP = math.sqrt(ShapeSolver.GEOMETRIC_STEP)
        try:
            return SweepRow.from_shape(solver.solve(mu, q, mode))
        except ElasticaError as e:
            logger.error("mu=%.6g did not converge: %s", mu, e)
            return SweepRow.failed(mu, e)


def sweep(mu_min: float, mu_max: float, steps: int, q: int = 1, mode: str = "auto",
          spacing: str = "geometric", settings: Optional[Settings] = None,
          cache: Optional[WarmStartCache] = None, coarse_every: int = 4) -> SweepTable:
    """
    Optimal shapes on a mu grid, in two phases:
    1. serial continuation over every `coarse_every`-th mu fills the warm-start cache;
    2. every row is solved from a frozen copy of that cache on a thread pool.
    Rows only see phase-1 seeds, so the table does not depend on scheduling.
    """
    if not (0.0 < mu_min < mu_max):
        raise ValueError(f"need 0 < mu_min < mu_max, got {mu_min}, {mu_max}")
    if steps < 2:
        raise ValueError(f"steps must be >= 2, got {steps}")
    settings = settings or get_settings()
    cache = cache if cache is not None else WarmStartCache(settings.cache_path)
    grid = _mu_grid(mu_min, mu_max, steps, spacing)

    coarse = ShapeSolver(settings, cache)
    for mu in grid[::max(coarse_every, 1)].tolist() + [grid[-1]]:
        try:
            coarse.solve_branch_auto(float(mu), q, mode)
        except ElasticaError as e:
            logger.warning("Coarse pass failed at mu=%.6g: %s", mu, e)

    seeds = cache.snapshot()
    with ThreadPoolExecutor(max_workers=settings.threads) as pool:
        rows = list(pool.map(lambda mu: _solve_row(float(mu), q, mode, settings, seeds), grid))

    cache.save()
    table = SweepTable(sorted(rows, key=lambda r: r.mu))
    logger.info("Sweep [%g, %g] x %d: %d converged, %d failed", mu_min, mu_max, steps,
                len(table.converged_rows), len(table.failures))
    return table


def find_segment_onset(lo: float = 3.0, hi: float = 4.0, tol: float = 1e-3, q: int = 1,
                       solver: Optional[ShapeSolver] = None) -> float:
    """Bisection on the solved mode for the smallest mu whose optimum has segments"""
    if not lo < hi:
        raise BracketError(f"invalid bracket [{lo}, {hi}]")
    solver = solver or ShapeSolver()

    def has_segments(mu: float) -> bool:
        return solver.solve_branch_auto(mu, q).mode is ShootingMode.WITH_SEGMENTS

    if has_segments(lo):
        raise BracketError(f"optimum at mu={lo} already has segments")
    if not has_segments(hi):
        raise BracketError(f"optimum at mu={hi} has no segments")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if has_segments(mid):
            hi = mid
        else:
            lo = mid
    onset = 0.5 * (lo + hi)
    logger.info("Segment onset at mu=%.6f (bracket width %.1e)", onset, hi - lo)
    return onset


def family_point(n: int, a: float) -> DiagramPoint:
    """Closed form for h = 1 + a cos(nt): x = 1 - (n^2-1) a^2 / 2, y = 1/sqrt(1 - (n^2-1)^2 a^2)"""
    c = n * n - 1
    return DiagramPoint(1.0 - 0.5 * c * a * a, 1.0 / math.sqrt(1.0 - (c * a) ** 2), f"family(n={n})", n, a)


def family_deviation(points: Sequence[DiagramPoint]) -> float:
    """Largest |closed form - quadrature| over the x and y of family points"""
    worst = 0.0
    for point in points:
        ref = functionals_from_support(family_body(point.n, point.a)).diagram_point()
        worst = max(worst, abs(ref.x - point.x), abs(ref.y - point.y))
    return worst


def interior_families(n_max: int, samples_per_n: int, cross_check: bool = True,
                      tol: float = 1e-8) -> List[DiagramPoint]:
    if n_max < 2:
        raise ValueError(f"n_max must be >= 2, got {n_max}")
    points = []
    for n in range(2, n_max + 1):
        a_max = 1.0 / (n * n - 1)
        points += [family_point(n, j / samples_per_n * a_max) for j in range(samples_per_n)]
    if cross_check:
        worst = family_deviation(points)
        if worst > tol:
            logger.warning("Family closed form deviates from quadrature by %.3e", worst)
    return points


def boundary_gap(table: SweepTable, points: Sequence[DiagramPoint]) -> float:
    """
    Smallest height of the points above the supporting lines of the solved rows,
    min over rows r and points p of (y_p + mu_r x_p) - (y_r + mu_r x_r).
    """
    rows = table.converged_rows
    if not rows or not points:
        return math.inf
    mu = np.array([r.mu for r in rows])
    level = np.array([r.y + r.mu * r.x for r in rows])
    px = np.array([p.x for p in points])
    py = np.array([p.y for p in points])
    gaps = py[None, :] + mu[:, None] * px[None, :] - level[:, None]
    return float(gaps.min())


def boundary_violations(table: SweepTable, points: Sequence[DiagramPoint], slack: float = 1e-6
                        ) -> List[Tuple[float, DiagramPoint]]:
    out = []
    for r in table.converged_rows:
        level = r.y + r.mu * r.x
        out += [(r.mu, p) for p in points if p.y + r.mu * p.x < level - slack]
    return out


def asymptote_metrics(mu: Union[float, OptimalShape], solver: Optional[ShapeSolver] = None
                      ) -> Tuple[float, float, float]:
    """(E / sqrt(mu), A sqrt(mu), x y) of the optimum at mu"""
    shape = mu if isinstance(mu, OptimalShape) else (solver or ShapeSolver()).solve(mu)
    root = math.sqrt(shape.mu)
    return shape.f.energy / root, shape.f.area * root, shape.diagram.x * shape.diagram.y


def asymptotic_ratios(shape: OptimalShape) -> Dict[str, float]:
    """Ratios that tend to 1 as mu grows"""
    rho = rho_constant()
    root = math.sqrt(shape.mu)
    p = shape.params
    ratios = {
        "energy": shape.f.energy / (rho * root),
        "area": shape.f.area * root / rho,
        "lambda": 2.0 * math.pi * shape.lam / (rho * root),
        "k_M": shape.k_M / math.sqrt(math.pi * shape.mu),
        "m": p.m / 0.5,
        "xy": shape.diagram.x * shape.diagram.y / (rho / math.pi) ** 2,
    }
    if shape.L is not None:
        ratios["L"] = shape.L / math.pi
    if shape.s1 is not None:
        ratios["s1"] = shape.s1 * p.omega / complete_elliptic_K(0.5)
    return ratios
