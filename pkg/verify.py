#!/usr/bin/env python3
"""
Invariant suite behind `main.py verify`
Runs named groups of numerical checks and prints a pass/fail table
"""

import math
import time
import logging
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence

import numpy as np
from scipy.integrate import quad

from convex_geometry import (
    FourierSeries,
    SupportBody,
    VectorField,
    apply_G,
    curve_functionals,
    family_body,
    functionals_from_support,
    random_support_body,
    sample_grid,
    shape_derivatives,
)
from diagram import asymptote_metrics, family_deviation, find_segment_onset, interior_families
from elastica import build_params, curvature_at, first_integral_residual, integrate_curvature_ode
from shooting import ShapeSolver, ShootingMode, check_bounds, disk_perturbation_gain
from special_functions import complete_elliptic_E, complete_elliptic_K, jacobi_elliptic, rho_constant

logger = logging.getLogger(__name__)

ONSET_TARGET = 3.3425
ONSET_TOLERANCE = 0.01


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str
    seconds: float = 0.0


def _timed(name: str, check: Callable[[], str]) -> CheckResult:
    start = time.time()
    try:
        detail = check()
        passed = True
    except AssertionError as e:
        detail, passed = str(e) or "assertion failed", False
    except Exception as e:
        detail, passed = f"{type(e).__name__}: {e}", False
    return CheckResult(name, passed, detail, time.time() - start)


def _require(condition: bool, message: str):
    if not condition:
        raise AssertionError(message)


# ----------------------------------------------------------------------------
# Groups
# ----------------------------------------------------------------------------

def check_special_functions() -> List[CheckResult]:
    def k_and_e() -> str:
        worst = 0.0
        for m in np.append(np.linspace(0.0, 0.9, 10), 0.99):
            k_ref = quad(lambda t: 1.0 / math.sqrt(1.0 - m * math.sin(t) ** 2), 0.0, math.pi / 2,
                         epsabs=1e-14, epsrel=1e-14)[0]
            e_ref = quad(lambda t: math.sqrt(1.0 - m * math.sin(t) ** 2), 0.0, math.pi / 2,
                         epsabs=1e-14, epsrel=1e-14)[0]
            worst = max(worst, abs(complete_elliptic_K(m) - k_ref), abs(complete_elliptic_E(m) - e_ref))
        _require(worst <= 1e-10, f"K/E deviate from quadrature by {worst:.2e}")
        return f"max deviation {worst:.1e}"

    def identities() -> str:
        rng = np.random.default_rng(7)
        u = rng.uniform(-20.0, 20.0, 10_000)
        worst = 0.0
        for m in rng.uniform(0.0, 1.0, 20):
            sn, cn, dn = jacobi_elliptic(u, m)
            worst = max(worst, np.max(np.abs(sn ** 2 + cn ** 2 - 1)), np.max(np.abs(dn ** 2 + m * sn ** 2 - 1)))
        _require(worst <= 1e-11, f"identity error {worst:.2e}")
        zero = abs(jacobi_elliptic(complete_elliptic_K(0.5), 0.5).cn)
        _require(zero <= 1e-10, f"cn(K(1/2)|1/2) = {zero:.2e}")
        return f"identity error {worst:.1e}, cn(K) = {zero:.1e}"

    def rho() -> str:
        value = rho_constant()
        _require(abs(value - 4.2473) <= 5e-4, f"rho = {value}")
        return f"rho = {value:.6f}"

    return [_timed("K and E against quadrature", k_and_e),
            _timed("Jacobi identities", identities),
            _timed("asymptotic constant rho", rho)]


def check_geometry() -> List[CheckResult]:
    def reference_bodies() -> str:
        disk = functionals_from_support(SupportBody.disk())
        _require(abs(disk.area - math.pi) < 1e-12 and abs(disk.energy - math.pi) < 1e-12, "disk functionals")
        f = functionals_from_support(family_body(2, 0.1))
        _require(abs(f.area - math.pi * (1 - 1.5 * 0.01)) < 1e-10, f"area {f.area}")
        _require(abs(f.energy - math.pi / math.sqrt(1 - 0.09)) < 1e-10, f"energy {f.energy}")
        h = apply_G(FourierSeries(1.0, [0.0, 1.0], [0.0, 0.0]))
        _require(abs(h.cos[1] + 1.0 / 3.0) < 1e-15, "G on cos 2t")
        return "disk, h = 1 + 0.1 cos 2t, G(1 + cos 2t)"

    def gage() -> str:
        rng = np.random.default_rng(11)
        worst = math.inf
        for _ in range(1000):
            body = random_support_body(rng)
            point = functionals_from_support(body).diagram_point()
            _require(point.is_admissible(), f"inadmissible point {point}")
            # strict away from the disk: xy - 1 grows at least quadratically in the harmonics
            gap = point.x * point.y - 1.0
            _require(gap >= 0.1 * body.max_harmonic() ** 2 - 1e-9, f"xy - 1 = {gap:.2e} for a non-disk body")
            worst = min(worst, gap)
        return f"1000 random bodies, min(xy - 1) = {worst:.2e}"

    def derivatives() -> str:
        rng = np.random.default_rng(5)
        worst = 0.0
        for _ in range(20):
            body = random_support_body(rng, order=4, scale=0.2)
            field = VectorField(FourierSeries(0.0, rng.normal(size=3), rng.normal(size=3)),
                                FourierSeries(0.0, rng.normal(size=3), rng.normal(size=3)))
            exact = shape_derivatives(body, field)
            t = sample_grid(2048)
            base, push = body.boundary_points(t), field.evaluate(t)
            eps = 1e-5
            plus = curve_functionals(base + eps * push)
            minus = curve_functionals(base - eps * push)
            fd = ((plus.area - minus.area) / (2 * eps), (plus.perimeter - minus.perimeter) / (2 * eps),
                  (plus.energy - minus.energy) / (2 * eps))
            for a, b in zip(exact, fd):
                worst = max(worst, abs(a - b) / max(abs(b), 1.0))
        _require(worst <= 1e-4, f"shape derivative mismatch {worst:.2e}")
        shift = shape_derivatives(family_body(3, 0.05), VectorField.translation(0.3, -0.7))
        _require(max(abs(v) for v in shift) <= 1e-9, f"translation gives {shift}")
        return f"relative error {worst:.1e}"

    return [_timed("reference functionals", reference_bodies),
            _timed("Gage and isoperimetric inequalities", gage),
            _timed("shape derivatives against finite differences", derivatives)]


def check_elastica(solver: ShapeSolver) -> List[CheckResult]:
    def disk_branch() -> str:
        p = build_params(2.0, 1.5, 1.0)
        _require(p.degenerate, "(2, 1.5, 1) should be the constant branch")
        return "constant branch at (mu, lambda, k_M) = (2, 1.5, 1)"

    def closed_form() -> str:
        shape = solver.solve(4.0)
        p = shape.params
        s = np.linspace(0.0, 2.0 * p.period, 100)
        res = float(np.max(np.abs(first_integral_residual(p, s))))
        _require(res <= 1e-8 * (1 + p.k_M ** 4), f"first integral residual {res:.2e}")
        grid, k_ode, _ = integrate_curvature_ode(p, 1.0, 4000)
        ode = float(np.max(np.abs(k_ode - curvature_at(p, grid))))
        _require(ode <= 1e-8, f"RK4 differs from the closed form by {ode:.2e}")
        return f"residual {res:.1e}, RK4 gap {ode:.1e}"

    return [_timed("constant-curvature branch", disk_branch),
            _timed("closed form at mu = 4", closed_form)]


def check_shooting(solver: ShapeSolver) -> List[CheckResult]:
    def disk_regime() -> str:
        for mu in (0.5, 1.0, 2.0, 3.0):
            shape = solver.solve(mu)
            _require(shape.mode is ShootingMode.DISK, f"mu={mu} gave {shape.mode.value}")
            _require(abs(shape.k_M - 1) <= 1e-6 and abs(shape.lam - (mu - 0.5)) <= 1e-6, f"mu={mu}")
            _require(abs(shape.diagram.x - 1) <= 1e-8 and abs(shape.diagram.y - 1) <= 1e-8,
                     f"diagram point {shape.diagram}")
        return "mu in {0.5, 1, 2, 3}"

    def threshold() -> str:
        low = disk_perturbation_gain(2.8, 0.05)
        high = disk_perturbation_gain(3.2, 0.05)
        _require(low > 0 > high, f"gains {low:.3e} (2.8), {high:.3e} (3.2)")
        return f"gain {low:.2e} at 2.8, {high:.2e} at 3.2"

    def stadium() -> str:
        shape = solver.solve(4.0)
        _require(shape.objective < 5 * math.pi, f"objective {shape.objective}")
        report = check_bounds(shape)
        _require(report.passed, f"failed bounds {[c.name for c in report.failures()]}")
        return f"objective {shape.objective:.8f} < 5 pi"

    def large_mu() -> str:
        shape = solver.solve(100.0)
        report = check_bounds(shape)
        _require(shape.segment_count == 2, f"{shape.segment_count} segments")
        _require(report.passed, f"failed bounds {[c.name for c in report.failures()]}")
        return f"mu = 100, L = {shape.L:.6f}"

    return [_timed("disk regime", disk_regime),
            _timed("disk stability threshold", threshold),
            _timed("stadium comparison at mu = 4", stadium),
            _timed("segments at mu = 100", large_mu)]


def check_diagram(solver: ShapeSolver) -> List[CheckResult]:
    def families() -> str:
        worst = family_deviation(interior_families(6, 10, cross_check=False))
        _require(worst <= 1e-8, f"family closed form off by {worst:.2e}")
        return f"max deviation {worst:.1e}"

    def asymptotics() -> str:
        rho = rho_constant()
        e_ratio, a_ratio, xy = asymptote_metrics(1e4, solver)
        _require(abs(e_ratio / rho - 1) <= 0.02, f"E/sqrt(mu) = {e_ratio:.4f}")
        _require(abs(a_ratio / rho - 1) <= 0.02, f"A sqrt(mu) = {a_ratio:.4f}")
        _require(abs(xy / (rho / math.pi) ** 2 - 1) <= 0.03, f"xy = {xy:.4f}")
        return f"E/sqrt(mu) = {e_ratio:.4f}, A sqrt(mu) = {a_ratio:.4f}, xy = {xy:.4f}"

    return [_timed("interior families", families),
            _timed("large-mu asymptotics", asymptotics)]


def check_onset(solver: ShapeSolver) -> List[CheckResult]:
    def onset() -> str:
        value = find_segment_onset(solver=solver)
        _require(abs(value - ONSET_TARGET) <= ONSET_TOLERANCE, f"onset {value:.5f}")
        return f"mu* = {value:.5f} (expected {ONSET_TARGET} +/- {ONSET_TOLERANCE})"

    return [_timed("segment onset", onset)]


GROUPS: Dict[str, Callable[[ShapeSolver], List[CheckResult]]] = {
    "special-functions": lambda solver: check_special_functions(),
    "geometry": lambda solver: check_geometry(),
    "elastica": check_elastica,
    "shooting": check_shooting,
    "diagram": check_diagram,
    "onset": check_onset,
}


def run_verify(only: Optional[Sequence[str]] = None, solver: Optional[ShapeSolver] = None) -> List[CheckResult]:
    names = list(only) if only else list(GROUPS)
    unknown = [n for n in names if n not in GROUPS]
    if unknown:
        raise ValueError(f"unknown verify groups {unknown}; choose from {list(GROUPS)}")
    solver = solver or ShapeSolver()
    results = []
    for name in names:
        logger.info("Running %s checks", name)
        for result in GROUPS[name](solver):
            result.name = f"{name}: {result.name}"
            results.append(result)
    return results


def print_header(text: str):
    print("\n" + "=" * 60)
    print(text)
    print("=" * 60)


def print_results(results: List[CheckResult]) -> bool:
    print_header("Invariant suite")
    for r in results:
        mark = "✓" if r.passed else "✗"
        print(f"  {mark} {r.name:<55} {r.seconds:6.2f}s  {r.detail}")
    passed = sum(r.passed for r in results)
    print_header(f"{passed}/{len(results)} checks passed")
    for r in results:
        if not r.passed:
            print(f"  ✗ FAILED: {r.name}")
    return passed == len(results)
