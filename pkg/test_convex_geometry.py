#!/usr/bin/env python3
"""
Tests for support functions, tangent-angle curves and shape derivatives
"""

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from convex_geometry import (
    DiagramPoint,
    FourierSeries,
    Polyline,
    SupportBody,
    ThetaFunction,
    VectorField,
    apply_G,
    curve_functionals,
    family_body,
    functionals_from_support,
    functionals_from_theta,
    minkowski_combine,
    random_support_body,
    reconstruct_polyline,
    sample_grid,
    shape_derivatives,
    theta_from_support,
)
from errors import ConstraintViolationError, NotStrictlyConvexError, SolvabilityError


def bodies(draw_seed):
    return random_support_body(np.random.default_rng(draw_seed))


class TestFunctionals:
    def test_disk(self):
        f = functionals_from_support(SupportBody.disk())
        assert f.area == pytest.approx(math.pi, abs=1e-12)
        assert f.perimeter == pytest.approx(2 * math.pi, abs=1e-12)
        assert f.energy == pytest.approx(math.pi, abs=1e-12)
        point = f.diagram_point()
        assert (point.x, point.y) == (pytest.approx(1.0), pytest.approx(1.0))

    def test_two_lobe_family(self):
        f = functionals_from_support(family_body(2, 0.1))
        assert f.area == pytest.approx(math.pi * (1 - 1.5 * 0.01), abs=1e-10)
        assert f.energy == pytest.approx(math.pi / math.sqrt(1 - 0.09), abs=1e-10)

    def test_is_convex(self):
        assert family_body(2, 0.1).is_convex()
        # phi = 1 - 1.5 cos 2t changes sign
        assert not family_body(2, 0.5).is_convex()

    def test_not_strictly_convex(self):
        # phi = 1 - 3 cos 2t / 3 reaches zero
        with pytest.raises(NotStrictlyConvexError):
            functionals_from_support(family_body(2, 1.0 / 3.0))

    def test_radius_of_curvature_and_text_format(self):
        body = SupportBody(1.0, [0.0, 0.05, -0.01], [0.0, 0.02, 0.0])
        phi = body.radius_of_curvature()
        np.testing.assert_allclose(phi.cos, [0.0, -0.15, 0.08])
        parsed = SupportBody.from_text("# two harmonics\n" + body.to_text())
        np.testing.assert_array_equal(parsed.cos, body.cos)
        np.testing.assert_array_equal(parsed.sin, body.sin)
        assert parsed.a0 == body.a0

    @pytest.mark.parametrize("text", ["1 0.1 0.0\n", "a0 1\n2 0.1\n", "a0 1\n2 0 0\n2 0 0\n", "a0 1\n0 1 1\n"])
    def test_text_format_errors(self, text):
        with pytest.raises(ValueError):
            SupportBody.from_text(text)


@given(st.integers(min_value=0, max_value=10_000))
@settings(max_examples=1000, deadline=None)
def test_inequalities_on_random_bodies(seed):
    body = bodies(seed)
    f = functionals_from_support(body)
    P = f.perimeter
    assert 4 * math.pi * f.area / P ** 2 <= 1 + 1e-9
    assert f.energy * P >= 2 * math.pi ** 2 - 1e-6
    assert f.energy * f.area / P >= math.pi / 2 - 1e-9
    assert f.diagram_point().is_admissible()
    # near-equality only for nearly round bodies
    point = f.diagram_point()
    assert point.x * point.y - 1 >= 0.1 * body.max_harmonic() ** 2 - 1e-9


@given(st.integers(min_value=0, max_value=10_000), st.integers(min_value=0, max_value=10_000),
       st.floats(min_value=0.0, max_value=1.0))
@settings(max_examples=40, deadline=None)
def test_energy_is_convex_under_minkowski_combination(seed0, seed1, tau):
    b0, b1 = bodies(seed0), bodies(seed1)
    mixed = functionals_from_support(minkowski_combine(b0, b1, tau)).energy
    ends = (1 - tau) * functionals_from_support(b0).energy + tau * functionals_from_support(b1).energy
    assert mixed <= ends + 1e-9


def test_gage_equality_only_for_disk():
    f = functionals_from_support(family_body(3, 0.02))
    assert f.energy * f.area / f.perimeter > math.pi / 2 + 1e-9


@pytest.mark.parametrize("scale", [1.0, 1e-1, 1e-2, 1e-3])
def test_gage_gap_shrinks_only_with_the_harmonics(scale):
    base = bodies(17)
    body = SupportBody(1.0, scale * base.cos, scale * base.sin)
    point = functionals_from_support(body).diagram_point()
    gap = point.x * point.y - 1
    assert gap > 1e-6 or body.max_harmonic() <= 1e-3
    assert gap >= 0.1 * body.max_harmonic() ** 2 - 1e-12
    disk = functionals_from_support(SupportBody.disk()).diagram_point()
    assert abs(disk.x * disk.y - 1) <= 1e-12


class TestApplyG:
    def test_inverts_second_order_operator(self):
        h = apply_G(FourierSeries(1.0, [0.0, 1.0], [0.0, 0.0]))
        assert h.cos[1] == pytest.approx(-1.0 / 3.0, abs=1e-15)
        t = sample_grid(64)
        lhs = h.evaluate(t, 2) + h.evaluate(t)
        np.testing.assert_allclose(lhs, 1.0 + np.cos(2 * t), atol=1e-14)

    def test_resonant_harmonic(self):
        with pytest.raises(SolvabilityError):
            apply_G(FourierSeries(1.0, [1e-6], [0.0]))


def test_minkowski_combination_mixes_coefficients():
    b0, b1 = SupportBody.disk(), family_body(2, 0.2)
    mid = minkowski_combine(b0, b1, 0.5)
    assert mid.cos[1] == pytest.approx(0.1)
    assert functionals_from_support(mid).perimeter == pytest.approx(2 * math.pi)
    with pytest.raises(ValueError):
        minkowski_combine(b0, b1, 1.5)


class TestThetaFunction:
    def test_circle(self):
        tf = ThetaFunction.from_function(lambda s: s, 2 * math.pi, 4096)
        poly = reconstruct_polyline(tf)
        assert poly.closure_residual <= 1e-10
        f = functionals_from_theta(tf)
        assert f.area == pytest.approx(math.pi, abs=1e-9)
        assert f.energy == pytest.approx(math.pi, abs=1e-9)
        assert poly.length == pytest.approx(2 * math.pi, abs=1e-5)
        assert poly.shoelace_area() == pytest.approx(math.pi, abs=1e-5)

    def test_decreasing_theta_rejected(self):
        tf = ThetaFunction.from_function(lambda s: s - 0.5 * np.sin(3 * s), 2 * math.pi, 1024)
        with pytest.raises(ConstraintViolationError):
            functionals_from_theta(tf)

    def test_turning_rejected(self):
        tf = ThetaFunction.from_function(lambda s: 0.9 * s, 2 * math.pi, 1024)
        with pytest.raises(ConstraintViolationError):
            tf.validate()

    def test_open_curve_rejected(self):
        # monotone with full turning, but int cos theta = -2 pi J1(0.3)
        tf = ThetaFunction.from_function(lambda s: s + 0.3 * np.sin(s), 2 * math.pi, 1024)
        with pytest.raises(ConstraintViolationError, match="not closed"):
            tf.validate()

    def test_segment_lengths_sum_to_perimeter(self):
        tf = theta_from_support(family_body(2, 0.2))
        poly = reconstruct_polyline(tf)
        assert poly.segment_lengths.sum() == pytest.approx(tf.perimeter, abs=1e-6)

    @pytest.mark.parametrize("seed", [1, 2, 3, 4])
    def test_support_and_theta_representations_agree(self, seed):
        body = bodies(seed)
        a = functionals_from_support(body)
        tf = theta_from_support(body)
        b = functionals_from_theta(tf)
        assert abs(tf.turning - 2 * math.pi) <= 1e-8
        assert reconstruct_polyline(tf).closure_residual <= 1e-6
        assert b.area == pytest.approx(a.area, abs=1e-6)
        assert b.energy == pytest.approx(a.energy, abs=1e-6)

    def test_polyline_closure(self):
        square = Polyline(np.array([[0, 0], [1, 0], [1, 1], [0, 1], [0, 0]], dtype=float))
        assert square.closure_residual == 0.0
        assert square.shoelace_area() == pytest.approx(1.0)


class TestShapeDerivatives:
    def test_translation_invariance(self):
        dA, dP, dE = shape_derivatives(family_body(3, 0.05), VectorField.translation(0.4, -1.1))
        assert max(abs(dA), abs(dP), abs(dE)) <= 1e-9

    def test_dilation(self):
        # X -> (1 + eps) X scales A by (1+eps)^2, P by (1+eps), E by 1/(1+eps)
        body = family_body(2, 0.1)
        f = functionals_from_support(body)
        dA, dP, dE = shape_derivatives(body, VectorField.position(body))
        assert dA == pytest.approx(2 * f.area, rel=1e-9)
        assert dP == pytest.approx(f.perimeter, rel=1e-9)
        assert dE == pytest.approx(-f.energy, rel=1e-9)

    @pytest.mark.parametrize("seed", range(20))
    def test_against_finite_differences(self, seed):
        rng = np.random.default_rng(seed)
        body = random_support_body(rng, order=4, scale=0.2)
        field = VectorField(FourierSeries(0.0, rng.normal(size=3), rng.normal(size=3)),
                            FourierSeries(0.0, rng.normal(size=3), rng.normal(size=3)))
        exact = shape_derivatives(body, field)
        t = sample_grid(2048)
        base, push = body.boundary_points(t), field.evaluate(t)
        eps = 1e-5
        plus, minus = curve_functionals(base + eps * push), curve_functionals(base - eps * push)
        fd = [(plus.area - minus.area) / (2 * eps), (plus.perimeter - minus.perimeter) / (2 * eps),
              (plus.energy - minus.energy) / (2 * eps)]
        for a, b in zip(exact, fd):
            assert abs(a - b) <= 1e-4 * max(abs(b), 1.0)


def test_diagram_point_admissibility():
    assert DiagramPoint(1.0, 1.0).is_admissible()
    assert not DiagramPoint(0.5, 1.5).is_admissible()
    assert not DiagramPoint(1.1, 1.0).is_admissible()


def test_fourier_from_samples():
    t = sample_grid(64)
    series = FourierSeries.from_samples(2.0 + 0.5 * np.cos(2 * t) - 0.25 * np.sin(5 * t), order=6)
    assert series.a0 == pytest.approx(2.0)
    assert series.cos[1] == pytest.approx(0.5)
    assert series.sin[4] == pytest.approx(-0.25)
    assert series.max_harmonic() == pytest.approx(0.5)


if __name__ == "__main__":
    pytest.main([__file__])
