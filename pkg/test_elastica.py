#!/usr/bin/env python3
"""
Tests for the closed-form curvature and its constants
Solved parameters come from the shared session solver
"""

import math

import numpy as np
import pytest

from elastica import (
    build_params,
    curvature_at,
    curvature_derivative,
    first_integral_polynomial,
    first_integral_residual,
    first_zero,
    integrate_curvature_ode,
    theta_integral,
)
from errors import InconsistentParametersError
from special_functions import complete_elliptic_K


class TestBuildParams:
    def test_constant_branch(self):
        p = build_params(2.0, 1.5, 1.0)
        assert p.degenerate
        assert p.m == 0.0
        s = np.linspace(0.0, 3.0, 7)
        np.testing.assert_array_equal(curvature_at(p, s), 1.0)
        np.testing.assert_array_equal(first_integral_residual(p, s), 0.0)
        assert first_zero(p, math.pi / 2) is None

    @pytest.mark.parametrize("mu", [0.5, 1.0, 2.0, 3.0])
    def test_disk_keeps_signed_R0_squared(self, mu):
        # disk: lambda = mu - 1/2, k = 1, R0^2 = 1 - 2/mu
        p = build_params(mu, mu - 0.5, 1.0)
        assert p.R0_sq == pytest.approx(1.0 - 2.0 / mu, abs=1e-14)
        assert mu ** 2 * (p.R0_sq - (p.lam / mu) ** 2) == pytest.approx(p.C, abs=1e-12)
        assert p.R0 == pytest.approx(math.sqrt(max(1.0 - 2.0 / mu, 0.0)), abs=1e-14)

    def test_negative_lambda_only_on_constant_branch(self):
        # -k^3/2 - lambda k + mu = 0 at k = 1, mu = 0.25
        assert build_params(0.25, -0.25, 1.0).degenerate
        with pytest.raises(InconsistentParametersError):
            build_params(0.25, -0.5, 1.0)

    @pytest.mark.parametrize("mu, lam, k_M", [
        (0.0, 1.0, 1.0),
        (-1.0, 1.0, 1.0),
        (1.0, 1.0, 0.0),
        (1.0, float("nan"), 1.0),
        (2.0, 0.0, 0.1),  # k_M below the equilibrium is a minimum, not a maximum
    ])
    def test_inconsistent(self, mu, lam, k_M):
        with pytest.raises(InconsistentParametersError):
            build_params(mu, lam, k_M)

    def test_identities_at_solved_point(self, shape4):
        p = shape4.params
        mu, lam = p.mu, p.lam
        assert p.C == pytest.approx(0.25 * p.k_M ** 4 + lam * p.k_M ** 2 - 2 * mu * p.k_M, abs=1e-12)
        assert abs(first_integral_polynomial(mu, lam, p.C, p.k_M)) <= 1e-10
        assert abs(first_integral_polynomial(mu, lam, p.C, p.k_m)) <= 1e-10
        quadratic = p.gamma ** 2 + (3 * p.sigma ** 2 + p.delta ** 2 + 2 * lam) / (p.sigma * p.delta) * p.gamma + 1
        assert abs(quadratic) <= 1e-10
        assert -1.0 < p.gamma < 0.0
        assert 0.0 <= p.m < 1.0
        assert mu ** 2 * (p.R0 ** 2 - (lam / mu) ** 2) == pytest.approx(p.C, abs=1e-9)

    def test_record_uses_lambda_key(self, shape4):
        record = shape4.params.to_dict()
        assert record["lambda"] == shape4.lam
        assert "lam" not in record


class TestCurvature:
    def test_extremes(self, shape4):
        p = shape4.params
        assert curvature_at(p, 0.0) == pytest.approx(p.k_M, abs=1e-12)
        assert curvature_at(p, 2 * complete_elliptic_K(p.m) / p.omega) == pytest.approx(p.k_m, abs=1e-9)
        assert curvature_derivative(p, 0.0) == 0.0

    def test_first_integral(self, shape4):
        p = shape4.params
        s = np.random.default_rng(0).uniform(0.0, 2 * p.period, 100)
        assert np.max(np.abs(first_integral_residual(p, s))) <= 1e-8 * (1 + p.k_M ** 4)

    def test_second_derivative_matches_equation(self, shape4):
        p = shape4.params
        h = 1e-4
        for s in np.linspace(0.05, shape4.s1 - 0.05, 9):
            k = curvature_at(p, s)
            fd = (curvature_at(p, s + h) - 2 * k + curvature_at(p, s - h)) / h ** 2
            assert fd == pytest.approx(-0.5 * k ** 3 - p.lam * k + p.mu, abs=1e-5)

    def test_periodicity(self, shape4):
        p = shape4.params
        s = np.linspace(0.0, 2.0, 21)
        np.testing.assert_allclose(curvature_at(p, s + 4 * complete_elliptic_K(p.m) / p.omega),
                                   curvature_at(p, s), atol=1e-8)

    def test_rk4_reference(self, shape4):
        p = shape4.params
        s, k, dk = integrate_curvature_ode(p, 1.0, 4000)
        np.testing.assert_allclose(k, curvature_at(p, s), atol=1e-8)
        np.testing.assert_allclose(dk, curvature_derivative(p, s), atol=1e-7)


class TestFirstZero:
    def test_segment_endpoint(self, shape8):
        p = shape8.params
        s1 = first_zero(p, math.pi / 2)
        assert s1 is not None and 0.0 < s1 < math.pi / 2
        assert s1 == pytest.approx(shape8.s1, abs=1e-12)
        assert abs(curvature_at(p, s1)) <= 1e-12
        assert curvature_derivative(p, s1) == pytest.approx(-math.sqrt(p.C), abs=1e-8)
        assert theta_integral(p, s1) == pytest.approx(math.pi / 2, abs=1e-8)

    def test_no_zero_for_positive_minimum(self):
        p = build_params(2.0, 1.5, 1.1)
        assert p.k_m > 0.0
        assert first_zero(p, math.pi / 2) is None

    def test_zero_beyond_search_window(self, shape8):
        assert first_zero(shape8.params, 0.5 * shape8.s1) is None


def test_theta_integral_rejects_negative_length():
    with pytest.raises(ValueError):
        theta_integral(build_params(2.0, 1.5, 1.0), -1.0)


if __name__ == "__main__":
    pytest.main([__file__])
