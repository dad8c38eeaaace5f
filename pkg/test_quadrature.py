#!/usr/bin/env python3
"""Tests for the Gauss-Kronrod and Simpson helpers"""

import math

import numpy as np
import pytest

from errors import NonConvergenceError
from quadrature import (
    cumulative_simpson,
    gauss_kronrod,
    integrate,
    periodic_derivative,
    periodic_trapezoid,
)


def test_single_panel_is_exact_for_polynomials():
    value, err = gauss_kronrod(lambda x: x ** 10 - 3 * x ** 3, 0.0, 2.0)
    assert value == pytest.approx(2.0 ** 11 / 11 - 0.75 * 2.0 ** 4, rel=1e-14)
    assert err < 1e-10


def test_adaptive_integration():
    assert integrate(np.exp, 0.0, 1.0) == pytest.approx(math.e - 1.0, abs=1e-13)
    assert integrate(lambda x: np.sqrt(x), 0.0, 1.0, abs_tol=1e-10) == pytest.approx(2.0 / 3.0, abs=1e-9)
    assert integrate(np.sin, math.pi, 0.0) == pytest.approx(-2.0, abs=1e-13)
    assert integrate(np.sin, 1.0, 1.0) == 0.0


def test_panel_limit_raises():
    with pytest.raises(NonConvergenceError):
        integrate(lambda x: np.sign(x - 0.123456789), 0.0, 1.0, abs_tol=1e-16, rel_tol=0.0, limit=8)


@pytest.mark.parametrize("n, tol", [(10, 1e-4), (11, 1e-4), (400, 1e-9), (401, 1e-9)])
def test_cumulative_simpson(n, tol):
    s = np.linspace(0.0, 2.0, n + 1)
    run = cumulative_simpson(np.cos(s), s[1] - s[0])
    np.testing.assert_allclose(run, np.sin(s), atol=tol)
    assert run[0] == 0.0


def test_periodic_rules():
    n = 256
    t = 2.0 * math.pi * np.arange(n) / n
    h = 2.0 * math.pi / n
    np.testing.assert_allclose(periodic_derivative(np.sin(3 * t), h), 3 * np.cos(3 * t), atol=1e-5)
    assert periodic_trapezoid(np.cos(t) ** 2, h) == pytest.approx(math.pi, abs=1e-13)


if __name__ == "__main__":
    pytest.main([__file__])
