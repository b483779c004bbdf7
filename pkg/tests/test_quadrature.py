"""Checks of the Gauss-Kronrod constants and the adaptive/Euler drivers."""

import math

import numpy as np
import pytest

from sinelaw.errors import ConvergenceError
from sinelaw.quadrature import QuadConfig, euler_alternating, gk15, integrate


def test_gk15_exact_for_monomials():
    # the 15-point Kronrod rule integrates degree <= 22 exactly; any typo
    # in the frozen nodes/weights breaks this immediately
    for deg in range(0, 23):
        v, _ = gk15(lambda x, d=deg: x ** d, 0.0, 1.0)
        assert v == pytest.approx(1.0 / (deg + 1), abs=5e-16)


def test_gk15_error_estimate_is_conservative():
    v, e = gk15(np.sin, 0.0, 1.0)
    true = 1.0 - math.cos(1.0)
    assert abs(v - true) <= max(e, 1e-15)


def test_integrate_smooth():
    v, e, n = integrate(lambda x: np.exp(-x * x), 0.0, 10.0, 1e-12)
    assert v == pytest.approx(math.sqrt(math.pi) / 2.0, abs=1e-12)
    assert e >= abs(v - math.sqrt(math.pi) / 2.0)


def test_integrate_integrable_singularity():
    v, e, n = integrate(lambda x: 1.0 / np.sqrt(np.maximum(x, 1e-300)),
                        0.0, 1.0, 1e-9, max_panels=20000)
    assert v == pytest.approx(2.0, abs=1e-6)


def test_integrate_budget_exhaustion_raises_with_best():
    with pytest.raises(ConvergenceError) as ei:
        integrate(lambda x: np.cos(1000.0 * x), 0.0, 1.0, 1e-14, max_panels=3)
    assert ei.value.best is not None
    assert ei.value.error_bound is not None


def test_euler_alternating_slow_series():
    # sum (-1)^m / (m+1) = ln 2; raw convergence is hopeless at 1e-10
    v, inc, terms = euler_alternating(lambda m: (-1.0) ** m / (m + 1.0),
                                      1e-12, max_terms=200)
    assert v == pytest.approx(math.log(2.0), abs=1e-10)
    assert terms < 60


def test_euler_alternating_fast_series_uses_raw_sum():
    # geometric decay: the raw partial sum is returned and is accurate
    v, inc, terms = euler_alternating(lambda m: (-0.25) ** m, 1e-13,
                                      max_terms=100)
    assert v == pytest.approx(0.8, abs=1e-12)


def test_euler_alternating_failure():
    # tolerance unreachable within the term budget
    with pytest.raises(ConvergenceError):
        euler_alternating(lambda m: (-1.0) ** m / (m + 1.0), 1e-30,
                          max_terms=12)


def test_quadconfig_validation():
    with pytest.raises(ValueError):
        QuadConfig(abs_tol=0.0)
    with pytest.raises(ValueError):
        QuadConfig(max_panels=0)
    cfg = QuadConfig()
    assert cfg.abs_tol == 1e-10 and cfg.rel_tol == 1e-10
    assert cfg.max_panels == 10_000 and cfg.truncation_tail_tol == 1e-12
