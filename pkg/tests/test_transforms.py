"""Transform tests against closed forms and independent quadrature oracles.

Golden pairs (both verified in 40-digit arithmetic before freezing):
  H0(e^{-r^2/2})(t)            = e^{-t^2/2}
  H0(e^{-a r})(t), a=sqrt(pi/2) = a / (t^2 + pi/2)^{3/2}
  F1(1/(x^2+a^2))(t)           = sqrt(pi)/(a sqrt 2) e^{-a|t|}
"""

import math

import numpy as np
import pytest

from sinelaw.quadrature import QuadConfig
from sinelaw.transforms import (Decay, RealFunction, fourier1,
                                fourier2_radial_crosscheck, hankel0)

A = math.sqrt(math.pi / 2.0)


def gauss_fn():
    return RealFunction(eval=lambda r: np.exp(-0.5 * np.square(r)),
                        decay=Decay("gaussian", 1.0))


def exp_fn():
    return RealFunction(eval=lambda r: np.exp(-A * r),
                        decay=Decay("exponential", A))


def lorentz_fn():
    return RealFunction(eval=lambda x: 1.0 / (np.square(x) + A * A),
                        decay=Decay("algebraic", 2.0))


def h0_of_exp_fn():
    return RealFunction(eval=lambda t: A / (np.square(t) + math.pi / 2.0) ** 1.5,
                        decay=Decay("algebraic", 3.0))


@pytest.mark.parametrize("t", [0.0, 1.0, 2.0, 4.0])
def test_hankel_gaussian_self_dual(t):
    assert hankel0(gauss_fn(), t) == pytest.approx(math.exp(-0.5 * t * t),
                                                   abs=1e-8)


@pytest.mark.parametrize("t", [0.0, 0.5, 1.0, 2.0, 4.0])
def test_hankel_exponential_closed_form(t):
    want = A / (t * t + math.pi / 2.0) ** 1.5
    assert hankel0(exp_fn(), t) == pytest.approx(want, abs=1e-8)


def test_hankel_at_zero_is_weighted_integral():
    # direct quadrature oracle of int r g(r) dr
    from sinelaw.quadrature import integrate
    g = gauss_fn()
    direct, _, _ = integrate(lambda r: r * np.exp(-0.5 * np.square(r)),
                             0.0, 12.0, 1e-13)
    assert hankel0(g, 0.0) == pytest.approx(direct, abs=1e-10)


def test_hankel_even_in_t():
    g = gauss_fn()
    assert hankel0(g, -2.0) == hankel0(g, 2.0)
    assert fourier1(gauss_fn(), -1.5) == fourier1(gauss_fn(), 1.5)


def test_hankel_rejects_nonintegrable_decay():
    bad = RealFunction(eval=lambda r: 1.0 / (1.0 + np.square(r)),
                       decay=Decay("algebraic", 2.0))
    with pytest.raises(ValueError):
        hankel0(bad, 1.0)
    worse = RealFunction(eval=lambda r: 1.0 / (1.0 + np.abs(r)),
                         decay=Decay("algebraic", 1.0))
    with pytest.raises(ValueError):
        fourier1(worse, 1.0)


def test_hankel_error_bound_honest_on_goldens():
    for g, exact in [(gauss_fn(), lambda t: math.exp(-0.5 * t * t)),
                     (exp_fn(), lambda t: A / (t * t + math.pi / 2) ** 1.5)]:
        for t in (0.0, 0.5, 1.0, 2.0, 4.0, 7.0):
            v, e = hankel0(g, t, full_output=True)
            assert e >= abs(v - exact(t)), f"t={t}"


@pytest.mark.parametrize("t", [0.0, 0.5, 2.0])
def test_fourier_lorentzian_pair(t):
    want = math.sqrt(math.pi) / (A * math.sqrt(2.0)) * math.exp(-A * abs(t))
    v, e = fourier1(lorentz_fn(), t, full_output=True)
    assert v == pytest.approx(want, abs=1e-8)
    assert e >= abs(v - want)


@pytest.mark.parametrize("t", [0.0, 1.0, 2.0])
def test_fourier_gaussian_self_dual(t):
    # oracle: dense panel quadrature of the cosine integral, independent
    # of the zero-split machinery
    from sinelaw.quadrature import integrate
    direct, _, _ = integrate(
        lambda x: np.exp(-0.5 * np.square(x)) * np.cos(t * x), 0.0, 14.0,
        1e-13)
    want = math.sqrt(2.0 / math.pi) * direct
    assert fourier1(gauss_fn(), t) == pytest.approx(want, abs=1e-9)
    assert want == pytest.approx(math.exp(-0.5 * t * t), abs=1e-12)


def test_fourier_at_zero_is_plain_integral():
    # sqrt(2/pi) * int theta_a = sqrt(2/pi) * (pi/2)/a
    want = math.sqrt(2.0 / math.pi) * (math.pi / 2.0) / A
    assert fourier1(lorentz_fn(), 0.0) == pytest.approx(want, abs=1e-10)


def test_transform_linearity():
    g1, g2 = gauss_fn(), exp_fn()
    mix = RealFunction(
        eval=lambda r: 2.0 * np.exp(-0.5 * np.square(r)) - 0.7 * np.exp(-A * r),
        decay=Decay("exponential", min(A, 1.0)))
    for t in (0.3, 1.7):
        lhs = hankel0(mix, t)
        rhs = 2.0 * hankel0(g1, t) - 0.7 * hankel0(g2, t)
        assert lhs == pytest.approx(rhs, abs=2e-10)


def test_hankel_self_inversion_numeric_nested():
    # inner transform at default accuracy, outer relaxed so its panels
    # do not chase the inner noise; both golden shapes
    cfg_in = QuadConfig()
    cfg_out = QuadConfig(abs_tol=1e-8, rel_tol=1e-8, truncation_tail_tol=1e-9)

    def nest(g, decay):
        def ev(t):
            tt = np.atleast_1d(np.asarray(t, dtype=np.float64))
            out = np.array([hankel0(g, float(x), cfg_in) for x in tt])
            return out.reshape(np.shape(t)) if np.ndim(t) else float(out[0])
        return RealFunction(eval=ev, decay=decay)

    for r in (0.5, 1.0, 2.0):
        got = hankel0(nest(gauss_fn(), Decay("gaussian", 1.0)), r, cfg_out)
        assert got == pytest.approx(math.exp(-0.5 * r * r), abs=1e-7)
    for r in (0.5, 1.0, 2.0):
        got = hankel0(nest(exp_fn(), Decay("algebraic", 3.0)), r, cfg_out)
        assert got == pytest.approx(math.exp(-A * r), abs=1e-7)


@pytest.mark.parametrize("case", [
    ("gauss", 1.0, math.exp(-0.5)),
    ("gauss", 0.0, 1.0),
    ("exp", 2.0, A / (4.0 + math.pi / 2.0) ** 1.5),
])
def test_radial_crosscheck(case):
    kind, t, exact = case
    G = gauss_fn() if kind == "gauss" else exp_fn()
    direct, via_hankel = fourier2_radial_crosscheck(G, t)
    assert direct == pytest.approx(exact, abs=1e-5)
    assert via_hankel == pytest.approx(exact, abs=1e-6)
    assert direct == pytest.approx(via_hankel, abs=1e-5)


def test_scalar_eval_realfunction_wrapping():
    # scalar-only evaluator goes through the python fallback loop
    g = RealFunction(eval=lambda r: math.exp(-0.5 * r * r),
                     decay=Decay("gaussian", 1.0))
    assert hankel0(g, 1.0) == pytest.approx(math.exp(-0.5), abs=1e-8)


def test_concurrent_transform_calls_agree():
    from concurrent.futures import ThreadPoolExecutor
    g = gauss_fn()
    with ThreadPoolExecutor(max_workers=8) as ex:
        vals = list(ex.map(lambda t: hankel0(g, t), [1.3] * 24))
    assert len(set(vals)) == 1


def test_finite_support_hint():
    g = RealFunction(eval=lambda r: np.where(r < 1.0, 1.0, 0.0),
                     decay=Decay("gaussian", 1.0), support=(0.0, 1.0))
    # H0(1_{r<1})(0) = 1/2
    assert hankel0(g, 0.0) == pytest.approx(0.5, abs=1e-9)
