import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import special

from cspoly.errors import DomainError
from cspoly.specfun import (
    airy,
    airy_asymptotic,
    airy_scaled,
    airy_series,
    bernoulli_numbers,
    log_gamma,
)

mpmath.mp.dps = 40

AI0 = 0.355028053887817239
AIP0 = -0.258819403792806798
BI0 = 0.614926627446000736
BIP0 = 0.448288357353826357


# -- log_gamma ---------------------------------------------------------------


def test_bernoulli_small():
    b = bernoulli_numbers(11)
    assert b[:5] == (Fraction(1), Fraction(-1, 2), Fraction(1, 6), Fraction(0), Fraction(-1, 30))
    assert b[10] == Fraction(5, 66)
    assert all(b[k] == 0 for k in (3, 5, 7, 9))


@pytest.mark.parametrize("x, expected", [(1.0, 0.0), (2.0, 0.0), (0.5, 0.5723649429247001), (3.0, math.log(2.0))])
def test_log_gamma_known(x, expected):
    assert log_gamma(x) == pytest.approx(expected, rel=1e-14, abs=1e-16)


@pytest.mark.parametrize("x", [10.3, 1.5, 7.25, 19.9, 123.456, 1e5, 0.01, 0.999, 1.001, 1.999, 2.001])
def test_log_gamma_against_mpmath(x):
    ref = float(mpmath.loggamma(mpmath.mpf(x)))
    assert log_gamma(x) == pytest.approx(ref, rel=1e-13, abs=0.0)


def test_log_gamma_grid_relative_accuracy():
    xs = np.concatenate([np.linspace(0.05, 50.0, 997), np.linspace(0.9, 2.1, 241)])
    worst = 0.0
    for x in xs:
        ref = float(mpmath.loggamma(mpmath.mpf(float(x))))
        if ref != 0.0:
            worst = max(worst, abs(log_gamma(float(x)) - ref) / abs(ref))
    assert worst <= 1e-13


@pytest.mark.parametrize("bad", [0.0, -1.0, -0.5, math.nan, math.inf])
def test_log_gamma_domain(bad):
    with pytest.raises(DomainError):
        log_gamma(bad)


@settings(max_examples=300, deadline=None)
@given(st.floats(min_value=0.1, max_value=50.0))
def test_log_gamma_recurrence(x):
    terms = (log_gamma(x + 1.0), log_gamma(x), math.log(x))
    resid = terms[0] - terms[1] - terms[2]
    assert abs(resid) <= 1e-12 * max(1.0, max(abs(v) for v in terms))


@settings(max_examples=300, deadline=None)
@given(st.floats(min_value=0.5, max_value=20.0))
def test_log_gamma_duplication(x):
    terms = (
        log_gamma(2.0 * x),
        log_gamma(x),
        log_gamma(x + 0.5),
        (2.0 * x - 0.5) * math.log(2.0),
        0.5 * math.log(2.0 * math.pi),
    )
    resid = terms[0] - terms[1] - terms[2] - terms[3] + terms[4]
    assert abs(resid) <= 1e-11 * max(1.0, max(abs(v) for v in terms))


# -- Airy ----------------------------------------------------------------------


def test_airy_origin_constants():
    q = airy(0.0)
    assert q.ai == pytest.approx(AI0, rel=1e-12)
    assert q.ai_prime == pytest.approx(AIP0, rel=1e-12)
    assert q.bi == pytest.approx(BI0, rel=1e-12)
    assert q.bi_prime == pytest.approx(BIP0, rel=1e-12)


def test_airy_origin_matches_series_route():
    a, s = airy(0.0), airy_series(0.0)
    for f in ("ai", "ai_prime", "bi", "bi_prime"):
        assert getattr(a, f) == pytest.approx(getattr(s, f), rel=1e-14)


def test_airy_first_zero():
    assert abs(airy(-2.338107410459767).ai) <= 1e-9


def _modulus(x):
    q = special.airy(x)
    return math.hypot(q[0], q[2]), math.hypot(q[1], q[3])


GRID = np.concatenate([np.linspace(-30.0, 30.0, 601), [-8.99, -9.0, -9.01, 8.99, 9.0, 9.01, -100.3, 55.5]])


@pytest.mark.parametrize("x", GRID)
def test_airy_against_scipy(x):
    ai, aip, bi, bip = special.airy(x)
    q = airy(float(x))
    if x < 0:
        m, mp = _modulus(x)
        assert abs(q.ai - ai) <= 1e-12 * m
        assert abs(q.bi - bi) <= 1e-12 * m
        assert abs(q.ai_prime - aip) <= 1e-12 * mp
        assert abs(q.bi_prime - bip) <= 1e-12 * mp
    else:
        assert q.ai == pytest.approx(ai, rel=1e-12)
        assert q.ai_prime == pytest.approx(aip, rel=1e-12)
        assert q.bi == pytest.approx(bi, rel=1e-12)
        assert q.bi_prime == pytest.approx(bip, rel=1e-12)


@pytest.mark.parametrize("x", [-1000.7, -250.0, 120.0, 400.0])
def test_airy_large_against_mpmath(x):
    xm = mpmath.mpf(x)
    q = airy_scaled(x)
    if x < 0:
        ref = [mpmath.airyai(xm), mpmath.airyai(xm, 1), mpmath.airybi(xm), mpmath.airybi(xm, 1)]
        m = float(mpmath.sqrt(ref[0] ** 2 + ref[2] ** 2))
        mp = float(mpmath.sqrt(ref[1] ** 2 + ref[3] ** 2))
        assert abs(q.ai - float(ref[0])) <= 1e-11 * m
        assert abs(q.bi - float(ref[2])) <= 1e-11 * m
        assert abs(q.ai_prime - float(ref[1])) <= 1e-11 * mp
        assert abs(q.bi_prime - float(ref[3])) <= 1e-11 * mp
    else:
        z = mpmath.mpf(2) / 3 * xm ** mpmath.mpf(1.5)
        assert q.ai == pytest.approx(float(mpmath.airyai(xm) * mpmath.exp(z)), rel=1e-13)
        assert q.ai_prime == pytest.approx(float(mpmath.airyai(xm, 1) * mpmath.exp(z)), rel=1e-13)
        assert q.bi == pytest.approx(float(mpmath.airybi(xm) * mpmath.exp(-z)), rel=1e-13)
        assert q.bi_prime == pytest.approx(float(mpmath.airybi(xm, 1) * mpmath.exp(-z)), rel=1e-13)


def test_wronskian_log_spaced_grid():
    mags = np.logspace(-3, 1, 120)
    xs = np.concatenate([-mags[mags <= 10.0], mags[mags <= 8.0], [0.0]])
    for x in xs:
        q = airy(float(x))
        assert q.wronskian() * math.pi == pytest.approx(1.0, rel=1e-12, abs=0.0)


@pytest.mark.parametrize("x", np.linspace(-60.0, 100.0, 321))
def test_wronskian_wide(x):
    q = airy(float(x))
    assert q.wronskian() * math.pi == pytest.approx(1.0, rel=1e-12, abs=0.0)


@pytest.mark.parametrize("x", np.linspace(-5.0, 5.0, 41))
def test_airy_ode_residual(x):
    h = 1e-4
    second = (airy(x + h).ai - 2.0 * airy(x).ai + airy(x - h).ai) / (h * h)
    assert abs(second - x * airy(x).ai) <= 1e-4


def test_bi_overflow_keeps_ai_finite():
    q = airy(200.0)
    assert q.bi == math.inf and q.bi_prime == math.inf
    assert 0.0 <= q.ai < 1e-300 and q.ai_prime <= 0.0
    s = airy_scaled(200.0)
    assert all(math.isfinite(v) for v in (s.ai, s.ai_prime, s.bi, s.bi_prime))


@pytest.mark.parametrize("bad", [math.nan, math.inf, -math.inf])
def test_airy_domain(bad):
    with pytest.raises(DomainError):
        airy(bad)


# consistency between the three evaluation routes


@pytest.mark.parametrize("x", np.linspace(-2.0, 2.0, 33))
def test_series_route_agrees_inside(x):
    a, s = airy(float(x)), airy_series(float(x))
    for f in ("ai", "ai_prime", "bi", "bi_prime"):
        assert getattr(a, f) == pytest.approx(getattr(s, f), rel=1e-13, abs=1e-15)


@pytest.mark.parametrize("x", [-10.0, -9.5, -9.1, 9.1, 9.5, 10.0])
def test_asymptotic_route_agrees_with_taylor_route(x):
    # step slightly inside the switch point and compare the two routes there
    inner = x * 8.9 / abs(x)
    a = airy_scaled(inner)
    b = airy_asymptotic(inner)
    scale = max(abs(a.ai), abs(a.bi), abs(a.ai_prime), abs(a.bi_prime))
    for f in ("ai", "ai_prime", "bi", "bi_prime"):
        assert abs(getattr(a, f) - getattr(b, f)) <= 1e-11 * scale
