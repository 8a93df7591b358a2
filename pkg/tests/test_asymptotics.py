import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cspoly.asymptotics import (
    DELTA,
    TURNING_WINDOW,
    _alpha_term,
    _horner,
    _u_closed,
    _u_series,
    airy_uniform,
    error_inner,
    error_outer,
    error_uniform,
    evaluate,
    inner_envelope,
    inner_formula,
    outer_formula,
    period_sup_errors,
    phase_maximum_near,
    pi_from_ratios,
    predicted_zero_near,
    ratio_w_k,
    sum_lemma,
    u_map,
)
from cspoly.errors import DomainError
from cspoly.recurrence import Params, eval_phi, eval_pi_exact, log_abs_fraction, log_gamma_n
from cspoly.zeros import eigen_sturm, jacobi_matrix

P = Params(0.3, 1.7)
HERMITE = Params(0.5, 1.5)
LADDER = (100, 200, 400, 800)


def big_n(p, n):
    return n + float(p.beta) - 1.0


# -- turning-point map ---------------------------------------------------------------


def _u_oracle(t):
    """Solve the defining relation at 30 digits."""
    mpmath.mp.dps = 30
    t = mpmath.mpf(t)
    if t > 1:
        rhs = t * mpmath.sqrt(t * t - 1) - mpmath.log(t + mpmath.sqrt(t * t - 1))
        return float((1.5 * rhs) ** (mpmath.mpf(2) / 3))
    rhs = mpmath.acos(t) - t * mpmath.sqrt(1 - t * t)
    return float(-((1.5 * rhs) ** (mpmath.mpf(2) / 3)))


@pytest.mark.parametrize("t", [0.05, 0.3, 0.77, 0.9985, 1.0015, 1.3, 2.0, 9.5])
def test_u_against_oracle(t):
    assert u_map(t).u == pytest.approx(_u_oracle(t), rel=1e-13)


def test_u_at_turning_point():
    uv = u_map(1.0)
    assert uv.u == 0.0 and uv.envelope == pytest.approx(1.0, rel=1e-15)


def test_u_limit_at_origin():
    assert u_map(1e-12).u == pytest.approx(-((3.0 * math.pi / 4.0) ** (2.0 / 3.0)), rel=1e-11)


def test_u_slope_at_one():
    h = 1e-5
    assert (u_map(1 + h).u - u_map(1 - h).u) / (2 * h) == pytest.approx(2.0, abs=1e-6)


def test_u_series_leading_terms():
    c = _u_series()
    assert c[0] == 1.0
    # U = 2 s (1 + c1 s + ...), so U''(1) = 4 c1
    h = 1e-3
    second = (_u_oracle(1 + h) + _u_oracle(1 - h)) / (h * h)  # U(1) = 0
    assert 4.0 * c[1] == pytest.approx(second, rel=1e-4)


@pytest.mark.parametrize("s", [TURNING_WINDOW, -TURNING_WINDOW])
def test_u_branches_agree_at_window_edge(s):
    series = 2.0 * s * _horner(_u_series(), s)
    assert abs(series - _u_closed(1.0 + s).u) <= 1e-10


@settings(max_examples=200, deadline=None)
@given(st.floats(min_value=1e-6, max_value=20.0))
def test_u_sign(t):
    u = u_map(t).u
    if t < 1.0:
        assert u < 0.0
    elif t > 1.0:
        assert u > 0.0


def test_u_monotone_near_turning_point():
    ts = np.linspace(1 - DELTA, 1 + DELTA, 2001)
    us = [u_map(float(t)).u for t in ts]
    assert all(b > a for a, b in zip(us, us[1:]))


def test_envelope_continuous_through_one():
    for s in (1e-2, 2e-3, 1.0001e-3, 0.9999e-3, 1e-4, 1e-7):
        assert u_map(1 + s).envelope == pytest.approx(1.0, abs=2 * s)
        assert u_map(1 - s).envelope == pytest.approx(1.0, abs=2 * s)
    for s in (TURNING_WINDOW, -TURNING_WINDOW):
        h = _horner(_u_series(), s)
        series = (2.0 * h / (2.0 + s)) ** 0.25
        assert series == pytest.approx(_u_closed(1.0 + s).envelope, abs=1e-12)


@pytest.mark.parametrize("t", [0.0, -0.5, math.nan])
def test_u_domain(t):
    with pytest.raises(DomainError):
        u_map(t)


# -- uniform formula ----------------------------------------------------------------


def test_alpha_term_vanishes_for_hermite_case():
    assert _alpha_term(HERMITE, 123.4) == 0.0
    assert _alpha_term(P, 123.4) != 0.0


def test_uniform_domain():
    with pytest.raises(DomainError):
        airy_uniform(P, 100, DELTA / 2)


def test_uniform_hermite_turning_point():
    n = 80
    assert error_uniform(HERMITE, n, 1.0) <= 1.0 / big_n(HERMITE, n)


def test_uniform_sign_in_oscillatory_region():
    n = 60
    exact = eval_phi(HERMITE, n, math.sqrt(big_n(HERMITE, n)) * 0.5)
    assert airy_uniform(HERMITE, n, 0.5).sign == exact.sign


@pytest.mark.parametrize("t", [0.2, 0.7, 1.0, 1.2, 3.0])
def test_uniform_error_order_one_over_n(t):
    errs = [error_uniform(P, n, t) for n in (200, 400)]
    assert errs[1] < errs[0] and errs[0] * big_n(P, 200) < 10.0


def test_uniform_finite_at_large_degree():
    v = airy_uniform(P, 10_000, 10.0)
    assert math.isfinite(v.log()) and v.sign == 1
    assert v.log() == pytest.approx(outer_formula(P, 10_000, 10.0).log(), rel=1e-9)


def test_uniform_agrees_with_outer_increasingly():
    gaps = []
    for n in LADDER:
        a, o = airy_uniform(P, n, 1.5), outer_formula(P, n, 1.5)
        gaps.append((a - o).ratio(o))
    assert all(b < a for a, b in zip(gaps, gaps[1:]))


def test_uniform_agrees_with_inner_increasingly():
    gaps = []
    for n in LADDER:
        z = phase_maximum_near(P, n, 0.5)
        gaps.append((airy_uniform(P, n, z) - inner_formula(P, n, z)).ratio(inner_envelope(P, n, z)))
    assert all(b < a for a, b in zip(gaps, gaps[1:]))


# -- outer and inner formulas ---------------------------------------------------------


def test_outer_domain():
    for z in (1.0, 0.5, -2.0):
        with pytest.raises(DomainError):
            outer_formula(P, 50, z)


def test_outer_decay():
    errs = [error_outer(P, n, 1.5) for n in LADDER]
    for a, b in zip(errs, errs[1:]):
        assert 1.6 <= a / b <= 2.6


def test_outer_monic_dominance():
    n, p = 10, HERMITE
    gaps = []
    for z in (10.0, 1e3, 1e5):
        lead = log_gamma_n(p, n) + n * math.log(math.sqrt(big_n(p, n)) * z)
        gaps.append(abs(outer_formula(p, n, z).log() - lead))
    assert gaps[0] > gaps[1] > gaps[2] and gaps[2] < 1e-9


@pytest.mark.parametrize("z", [0.0, 0.04, 0.96, 1.2])
def test_inner_domain(z):
    with pytest.raises(DomainError):
        inner_formula(P, 50, z)


def test_inner_decay_at_phase_maxima():
    errs = [error_inner(P, n, phase_maximum_near(P, n, 0.5)) for n in LADDER]
    for a, b in zip(errs, errs[1:]):
        assert 1.6 <= a / b <= 2.6


def test_phase_maximum_and_zero_are_what_they_claim():
    n = 300
    zm = phase_maximum_near(P, n, 0.5)
    zz = predicted_zero_near(P, n, 0.5)
    period = math.pi / (2 * big_n(P, n) * math.sqrt(1 - 0.25))
    assert abs(zm - 0.5) <= period and abs(zz - 0.5) <= period
    assert abs(inner_formula(P, n, zm).ratio(inner_envelope(P, n, zm)) - 1.0) <= 1e-12
    assert inner_formula(P, n, zz).ratio(inner_envelope(P, n, zz)) <= 1e-10


def test_predicted_zero_near_true_zero():
    n = 400
    scale = math.sqrt(big_n(P, n))
    zeros = eigen_sturm(jacobi_matrix(P, n)) / scale
    z0 = predicted_zero_near(P, n, 0.5)
    assert np.min(np.abs(zeros - z0)) < 5.0 / big_n(P, n)


def test_period_sup_errors_cover_pointwise():
    n = 200
    sup_u, sup_i = period_sup_errors(P, n, 0.5)
    assert sup_u >= error_uniform(P, n, 0.5) and sup_i >= error_inner(P, n, 0.5)
    assert sup_u * big_n(P, n) < 1.0 and sup_i * big_n(P, n) < 1.0


# -- ratio lemma ---------------------------------------------------------------------


@pytest.mark.parametrize("n", [50, 100, 200])
def test_ratio_first_step_exact_to_second_order(n):
    w = ratio_w_k(P, n, 1, 2.0)
    nn = big_n(P, n)
    assert abs(w / (math.sqrt(nn) * 2.0) - 1.0) <= 10.0 / nn**2


@pytest.mark.parametrize("k, z", [(0, 2.0), (51, 2.0), (3, 1.0), (3, 0.5)])
def test_ratio_domain(k, z):
    with pytest.raises(DomainError):
        ratio_w_k(P, 50, k, z)


def test_ratio_principal_branch_is_odd():
    for k in (1, 7, 40):
        assert ratio_w_k(P, 50, k, -1.7) == pytest.approx(-ratio_w_k(P, 50, k, 1.7), rel=1e-15)


def _product_law_error(p, n, z=2.0):
    nn = big_n(p, n)
    x = Fraction(float(math.sqrt(nn) * z))
    exact = log_abs_fraction(eval_pi_exact(p, n, x))
    approx = pi_from_ratios(p, n, float(x) / math.sqrt(nn)).log()
    return abs(math.expm1(approx - exact))


def test_product_law_decay():
    p = Params(Fraction(3, 10), Fraction(17, 10))
    errs = [_product_law_error(p, n) for n in (50, 100, 200)]
    for a, b in zip(errs, errs[1:]):
        assert 1.6 <= a / b <= 2.6


def test_product_law_even_degree_symmetry():
    a, b = pi_from_ratios(P, 60, 2.0), pi_from_ratios(P, 60, -2.0)
    assert a.sign == b.sign == 1
    assert a.log() == pytest.approx(b.log(), rel=1e-14)
    assert pi_from_ratios(P, 61, -2.0).sign == -1


# -- sum lemma ---------------------------------------------------------------------------


def test_sum_lemma_single_term():
    lhs, rhs = sum_lemma(0.5, 1, 2.0)
    assert lhs == pytest.approx(1.0 / (3.0 + 2.0 * math.sqrt(3.0)), rel=1e-15)
    assert lhs == pytest.approx(0.154701, abs=1e-6)
    assert rhs == pytest.approx(0.173287, abs=1e-6)


@pytest.mark.parametrize("beta", [0.5, 1.5, 3.0])
def test_sum_lemma_gap_is_order_one_over_n(beta):
    gaps = [abs(np.subtract(*sum_lemma(beta, n, 2.0 * math.sqrt(n)))) for n in (400, 1600)]
    assert 3.0 <= gaps[0] / gaps[1] <= 5.0


@pytest.mark.parametrize("beta, n, x", [(0.0, 10, 5.0), (1.0, 10, 3.0), (1.0, 0, 3.0), (1.0, 10, -5.0)])
def test_sum_lemma_domain(beta, n, x):
    with pytest.raises(DomainError):
        sum_lemma(beta, n, x)


# -- evaluation reports ---------------------------------------------------------------------


@pytest.mark.parametrize(
    "t, has_outer, has_inner",
    [(1.0, False, False), (1.04, False, False), (1.05, True, False), (0.5, False, True), (0.96, False, False)],
)
def test_region_gating(t, has_outer, has_inner):
    r = evaluate(HERMITE, 80, t)
    assert r.airy_uniform is not None and r.rel_err_uniform >= 0.0
    assert (r.outer is not None) == has_outer == (r.rel_err_outer is not None)
    assert (r.inner is not None) == has_inner == (r.rel_err_inner is not None)


def test_no_uniform_near_origin():
    r = evaluate(P, 80, 0.01)
    assert r.airy_uniform is None and r.inner is None and r.outer is None


@pytest.mark.parametrize("n", [79, 80])
def test_reflection(n):
    a, b = evaluate(P, n, 0.5), evaluate(P, n, -0.5)
    flip = -1 if n % 2 else 1
    assert b.exact.sign == flip * a.exact.sign
    assert b.airy_uniform.sign == flip * a.airy_uniform.sign
    assert b.inner.sign == flip * a.inner.sign
    assert b.rel_err_uniform == a.rel_err_uniform
    assert b.x == -a.x
