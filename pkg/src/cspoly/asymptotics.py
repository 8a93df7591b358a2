"""Large-degree approximations of phi_n and the lemmas behind them.

Coordinates: N = n + beta - 1 and x = sqrt(N) t. Three approximations of
phi_n(sqrt(N) t) are provided:

* :func:`airy_uniform` -- the leading Airy-type term, valid for all t >= delta;
* :func:`outer_formula` -- exponential form for t > 1;
* :func:`inner_formula` -- oscillatory form for delta <= t <= 1 - delta.

All magnitudes are assembled in log space and returned as ScaledReal.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional

from .errors import DomainError, NumericalError
from .recurrence import Params, eval_phi, lambda_n, log_gamma_n, log_k_n
from .scaled import ZERO, ScaledReal
from .specfun import airy_scaled, airy_zeta, log_gamma

__all__ = [
    "DELTA",
    "TURNING_WINDOW",
    "EvalReport",
    "UValue",
    "airy_uniform",
    "error_inner",
    "error_outer",
    "error_uniform",
    "evaluate",
    "inner_envelope",
    "inner_formula",
    "inner_phase",
    "outer_formula",
    "period_sup_errors",
    "phase_maximum_near",
    "pi_from_ratios",
    "predicted_zero_near",
    "ratio_w_k",
    "sum_lemma",
    "u_map",
    "uniform_envelope",
]

DELTA = 0.05
TURNING_WINDOW = 1e-3
_SERIES_ORDER = 10


# --------------------------------------------------------------------------
# turning-point map


@dataclass(frozen=True)
class UValue:
    t: float
    u: float
    envelope: float


@lru_cache(maxsize=None)
def _u_series() -> tuple[float, ...]:
    """Coefficients h_j with U(t) = 2 s sum_j h_j s^j, s = t - 1.

    Both defining relations equal int_1^t 2 sqrt(tau^2 - 1) dtau continued
    analytically, which gives U^{3/2} = 2 sqrt(2) s^{3/2} A(s) with
    A(s) = sum_j (3/2) binom(1/2, j) 2^{-j} s^j / (j + 3/2); then
    h = A^{2/3}, expanded by the power-series power recurrence.
    """
    a = []
    for j in range(_SERIES_ORDER):
        binom = Fraction(1)
        for i in range(j):
            binom *= (Fraction(1, 2) - i) / (i + 1)
        a.append(Fraction(3, 2) * binom / 2**j / (j + Fraction(3, 2)))
    power = Fraction(2, 3)
    h = [Fraction(1)]
    for k in range(1, _SERIES_ORDER):
        acc = sum(((power + 1) * j - k) * a[j] * h[k - j] for j in range(1, k + 1))
        h.append(acc / k)
    return tuple(float(c) for c in h)


def _horner(coefs: tuple[float, ...], s: float) -> float:
    acc = 0.0
    for c in reversed(coefs):
        acc = acc * s + c
    return acc


def u_map(t: float) -> UValue:
    """U(t) and the envelope factor (U / (t^2 - 1))^{1/4} for t > 0."""
    t = float(t)
    if not (math.isfinite(t) and t > 0.0):
        raise DomainError(f"u_map requires finite t > 0, got {t!r}")
    s = t - 1.0
    if abs(s) < TURNING_WINDOW:
        h = _horner(_u_series(), s)
        return UValue(t, 2.0 * s * h, (2.0 * h / (2.0 + s)) ** 0.25)
    return _u_closed(t)


def _u_closed(t: float) -> UValue:
    s = t - 1.0
    if s > 0.0:
        w = math.sqrt(s * (t + 1.0))
        r = t * w - math.acosh(t)
        u = (1.5 * r) ** (2.0 / 3.0)
    else:
        w = math.sqrt(-s * (t + 1.0))
        r = math.acos(t) - t * w
        u = -((1.5 * r) ** (2.0 / 3.0))
    return UValue(t, u, (u / (s * (t + 1.0))) ** 0.25)


# --------------------------------------------------------------------------
# uniform (Airy-type) approximation


def _big_n(p: Params, n: int) -> float:
    if isinstance(n, bool) or int(n) != n or n < 1:
        raise DomainError(f"n must be an integer >= 1, got {n!r}")
    return n + float(p.beta) - 1.0


def _alpha_term(p: Params, nt2: float) -> float:
    a = float(p.alpha)
    return (a * a - 0.25) * math.log(nt2) / (4.0 * nt2)


def _uniform_parts(p: Params, n: int, t: float) -> tuple[float, float, float, float]:
    """(log prefactor incl. N^{1/6}, scaled Ai, scaled Ai' * N^{-1/3}, log scale)."""
    if not (math.isfinite(t) and t >= DELTA):
        raise DomainError(f"uniform formula requires t >= {DELTA}, got {t!r}")
    big_n = _big_n(p, n)
    a, b = p.as_float()
    uv = u_map(t)
    nt2 = big_n * t * t
    log_pre = (
        log_k_n(p, n)
        + 0.25 * math.log(math.pi)
        + 0.5 * (log_gamma(b + a) + log_gamma(b - a) - log_gamma(b + 0.5))
        + nt2
        + _alpha_term(p, nt2)
        - (b - 1.5) * math.log(2.0 * math.sqrt(big_n) * t)
        + math.log(uv.envelope)
        + math.log(big_n) / 6.0
    )
    arg = big_n ** (2.0 / 3.0) * uv.u
    q = airy_scaled(arg)
    log_scale = -airy_zeta(arg) if arg > 0.0 else 0.0
    return log_pre, q.ai, q.ai_prime * big_n ** (-1.0 / 3.0), log_scale


def _from_log_signed(log_abs: float, value: float) -> ScaledReal:
    if value == 0.0:
        return ZERO
    return ScaledReal.from_log(log_abs + math.log(abs(value)), 1 if value > 0 else -1)


def airy_uniform(p: Params, n: int, t: float) -> ScaledReal:
    """Leading term of the uniform Airy-type approximation to phi_n(sqrt(N) t).

    k_n pi^{1/4} sqrt(G(b+a)G(b-a)/G(b+1/2)) e^{N t^2 + (a^2-1/4) ln(N t^2)/(4 N t^2)}
    (2 sqrt(N) t)^{-(b-3/2)} (U/(t^2-1))^{1/4} Ai(N^{2/3} U) N^{1/6}.
    """
    log_pre, ai, _, log_scale = _uniform_parts(p, n, t)
    return _from_log_signed(log_pre + log_scale, ai)


def uniform_envelope(p: Params, n: int, t: float) -> ScaledReal:
    """Prefactor times max(|Ai|, N^{-1/3}|Ai'|): the local size of the uniform term."""
    log_pre, ai, aip, log_scale = _uniform_parts(p, n, t)
    return _from_log_signed(log_pre + log_scale, max(abs(ai), abs(aip)))


# --------------------------------------------------------------------------
# non-uniform approximations


def _log_common(p: Params, n: int, z: float) -> float:
    """ln[(4e)^{-N/2} gamma_n N^{n/2} e^{(a^2-1/4) ln(N z^2)/(4 N z^2)} z^{-(b-3/2)}].

    The e^{N z^2} factor is left to the callers, which combine it with their
    own exponentials to avoid cancellation.
    """
    big_n = _big_n(p, n)
    b = float(p.beta)
    return (
        -0.5 * big_n * (math.log(4.0) + 1.0)
        + log_gamma_n(p, n)
        + 0.5 * n * math.log(big_n)
        + _alpha_term(p, big_n * z * z)
        - (b - 1.5) * math.log(z)
    )


def outer_formula(p: Params, n: int, z: float) -> ScaledReal:
    """Exponential-region approximation of phi_n(sqrt(N) z), z > 1."""
    z = float(z)
    if not (math.isfinite(z) and z > 1.0):
        raise DomainError(f"outer formula requires z > 1, got {z!r}")
    big_n = _big_n(p, n)
    w = math.sqrt((z - 1.0) * (z + 1.0))
    # N z^2 + N(ln(z + w) - z w) with z^2 - z w = z / (z + w)
    expo = big_n * (z / (z + w) + math.acosh(z))
    log_val = _log_common(p, n, z) - 0.25 * math.log((z - 1.0) * (z + 1.0)) + expo
    return ScaledReal.from_log(log_val)


def inner_phase(big_n: float, z: float) -> float:
    """N (z sqrt(1-z^2) - arccos z) + pi/4."""
    return big_n * (z * math.sqrt((1.0 - z) * (1.0 + z)) - math.acos(z)) + math.pi / 4.0


def _inner_log_amplitude(p: Params, n: int, z: float) -> float:
    if not (math.isfinite(z) and DELTA <= z <= 1.0 - DELTA):
        raise DomainError(f"inner formula requires {DELTA} <= z <= {1 - DELTA}, got {z!r}")
    big_n = _big_n(p, n)
    return (
        _log_common(p, n, z)
        + big_n * z * z
        + math.log(2.0)
        - 0.25 * math.log((1.0 - z) * (1.0 + z))
    )


def inner_formula(p: Params, n: int, z: float) -> ScaledReal:
    """Oscillatory-region approximation of phi_n(sqrt(N) z), delta <= z <= 1-delta."""
    z = float(z)
    log_amp = _inner_log_amplitude(p, n, z)
    return _from_log_signed(log_amp, math.cos(inner_phase(_big_n(p, n), z)))


def inner_envelope(p: Params, n: int, z: float) -> ScaledReal:
    """Amplitude of the inner formula (its value with the cosine replaced by 1)."""
    return ScaledReal.from_log(_inner_log_amplitude(p, n, float(z)))


def _solve_phase(big_n: float, t: float, offset: float) -> float:
    """z nearest t with inner_phase(z) = offset (mod pi)."""
    theta = lambda z: math.acos(z) - z * math.sqrt((1.0 - z) * (1.0 + z))  # noqa: E731
    # phase = pi/4 - N theta; theta is decreasing with theta' = -2 sqrt(1 - z^2)
    j = round((math.pi / 4.0 - big_n * theta(t) - offset) / math.pi)
    target = (math.pi / 4.0 - offset - j * math.pi) / big_n
    z = t
    for _ in range(60):
        step = (theta(z) - target) / (-2.0 * math.sqrt((1.0 - z) * (1.0 + z)))
        z -= step
        if abs(step) < 1e-15:
            return z
    raise NumericalError(f"phase solve did not converge near t={t}")


def phase_maximum_near(p: Params, n: int, t: float) -> float:
    """Point nearest t where the inner cosine is +-1."""
    return _solve_phase(_big_n(p, n), float(t), 0.0)


def predicted_zero_near(p: Params, n: int, t: float) -> float:
    """Point nearest t where the inner cosine vanishes (a predicted zero of phi_n)."""
    return _solve_phase(_big_n(p, n), float(t), math.pi / 2.0)


# --------------------------------------------------------------------------
# ratio asymptotics and the sum lemma


def _lam_or_zero(p: Params, k: int) -> float:
    # the k = 1 correction reads lambda_1 / (2 N z^2), i.e. lambda_0 := 0
    return 0.0 if k == 0 else lambda_n(p, k)


def ratio_w_k(p: Params, n: int, k: int, z: float) -> float:
    """Approximation of w_k(sqrt(N) z) = pi_k / pi_{k-1} at x = sqrt(N) z, |z| > 1."""
    z = float(z)
    big_n = _big_n(p, n)
    if not (1 <= k <= n):
        raise DomainError(f"need 1 <= k <= n, got k={k}, n={n}")
    if not abs(z) > 1.0:
        raise DomainError(f"ratio asymptotics need |z| > 1, got {z!r}")
    lam_k = _lam_or_zero(p, k)
    gap = big_n * z * z - 2.0 * lam_k
    if gap <= 0.0:
        raise DomainError("N z^2 - 2 lambda_k must be positive")
    root = math.copysign(math.sqrt(gap / big_n), z)
    correction = 1.0 + (lam_k - _lam_or_zero(p, k - 1)) / (2.0 * gap)
    return math.sqrt(big_n) * (z + root) / 2.0 * correction


def pi_from_ratios(p: Params, n: int, z: float) -> ScaledReal:
    """pi_n(sqrt(N) z) reconstructed as the product of the approximate ratios."""
    logs = []
    sign = 1
    for k in range(1, n + 1):
        w = ratio_w_k(p, n, k, z)
        if w < 0.0:
            sign = -sign
        logs.append(math.log(abs(w)))
    return ScaledReal.from_log(math.fsum(logs), sign)


def sum_lemma(beta: float, n: int, x: float) -> tuple[float, float]:
    """Both sides of sum_k 1/((k+b-1/2)(x^2-k+x sqrt(x^2-k))) ~ ln(x^2)/(2x^2)."""
    beta = float(beta)
    x = float(x)
    if not beta > 0.0:
        raise DomainError(f"sum lemma needs beta > 0, got {beta!r}")
    if isinstance(n, bool) or int(n) != n or n < 1:
        raise DomainError(f"n must be an integer >= 1, got {n!r}")
    if not (x > 0.0 and x * x > n):
        raise DomainError("sum lemma needs x > 0 with x^2 > n")
    x2 = x * x
    terms = [
        1.0 / ((k + beta - 0.5) * (x2 - k + x * math.sqrt(x2 - k))) for k in range(1, int(n) + 1)
    ]
    return math.fsum(terms), math.log(x2) / (2.0 * x2)


# --------------------------------------------------------------------------
# error measurement


def _rel(diff: ScaledReal, scale: ScaledReal) -> float:
    if scale.is_zero():
        return math.inf
    return diff.ratio(scale)


def _exact_at(p: Params, n: int, t: float) -> ScaledReal:
    return eval_phi(p, n, math.sqrt(_big_n(p, n)) * t)


def error_uniform(p: Params, n: int, t: float, exact: Optional[ScaledReal] = None) -> float:
    """|uniform - exact| relative to the uniform envelope."""
    exact = _exact_at(p, n, t) if exact is None else exact
    return _rel(airy_uniform(p, n, t) - exact, uniform_envelope(p, n, t))


def error_outer(p: Params, n: int, t: float, exact: Optional[ScaledReal] = None) -> float:
    """|outer / exact - 1|."""
    exact = _exact_at(p, n, t) if exact is None else exact
    return _rel(outer_formula(p, n, t) - exact, exact)


def error_inner(p: Params, n: int, t: float, exact: Optional[ScaledReal] = None) -> float:
    """|inner - exact| relative to the inner amplitude."""
    exact = _exact_at(p, n, t) if exact is None else exact
    return _rel(inner_formula(p, n, t) - exact, inner_envelope(p, n, t))


def period_sup_errors(p: Params, n: int, t: float, samples: int = 41) -> tuple[float, float]:
    """Largest (uniform, inner) envelope-relative errors over one oscillation around t.

    The local period in t is pi / (2 N sqrt(1 - t^2)); sampling a full period
    removes the dependence on where t happens to sit in the phase.
    """
    big_n = _big_n(p, n)
    period = math.pi / (2.0 * big_n * math.sqrt(1.0 - t * t))
    worst_u = worst_i = 0.0
    for j in range(samples):
        z = t - period / 2.0 + period * j / (samples - 1)
        exact = _exact_at(p, n, z)
        worst_u = max(worst_u, error_uniform(p, n, z, exact))
        worst_i = max(worst_i, error_inner(p, n, z, exact))
    return worst_u, worst_i


# --------------------------------------------------------------------------
# one evaluation report


@dataclass(frozen=True)
class EvalReport:
    n: int
    t: float
    x: float
    exact: ScaledReal
    airy_uniform: Optional[ScaledReal]
    outer: Optional[ScaledReal]
    inner: Optional[ScaledReal]
    rel_err_uniform: Optional[float]
    rel_err_outer: Optional[float]
    rel_err_inner: Optional[float]


def _reflect(v: Optional[ScaledReal], flip: bool) -> Optional[ScaledReal]:
    return -v if (v is not None and flip) else v


def evaluate(p: Params, n: int, t: float) -> EvalReport:
    """Exact value and every applicable approximation at x = sqrt(N) t.

    Negative t is handled by phi_n(-x) = (-1)^n phi_n(x). The uniform column
    needs |t| >= DELTA, outer needs |t| >= 1 + DELTA, inner needs
    DELTA <= |t| <= 1 - DELTA.
    """
    big_n = _big_n(p, n)
    t = float(t)
    x = math.sqrt(big_n) * t
    exact = eval_phi(p, n, x)
    at = abs(t)
    flip = t < 0 and n % 2 == 1
    exact_pos = -exact if flip else exact

    uni = out = inn = None
    e_u = e_o = e_i = None
    if at >= DELTA:
        uni = airy_uniform(p, n, at)
        e_u = error_uniform(p, n, at, exact_pos)
    if at >= 1.0 + DELTA:
        out = outer_formula(p, n, at)
        e_o = error_outer(p, n, at, exact_pos)
    if DELTA <= at <= 1.0 - DELTA:
        inn = inner_formula(p, n, at)
        e_i = error_inner(p, n, at, exact_pos)
    return EvalReport(
        n=n,
        t=t,
        x=x,
        exact=exact,
        airy_uniform=_reflect(uni, flip),
        outer=_reflect(out, flip),
        inner=_reflect(inn, flip),
        rel_err_uniform=e_u,
        rel_err_outer=e_o,
        rel_err_inner=e_i,
    )
