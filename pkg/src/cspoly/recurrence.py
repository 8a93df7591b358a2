"""Recurrence coefficients and exact evaluation of phi_n, pi_n and p_n.

The orthonormal polynomials are generated by

    x phi_n = sqrt(lambda_{n+1}/2) phi_{n+1} + sqrt(lambda_n/2) phi_{n-1},
    phi_0 = 1,  phi_1 = sqrt(2/lambda_1) x,

    lambda_n = (n+beta+alpha-1)(n+beta-alpha-1) / (2(n+beta-1/2)).

Float evaluation runs the recurrence upward on a two-term window that is
rescaled by an exact power of two at every step, so values of any size are
returned as :class:`ScaledReal`. The monic polynomials pi_n have rational
coefficients when alpha and beta are rational; :func:`eval_pi_exact` evaluates
them in exact arithmetic and serves as ground truth.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational

from .errors import DomainError
from .scaled import ScaledReal
from .specfun import log_gamma

__all__ = [
    "BigRational",
    "CoeffSet",
    "Params",
    "a_n",
    "coeffs",
    "eval_p_standard",
    "eval_phi",
    "eval_pi_exact",
    "hermite_reference",
    "hermite_window",
    "lambda_exact",
    "lambda_from_moments",
    "lambda_n",
    "lambda_rewritten",
    "log_abs_fraction",
    "log_gamma_n",
    "log_k_n",
    "phi_window",
]

BigRational = Fraction


@dataclass(frozen=True)
class Params:
    """Parameter pair with 0 <= alpha < beta.

    alpha and beta may be floats, ints or Fractions; exact evaluation
    requires the latter two.
    """

    alpha: float
    beta: float

    def __post_init__(self):
        a, b = self.alpha, self.beta
        try:
            fa, fb = float(a), float(b)
        except (TypeError, ValueError) as exc:
            raise DomainError(f"alpha and beta must be real numbers: {exc}") from None
        if not (math.isfinite(fa) and math.isfinite(fb)):
            raise DomainError("alpha and beta must be finite")
        if not (0 <= a < b):
            raise DomainError(f"need 0 <= alpha < beta, got alpha={a}, beta={b}")

    @property
    def is_rational(self) -> bool:
        return isinstance(self.alpha, Rational) and isinstance(self.beta, Rational)

    def as_float(self) -> tuple[float, float]:
        return float(self.alpha), float(self.beta)


@dataclass(frozen=True)
class CoeffSet:
    n: int
    lam: float
    b: float
    a_n: float
    big_n: float


def _check_degree(n: int, minimum: int = 0) -> int:
    if isinstance(n, bool) or int(n) != n or n < minimum:
        raise DomainError(f"degree must be an integer >= {minimum}, got {n!r}")
    return int(n)


def lambda_n(p: Params, n: int) -> float:
    """Recurrence coefficient lambda_n (n >= 1)."""
    n = _check_degree(n, 1)
    a, b = p.as_float()
    return (n + b + a - 1.0) * (n + b - a - 1.0) / (2.0 * (n + b - 0.5))


def lambda_rewritten(p: Params, n: int) -> float:
    """The same coefficient as (n+beta-3/2 - (alpha^2-1/4)/(n+beta-1/2)) / 2."""
    n = _check_degree(n, 1)
    a, b = p.as_float()
    return 0.5 * (n + b - 1.5 - (a * a - 0.25) / (n + b - 0.5))


def lambda_exact(p: Params, n: int) -> Fraction:
    if not p.is_rational:
        raise DomainError("exact coefficients need rational alpha and beta")
    n = _check_degree(n, 1)
    a, b = Fraction(p.alpha), Fraction(p.beta)
    return (n + b + a - 1) * (n + b - a - 1) / (2 * (n + b - Fraction(1, 2)))


def _log_pochhammer_terms(a: float, n: int) -> list[float]:
    return [math.log(a + j) for j in range(n)]


def lambda_from_moments(p: Params, n: int) -> float:
    """lambda_n as the moment ratio mu_{2n} / mu_{2n-2}.

    mu_{2n} = (beta+alpha)_n (beta-alpha)_n / (2^n (beta+1/2)_n), with each
    Pochhammer symbol accumulated as a compensated sum of logarithms.
    """
    n = _check_degree(n, 1)
    a, b = p.as_float()

    def log_mu(m: int) -> float:
        terms = (
            _log_pochhammer_terms(b + a, m)
            + _log_pochhammer_terms(b - a, m)
            + [-math.log(2.0)] * m
            + [-t for t in _log_pochhammer_terms(b + 0.5, m)]
        )
        return math.fsum(terms)

    return math.exp(log_mu(n) - log_mu(n - 1))


def log_k_n(p: Params, n: int) -> float:
    """ln k_n, the normalising constant of the standard form phi_n = k_n p_n."""
    n = _check_degree(n)
    a, b = p.as_float()
    s = n + b
    return 0.5 * (
        log_gamma((s + a) / 2)
        + log_gamma((s - a) / 2)
        + log_gamma((s + 1.5) / 2)
        - log_gamma((s + a + 1) / 2)
        - log_gamma((s - a + 1) / 2)
        - log_gamma((s + 0.5) / 2)
    )


def log_gamma_n(p: Params, n: int) -> float:
    """ln gamma_n, gamma_n the leading coefficient of phi_n."""
    n = _check_degree(n)
    if n == 0:
        return 0.0
    a, b = p.as_float()
    return n * math.log(2.0) + 0.5 * (
        log_gamma(b + a)
        + log_gamma(b - a)
        + log_gamma(n + b + 0.5)
        - log_gamma(n + b + a)
        - log_gamma(n + b - a)
        - log_gamma(b + 0.5)
    )


def a_n(p: Params, n: int) -> float:
    """Coefficient A_n of the standard form p_{n+1} - A_n x p_n + p_{n-1} = 0."""
    n = _check_degree(n, 1)
    return math.sqrt(2.0 / lambda_n(p, n)) * math.exp(log_k_n(p, n) - log_k_n(p, n - 1))


def coeffs(p: Params, n: int) -> CoeffSet:
    n = _check_degree(n, 1)
    lam = lambda_n(p, n)
    return CoeffSet(
        n=n,
        lam=lam,
        b=math.sqrt(lam / 2.0),
        a_n=a_n(p, n),
        big_n=n + float(p.beta) - 1.0,
    )


def _renormalise(hi: float, lo: float) -> tuple[float, float, int]:
    m = max(abs(hi), abs(lo))
    if m == 0.0:
        return hi, lo, 0
    e = math.frexp(m)[1]
    return math.ldexp(hi, -e), math.ldexp(lo, -e), e


def phi_window(p: Params, n: int, x: float) -> tuple[ScaledReal, ScaledReal]:
    """(phi_n(x), phi_{n-1}(x)); phi_{-1} is taken as 0."""
    n = _check_degree(n)
    x = float(x)
    if not math.isfinite(x):
        raise DomainError("x must be finite")
    if n == 0:
        return ScaledReal.from_float(1.0), ScaledReal.from_float(0.0)
    a, b = p.as_float()

    def lam(k: int) -> float:
        return (k + b + a - 1.0) * (k + b - a - 1.0) / (2.0 * (k + b - 0.5))

    lam_k = lam(1)
    cur, prev, exp2 = math.sqrt(2.0 / lam_k) * x, 1.0, 0
    for k in range(1, n):
        lam_next = lam(k + 1)
        nxt = math.sqrt(2.0 / lam_next) * x * cur - math.sqrt(lam_k / lam_next) * prev
        cur, prev, e = _renormalise(nxt, cur)
        exp2 += e
        lam_k = lam_next
    return ScaledReal.from_parts(cur, exp2), ScaledReal.from_parts(prev, exp2)


def eval_phi(p: Params, n: int, x: float) -> ScaledReal:
    """phi_n(x) by the forward three-term recurrence, overflow-free."""
    return phi_window(p, n, x)[0]


def eval_p_standard(p: Params, n: int, x: float) -> ScaledReal:
    """p_n(x) = phi_n(x) / k_n."""
    return eval_phi(p, n, x) * ScaledReal.from_log(-log_k_n(p, n))


def eval_pi_exact(p: Params, n: int, x) -> Fraction:
    """Monic pi_n(x) in exact rational arithmetic.

    pi_{k+1} = x pi_k - (lambda_k / 2) pi_{k-1},  pi_0 = 1,  pi_1 = x.
    """
    if not p.is_rational:
        raise DomainError("eval_pi_exact needs rational alpha and beta (int or Fraction)")
    if not isinstance(x, Rational):
        raise DomainError("eval_pi_exact needs a rational x (int or Fraction)")
    n = _check_degree(n)
    x = Fraction(x)
    if n == 0:
        return Fraction(1)
    prev, cur = Fraction(1), x
    for k in range(1, n):
        prev, cur = cur, x * cur - lambda_exact(p, k) / 2 * prev
    return cur


def log_abs_fraction(q: Fraction) -> float:
    """ln|q| for rationals far outside the float range."""
    if q == 0:
        return -math.inf
    num, den = abs(q.numerator), q.denominator
    shift = num.bit_length() - den.bit_length() - 60
    if shift > 0:
        den <<= shift
    else:
        num <<= -shift
    return math.log(num / den) + shift * math.log(2.0)


def hermite_window(n: int, x: float) -> tuple[ScaledReal, ScaledReal]:
    """Normalised Hermite values at degrees n and n-1.

    Returns 2^{-k/2} (k!)^{-1/2} H_k(sqrt(2) x) for k = n, n-1 using the
    physicists' recurrence H_{k+1} = 2y H_k - 2k H_{k-1}, y = sqrt(2) x.
    """
    n = _check_degree(n)
    y = math.sqrt(2.0) * float(x)
    if n == 0:
        return ScaledReal.from_float(1.0), ScaledReal.from_float(0.0)
    cur, prev, exp2 = 2.0 * y, 1.0, 0
    for k in range(1, n):
        nxt = 2.0 * y * cur - 2.0 * k * prev
        cur, prev, e = _renormalise(nxt, cur)
        exp2 += e

    def norm(k: int) -> ScaledReal:
        return ScaledReal.from_log(-0.5 * k * math.log(2.0) - 0.5 * math.lgamma(k + 1))

    return (
        ScaledReal.from_parts(cur, exp2) * norm(n),
        ScaledReal.from_parts(prev, exp2) * norm(n - 1),
    )


def hermite_reference(n: int, x: float) -> ScaledReal:
    """2^{-n/2} (n!)^{-1/2} H_n(sqrt(2) x), independent of the phi recurrence."""
    return hermite_window(n, x)[0]
