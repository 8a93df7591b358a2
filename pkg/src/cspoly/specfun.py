"""Real-argument special functions: log-gamma and the Airy functions.

Only what the asymptotic formulas need is provided; everything is computed in
binary64 from first principles (no tabulated rational approximations).

Airy functions are evaluated by three routes:

* the Maclaurin series at the origin (used to seed the others),
* Taylor-series continuation of ``y'' = x y`` between nodes spaced 1/4 apart,
  each solution stepped only in its numerically stable direction,
* the large-argument asymptotic expansions for ``|x| >= 9``, optimally
  truncated (the smallest retained term is below 1e-16 there).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import DomainError

__all__ = [
    "AiryQuad",
    "airy",
    "airy_scaled",
    "airy_series",
    "airy_asymptotic",
    "airy_zeta",
    "bernoulli_numbers",
    "log_gamma",
]

_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)
_STIRLING_MIN = 10.0
_STIRLING_TERMS = 9


@lru_cache(maxsize=None)
def bernoulli_numbers(count: int) -> tuple[Fraction, ...]:
    """Exact Bernoulli numbers B_0 .. B_{count-1} (B_1 = -1/2 convention)."""
    b = [Fraction(1)]
    for m in range(1, count):
        acc = Fraction(0)
        for k in range(m):
            acc += math.comb(m + 1, k) * b[k]
        b.append(-acc / (m + 1))
    return tuple(b)


@lru_cache(maxsize=None)
def _stirling_coefficients() -> tuple[float, ...]:
    b = bernoulli_numbers(2 * _STIRLING_TERMS + 1)
    return tuple(
        float(b[2 * j] / (2 * j * (2 * j - 1))) for j in range(1, _STIRLING_TERMS + 1)
    )


def _stirling(z: float) -> float:
    # valid for z >= _STIRLING_MIN; the first omitted term is below 1e-18
    r = 1.0 / z
    r2 = r * r
    corr = 0.0
    for c in reversed(_stirling_coefficients()):
        corr = corr * r2 + c
    return (z - 0.5) * math.log(z) - z + _HALF_LOG_2PI + corr * r


def _stirling_increment(z: float, eps: float) -> float:
    """_stirling(z + eps) - _stirling(z) without cancellation."""
    u = eps / z
    main = (z - 0.5) * math.log1p(u) + eps * math.log(z + eps) - eps
    corr = 0.0
    l1p = math.log1p(u)
    for j, c in enumerate(_stirling_coefficients(), start=1):
        p = 2 * j - 1
        corr += c * z ** (-p) * math.expm1(-p * l1p)
    return main + corr


def log_gamma(x: float) -> float:
    """ln Gamma(x) for finite x > 0.

    Small arguments are shifted upward, ln G(x) = ln G(x+k) - ln prod(x+j),
    until x + k >= 10, where the Stirling series with Bernoulli corrections
    converges to full precision. Near the zeros x = 1 and x = 2 the shift is
    written as an increment from the neighbouring integer so the result keeps
    full relative accuracy.
    """
    x = float(x)
    if not math.isfinite(x) or x <= 0.0:
        raise DomainError(f"log_gamma requires finite x > 0, got {x!r}")
    if x >= _STIRLING_MIN:
        return _stirling(x)
    if x == 1.0 or x == 2.0:
        return 0.0
    k = math.ceil(_STIRLING_MIN - x)
    if 0.5 < x < 2.5:
        m = 1 if x < 1.5 else 2
        eps = x - m
        shift = math.fsum(math.log1p(eps / (m + j)) for j in range(k))
        return _stirling_increment(m + k, eps) - shift
    prod = 1.0
    for j in range(k):
        prod *= x + j
    return _stirling(x + k) - math.log(prod)


# --------------------------------------------------------------------------
# Airy functions


@dataclass(frozen=True)
class AiryQuad:
    """Values of Ai, Ai', Bi, Bi' at one argument."""

    ai: float
    ai_prime: float
    bi: float
    bi_prime: float

    def wronskian(self) -> float:
        return self.ai * self.bi_prime - self.ai_prime * self.bi


_ASYM_THRESHOLD = 9.0
_NODE_STEP = 0.25
_NODE_COUNT = int(round(_ASYM_THRESHOLD / _NODE_STEP))
_SQRT_PI = math.sqrt(math.pi)
_SQRT3 = math.sqrt(3.0)


@lru_cache(maxsize=None)
def _origin_values() -> tuple[float, float]:
    """Ai(0) and -Ai'(0) from 3^{-2/3}/G(2/3) and 3^{-1/3}/G(1/3)."""
    c1 = 3.0 ** (-2.0 / 3.0) * math.exp(-log_gamma(2.0 / 3.0))
    c2 = 3.0 ** (-1.0 / 3.0) * math.exp(-log_gamma(1.0 / 3.0))
    return c1, c2


def airy_zeta(x: float) -> float:
    """(2/3)|x|^{3/2}, the exponent/phase variable of the asymptotic forms."""
    ax = abs(x)
    return 2.0 / 3.0 * ax * math.sqrt(ax)


def airy_series(x: float) -> AiryQuad:
    """Maclaurin series, accumulated with math.fsum.

    Accurate to ~1e-15 for |x| <= 2; the Ai part loses digits to cancellation
    for larger positive x (about 1e-9 relative at x = 5).
    """
    c1, c2 = _origin_values()
    x3 = x * x * x
    f_t, g_t, fp_t, gp_t = 1.0, x, x * x / 2.0, 1.0
    f, g, fp, gp = [f_t], [g_t], [fp_t], [gp_t]
    for k in range(1, 400):
        f_t *= x3 / ((3 * k - 1) * (3 * k))
        g_t *= x3 / ((3 * k) * (3 * k + 1))
        gp_t *= x3 / ((3 * k - 2) * (3 * k))
        fp_t *= x3 / ((3 * k) * (3 * k + 2))
        f.append(f_t)
        g.append(g_t)
        fp.append(fp_t)
        gp.append(gp_t)
        if max(abs(f_t), abs(g_t), abs(fp_t), abs(gp_t)) < 1e-18 and k > 2:
            break
    F, G = math.fsum(f), math.fsum(g)
    Fp, Gp = (0.0 if x == 0.0 else math.fsum(fp)), math.fsum(gp)
    return AiryQuad(
        ai=math.fsum((c1 * F, -c2 * G)),
        ai_prime=math.fsum((c1 * Fp, -c2 * Gp)),
        bi=_SQRT3 * (c1 * F + c2 * G),
        bi_prime=_SQRT3 * (c1 * Fp + c2 * Gp),
    )


@lru_cache(maxsize=None)
def _asym_coefficients(count: int = 80) -> tuple[tuple[float, ...], tuple[float, ...]]:
    u = [1.0]
    for k in range(1, count):
        u.append(u[-1] * (6 * k - 5) * (6 * k - 3) * (6 * k - 1) / ((2 * k - 1) * 216 * k))
    v = [1.0] + [-(6 * k + 1) / (6 * k - 1) * u[k] for k in range(1, count)]
    return tuple(u), tuple(v)


def _optimal_sums(zeta: float, coeffs: tuple[float, ...], alternate: bool) -> float:
    """Sum coeffs[k] (+-1)^k zeta^{-k} up to the smallest term."""
    total = 0.0
    prev = math.inf
    p = 1.0
    for k, c in enumerate(coeffs):
        term = c * p
        if abs(term) > prev:
            break
        total += -term if (alternate and k % 2) else term
        prev = abs(term)
        if abs(term) < 1e-18 * abs(total):
            break
        p /= zeta
    return total


def _oscillatory_sums(zeta: float, coeffs: tuple[float, ...]) -> tuple[float, float]:
    """Even and odd parts: sum (-1)^k c_{2k} zeta^{-2k}, sum (-1)^k c_{2k+1} zeta^{-2k-1}."""
    even = odd = 0.0
    prev = math.inf
    p = 1.0
    for k, c in enumerate(coeffs):
        term = c * p
        if abs(term) > prev:
            break
        sign = -1.0 if (k // 2) % 2 else 1.0
        if k % 2:
            odd += sign * term
        else:
            even += sign * term
        prev = abs(term)
        if abs(term) < 1e-18 * max(abs(even), abs(odd)):
            break
        p /= zeta
    return even, odd


def airy_asymptotic(x: float) -> AiryQuad:
    """Large-|x| expansions, exponentially scaled for x > 0.

    For x > 0 returns (Ai e^z, Ai' e^z, Bi e^-z, Bi' e^-z) with z = (2/3)x^{3/2};
    for x < 0 the oscillatory form (no scaling). Intended for |x| >= 9.
    """
    if x == 0.0:
        raise DomainError("asymptotic Airy expansion needs x != 0")
    u, v = _asym_coefficients()
    ax = abs(x)
    q = math.sqrt(math.sqrt(ax))
    zeta = airy_zeta(x)
    if x > 0.0:
        return AiryQuad(
            ai=_optimal_sums(zeta, u, True) / (2.0 * _SQRT_PI * q),
            ai_prime=-q * _optimal_sums(zeta, v, True) / (2.0 * _SQRT_PI),
            bi=_optimal_sums(zeta, u, False) / (_SQRT_PI * q),
            bi_prime=q * _optimal_sums(zeta, v, False) / _SQRT_PI,
        )
    pu, qu = _oscillatory_sums(zeta, u)
    pv, qv = _oscillatory_sums(zeta, v)
    # cos/sin of zeta - pi/4 without rounding the shift into zeta
    cz, sz = math.cos(zeta), math.sin(zeta)
    c = (cz + sz) / math.sqrt(2.0)
    s = (sz - cz) / math.sqrt(2.0)
    return AiryQuad(
        ai=(c * pu + s * qu) / (_SQRT_PI * q),
        ai_prime=q * (s * pv - c * qv) / _SQRT_PI,
        bi=(-s * pu + c * qu) / (_SQRT_PI * q),
        bi_prime=q * (c * pv + s * qv) / _SQRT_PI,
    )


def _taylor_step(x0: float, y: float, dy: float, h: float) -> tuple[float, float]:
    """Advance a solution of y'' = x y from x0 to x0 + h by its Taylor series."""
    if h == 0.0:
        return y, dy
    h2 = h * h
    h3 = h2 * h
    # d_k = c_k h^k
    d_km1, d_k = y, dy * h
    d_kp1 = x0 * y * h2 / 2.0
    val = [d_km1, d_k, d_kp1]
    der = [d_k, 2.0 * d_kp1]
    k = 1
    while True:
        d_next = (x0 * h2 * d_k + h3 * d_km1) / ((k + 2) * (k + 1))
        val.append(d_next)
        der.append((k + 2) * d_next)
        if abs(d_next) + abs(d_kp1) < 1e-18 * (abs(y) + abs(dy * h)) and k > 3:
            break
        k += 1
        if k > 200:
            break
        d_km1, d_k, d_kp1 = d_k, d_kp1, d_next
    return math.fsum(val), math.fsum(der) / h


@lru_cache(maxsize=None)
def _node_table() -> dict[int, tuple[float, float, float, float]]:
    """(Ai, Ai', Bi, Bi') at nodes j/4, j = -36..36, unscaled."""
    c1, c2 = _origin_values()
    table: dict[int, list[float]] = {j: [0.0] * 4 for j in range(-_NODE_COUNT, _NODE_COUNT + 1)}
    origin = (c1, -c2, _SQRT3 * c1, _SQRT3 * c2)
    table[0] = list(origin)

    # Bi grows for x > 0: march forward from the origin
    y, dy = origin[2], origin[3]
    for j in range(1, _NODE_COUNT + 1):
        y, dy = _taylor_step((j - 1) * _NODE_STEP, y, dy, _NODE_STEP)
        table[j][2:] = [y, dy]

    # Ai decays for x > 0: march backward from the asymptotic anchor
    anchor = airy_asymptotic(_ASYM_THRESHOLD)
    scale = math.exp(-airy_zeta(_ASYM_THRESHOLD))
    y, dy = anchor.ai * scale, anchor.ai_prime * scale
    table[_NODE_COUNT][:2] = [y, dy]
    for j in range(_NODE_COUNT - 1, 0, -1):
        y, dy = _taylor_step((j + 1) * _NODE_STEP, y, dy, -_NODE_STEP)
        table[j][:2] = [y, dy]

    # both oscillate for x < 0: march left from the origin
    ya, dya, yb, dyb = origin
    for j in range(-1, -_NODE_COUNT - 1, -1):
        x0 = (j + 1) * _NODE_STEP
        ya, dya = _taylor_step(x0, ya, dya, -_NODE_STEP)
        yb, dyb = _taylor_step(x0, yb, dyb, -_NODE_STEP)
        table[j] = [ya, dya, yb, dyb]
    return {j: tuple(vals) for j, vals in table.items()}


def _airy_interior(x: float) -> AiryQuad:
    j = int(round(x / _NODE_STEP))
    x0 = j * _NODE_STEP
    ai, aip, bi, bip = _node_table()[j]
    ai, aip = _taylor_step(x0, ai, aip, x - x0)
    bi, bip = _taylor_step(x0, bi, bip, x - x0)
    return AiryQuad(ai, aip, bi, bip)


def airy_scaled(x: float) -> AiryQuad:
    """Ai, Ai', Bi, Bi' with the exponential factors removed for x > 0.

    Returns (Ai e^z, Ai' e^z, Bi e^-z, Bi' e^-z), z = (2/3) x^{3/2}, when
    x > 0 and the plain values otherwise. Finite for every finite x.
    """
    x = float(x)
    if not math.isfinite(x):
        raise DomainError(f"airy requires finite x, got {x!r}")
    if abs(x) >= _ASYM_THRESHOLD:
        return airy_asymptotic(x)
    q = _airy_interior(x)
    if x <= 0.0:
        return q
    e = math.exp(airy_zeta(x))
    return AiryQuad(q.ai * e, q.ai_prime * e, q.bi / e, q.bi_prime / e)


def airy(x: float) -> AiryQuad:
    """Ai(x), Ai'(x), Bi(x), Bi'(x) for finite real x.

    Where Bi overflows (x above ~104) bi and bi_prime are +inf and the Ai
    values underflow gracefully toward zero.
    """
    x = float(x)
    if not math.isfinite(x):
        raise DomainError(f"airy requires finite x, got {x!r}")
    if -_ASYM_THRESHOLD < x < _ASYM_THRESHOLD:
        return _airy_interior(x)
    q = airy_asymptotic(x)
    if x < 0.0:
        return q
    zeta = airy_zeta(x)
    try:
        grow = math.exp(zeta)
    except OverflowError:
        grow = math.inf
    decay = math.exp(-zeta)
    return AiryQuad(q.ai * decay, q.ai_prime * decay, q.bi * grow, q.bi_prime * grow)
