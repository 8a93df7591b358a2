"""Floating values with an unbounded binary exponent."""

from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = ["ScaledReal"]

_LN2 = math.log(2.0)
_LOG10_2 = math.log10(2.0)


@dataclass(frozen=True)
class ScaledReal:
    """sign * mantissa * 2**exponent2 with mantissa in [1, 2), or zero.

    Used for polynomial values of order e^{N t^2} that overflow binary64 long
    before the degrees of interest.
    """

    sign: int
    exponent2: int
    mantissa: float

    def __post_init__(self):
        if self.sign == 0:
            if self.mantissa != 0.0:
                raise ValueError("zero ScaledReal must have mantissa 0")
        elif not (1.0 <= self.mantissa < 2.0) or self.sign not in (-1, 1):
            raise ValueError(f"bad ScaledReal parts {self!r}")

    # -- construction -------------------------------------------------------

    @classmethod
    def from_parts(cls, value: float, exponent2: int = 0) -> "ScaledReal":
        """Represent value * 2**exponent2."""
        if value == 0.0:
            return ZERO
        if not math.isfinite(value):
            raise ValueError(f"cannot scale non-finite value {value!r}")
        m, e = math.frexp(value)
        return cls(1 if m > 0 else -1, exponent2 + e - 1, 2.0 * abs(m))

    @classmethod
    def from_float(cls, value: float) -> "ScaledReal":
        return cls.from_parts(float(value), 0)

    @classmethod
    def from_log(cls, log_abs: float, sign: int = 1) -> "ScaledReal":
        """Value with natural log of magnitude log_abs."""
        if sign == 0 or log_abs == -math.inf:
            return ZERO
        e2 = math.floor(log_abs / _LN2)
        return cls.from_parts(sign * math.exp(log_abs - e2 * _LN2), e2)

    @classmethod
    def from_log10(cls, log10_abs: float, sign: int = 1) -> "ScaledReal":
        if sign == 0 or log10_abs == -math.inf:
            return ZERO
        e2 = math.floor(log10_abs / _LOG10_2)
        return cls.from_parts(sign * 10.0 ** (log10_abs - e2 * _LOG10_2), e2)

    # -- queries ------------------------------------------------------------

    def is_zero(self) -> bool:
        return self.sign == 0

    def log(self) -> float:
        """Natural log of |value| (-inf for zero)."""
        if self.sign == 0:
            return -math.inf
        return math.log(self.mantissa) + self.exponent2 * _LN2

    def log10(self) -> float:
        if self.sign == 0:
            return -math.inf
        return math.log10(self.mantissa) + self.exponent2 * _LOG10_2

    def __float__(self) -> float:
        if self.sign == 0:
            return 0.0
        try:
            return math.ldexp(self.sign * self.mantissa, self.exponent2)
        except OverflowError:
            return self.sign * math.inf

    # -- arithmetic ---------------------------------------------------------

    def __neg__(self) -> "ScaledReal":
        return ScaledReal(-self.sign, self.exponent2, self.mantissa)

    def __abs__(self) -> "ScaledReal":
        return ScaledReal(abs(self.sign), self.exponent2, self.mantissa)

    def __mul__(self, other) -> "ScaledReal":
        if not isinstance(other, ScaledReal):
            other = ScaledReal.from_float(other)
        if self.sign == 0 or other.sign == 0:
            return ZERO
        return ScaledReal.from_parts(
            self.sign * other.sign * self.mantissa * other.mantissa,
            self.exponent2 + other.exponent2,
        )

    __rmul__ = __mul__

    def __truediv__(self, other) -> "ScaledReal":
        if not isinstance(other, ScaledReal):
            other = ScaledReal.from_float(other)
        if other.sign == 0:
            raise ZeroDivisionError("ScaledReal division by zero")
        if self.sign == 0:
            return ZERO
        return ScaledReal.from_parts(
            self.sign * other.sign * self.mantissa / other.mantissa,
            self.exponent2 - other.exponent2,
        )

    def __add__(self, other) -> "ScaledReal":
        if not isinstance(other, ScaledReal):
            other = ScaledReal.from_float(other)
        if self.sign == 0:
            return other
        if other.sign == 0:
            return self
        e = max(self.exponent2, other.exponent2)
        a = math.ldexp(self.sign * self.mantissa, self.exponent2 - e)
        b = math.ldexp(other.sign * other.mantissa, other.exponent2 - e)
        return ScaledReal.from_parts(a + b, e)

    __radd__ = __add__

    def __sub__(self, other) -> "ScaledReal":
        if not isinstance(other, ScaledReal):
            other = ScaledReal.from_float(other)
        return self + (-other)

    def __rsub__(self, other) -> "ScaledReal":
        return (-self) + other

    def ratio(self, other: "ScaledReal") -> float:
        """|self| / |other| as a plain float (may be inf or 0)."""
        return float(abs(self) / abs(other))


ZERO = ScaledReal(0, 0, 0.0)
