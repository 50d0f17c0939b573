"""Sign-tracked log-space arithmetic.

All coefficient pipelines in this package are built from ratios of gamma
functions that overflow double precision well before N = 30.  A value is
therefore carried as (sign, log|value|).  Multiplication composes signs and
adds logs; sums go through a max-shifted exponentiation with Neumaier
compensation in linear space, which is safe because the shifted terms are
bounded by 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = [
    "LogSigned",
    "ZERO",
    "ONE",
    "neumaier_sum",
    "log_signed_sum",
]

_LOG_ZERO = -math.inf


@dataclass(frozen=True)
class LogSigned:
    """A real number stored as sign in {-1, 0, +1} and log of its magnitude."""

    sign: int
    log_abs: float

    @staticmethod
    def from_float(x):
        if x == 0.0:
            return ZERO
        return LogSigned(1 if x > 0 else -1, math.log(abs(x)))

    def to_float(self):
        if self.sign == 0:
            return 0.0
        return self.sign * math.exp(self.log_abs)

    @property
    def is_zero(self):
        return self.sign == 0

    def __mul__(self, other):
        if isinstance(other, (int, float)):
            other = LogSigned.from_float(float(other))
        if self.sign == 0 or other.sign == 0:
            return ZERO
        return LogSigned(self.sign * other.sign, self.log_abs + other.log_abs)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, float)):
            other = LogSigned.from_float(float(other))
        if other.sign == 0:
            raise ZeroDivisionError("division by log-space zero")
        if self.sign == 0:
            return ZERO
        return LogSigned(self.sign * other.sign, self.log_abs - other.log_abs)

    def __neg__(self):
        return LogSigned(-self.sign, self.log_abs)

    def __abs__(self):
        return LogSigned(abs(self.sign), self.log_abs)

    def __add__(self, other):
        if isinstance(other, (int, float)):
            other = LogSigned.from_float(float(other))
        return log_signed_sum([self, other])

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, (int, float)):
            other = LogSigned.from_float(float(other))
        return log_signed_sum([self, -other])

    def powi(self, k: int):
        """Integer power; sign follows parity."""
        if self.sign == 0:
            return ONE if k == 0 else ZERO
        sign = self.sign if k % 2 else (1 if self.sign != 0 else 0)
        return LogSigned(sign, k * self.log_abs)

    def sqrt(self):
        if self.sign < 0:
            raise ValueError("sqrt of negative log-space value")
        if self.sign == 0:
            return ZERO
        return LogSigned(1, 0.5 * self.log_abs)


ZERO = LogSigned(0, _LOG_ZERO)
ONE = LogSigned(1, 0.0)


def neumaier_sum(values):
    """Compensated sum of an iterable of floats (Neumaier's variant)."""
    total = 0.0
    comp = 0.0
    for v in values:
        t = total + v
        if abs(total) >= abs(v):
            comp += (total - t) + v
        else:
            comp += (v - t) + total
        total = t
    return total + comp


def log_signed_sum(terms):
    """Sum of LogSigned terms.

    The terms are shifted by the largest magnitude, exponentiated (all
    magnitudes then at most 1) and accumulated with Neumaier compensation,
    so cancellation is resolved as accurately as double precision allows.
    """
    terms = [t for t in terms if t.sign != 0]
    if not terms:
        return ZERO
    m = max(t.log_abs for t in terms)
    if m == _LOG_ZERO:
        return ZERO
    total = neumaier_sum(t.sign * math.exp(t.log_abs - m) for t in terms)
    if total == 0.0:
        return ZERO
    return LogSigned(1 if total > 0 else -1, m + math.log(abs(total)))
