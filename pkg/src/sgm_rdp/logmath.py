"""Signed log-space arithmetic and log-domain special functions.

Every series in the accountant is summed as logarithms of term magnitudes so
that nothing overflows, even when ln A_alpha runs into the thousands.
"""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass, field
from typing import Iterable

NEG_INF = -math.inf

# Cody-Waite split of ln 2: LN2_HI has trailing zero bits, so e * LN2_HI is
# exact for any binary exponent e of a double.
_LN2_HI = 6.93147180369123816490e-01
_LN2_LO = 1.90821492927058770002e-10

# Below this, math.erfc loses relative accuracy to subnormal rounding.
_ERFC_DIRECT_FLOOR = sys.float_info.min * 1e10
_LOG_SQRT_PI = 0.5 * math.log(math.pi)


@dataclass(frozen=True)
class SignedLog:
    """A real number stored as ``sign * exp(logmag)``.

    ``sign`` is one of -1, 0, +1, and zero is represented as ``(0, -inf)``.
    ``residual`` holds the rounding remainder ln|x| - logmag when the value
    was built from a double, which keeps ``to_real`` within a few ulps of the
    original even for |x| near 1e300. Arithmetic results carry residual 0.
    """

    sign: int
    logmag: float
    residual: float = field(default=0.0, compare=False, repr=False)

    def __post_init__(self):
        if self.sign not in (-1, 0, 1):
            raise ValueError(f"sign must be -1, 0 or +1, got {self.sign!r}")
        if (self.sign == 0) != (self.logmag == NEG_INF):
            raise ValueError("sign 0 must pair with logmag -inf and vice versa")
        if math.isnan(self.logmag):
            raise ValueError("logmag is NaN")

    @classmethod
    def zero(cls) -> SignedLog:
        return cls(0, NEG_INF)

    @classmethod
    def from_real(cls, x: float) -> SignedLog:
        if x == 0.0:
            return cls.zero()
        if math.isnan(x):
            raise ValueError("cannot represent NaN")
        sign = 1 if x > 0 else -1
        ax = abs(x)
        if math.isinf(ax):
            return cls(sign, math.inf)
        m, e = math.frexp(ax)
        # ln|x| = e*ln2 + ln(m) carried as a double-double (hi, lo).
        t1 = e * _LN2_HI
        t2 = e * _LN2_LO + math.log(m)
        hi = t1 + t2
        lo = (t1 - hi) + t2 if abs(t1) >= abs(t2) else (t2 - hi) + t1
        return cls(sign, hi, lo)

    def to_real(self) -> float:
        if self.sign == 0:
            return 0.0
        return self.sign * (math.exp(self.logmag) * (1.0 + self.residual))

    def __neg__(self) -> SignedLog:
        return SignedLog(-self.sign, self.logmag, self.residual)

    def __add__(self, other: SignedLog) -> SignedLog:
        return signed_log_sum((self, other))

    def __mul__(self, other: SignedLog) -> SignedLog:
        if self.sign == 0 or other.sign == 0:
            return SignedLog.zero()
        return SignedLog(self.sign * other.sign, self.logmag + other.logmag)


def log_add_exp(a: float, b: float) -> float:
    """Return ln(e**a + e**b)."""
    if a < b:
        a, b = b, a
    if b == NEG_INF:
        return a
    if a == math.inf:
        return a
    return a + math.log1p(math.exp(b - a))


def log_sub_exp(a: float, b: float) -> float:
    """Return ln(e**a - e**b); requires a >= b."""
    if a < b:
        raise ValueError(f"log_sub_exp needs a >= b, got a={a!r}, b={b!r}")
    if b == NEG_INF:
        return a
    if a == b:
        return NEG_INF
    d = b - a
    # ln(1 - e^d): log(-expm1(d)) is accurate near d = 0, log1p(-exp(d)) for d << 0.
    if d > -math.log(2.0):
        return a + math.log(-math.expm1(d))
    return a + math.log1p(-math.exp(d))


class LogSum:
    """Accumulator for a mixed-sign series kept as two positive log-sums.

    Positive and negative terms are summed separately and combined once in
    :meth:`log_value`, so cancellation happens in a single subtraction.
    """

    __slots__ = ("log_pos", "log_neg")

    def __init__(self):
        self.log_pos = NEG_INF
        self.log_neg = NEG_INF

    def add(self, sign: int, logmag: float) -> None:
        if sign > 0:
            self.log_pos = log_add_exp(self.log_pos, logmag)
        elif sign < 0:
            self.log_neg = log_add_exp(self.log_neg, logmag)

    def value(self) -> SignedLog:
        if self.log_pos == self.log_neg:
            return SignedLog.zero()
        if self.log_pos > self.log_neg:
            return SignedLog(1, log_sub_exp(self.log_pos, self.log_neg))
        return SignedLog(-1, log_sub_exp(self.log_neg, self.log_pos))

    def log_value(self) -> float:
        """ln of the (positive) running total; raises if it is not positive."""
        v = self.value()
        if v.sign <= 0:
            raise ArithmeticError("series total is not positive")
        return v.logmag


def signed_log_sum(terms: Iterable[SignedLog]) -> SignedLog:
    acc = LogSum()
    for t in terms:
        acc.add(t.sign, t.logmag)
    return acc.value()


def log_binom(alpha: float, k: int) -> SignedLog:
    """Generalized binomial coefficient C(alpha, k) as a :class:`SignedLog`.

    Evaluated as a running sum of ln|alpha - i| - ln(i + 1) rather than via
    lgamma, so orders sitting next to an integer have no pole ambiguity.
    """
    if k < 0:
        raise ValueError("k must be non-negative")
    sign = 1
    logmag = 0.0
    for i in range(k):
        d = alpha - i
        if d == 0.0:
            return SignedLog.zero()
        if d < 0:
            sign = -sign
        logmag += math.log(abs(d)) - math.log(i + 1)
    return SignedLog(sign, logmag)


def log_erfc(x: float) -> float:
    """ln(erfc(x)), accurate where erfc(x) itself underflows."""
    if x <= 0.0:
        # erfc(x) = 2 - erfc(-x); log1p keeps the small deficit from 2.
        return math.log(2.0) + math.log1p(-0.5 * math.erfc(-x))
    r = math.erfc(x)
    if r > _ERFC_DIRECT_FLOOR:
        return math.log(r)
    # erfc(x) ~ exp(-x^2)/(x sqrt(pi)) * sum_n (-1)^n (2n-1)!! / (2x^2)^n
    inv = 1.0 / (2.0 * x * x)
    total = 1.0
    term = 1.0
    n = 1
    while True:
        term *= -(2 * n - 1) * inv
        total += term
        if abs(term) < 1e-17 * abs(total):
            break
        n += 1
    return -x * x - math.log(x) - _LOG_SQRT_PI + math.log(total)
