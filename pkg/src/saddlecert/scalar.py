"""Scalar back ends.

All series code is written once against plain Python operators (+, -, *, /);
the two back ends below supply constants and the few non-arithmetic queries
the algorithms need (magnitudes, zero tests, endpoint extraction).

``FLOAT`` uses IEEE doubles. ``INTERVAL`` uses a private mpmath interval
context at 53 bits, which rounds every endpoint outward. Because both modes
evaluate the same expressions in the same order, every float-mode result lies
inside its interval-mode counterpart whenever the inputs do, as long as no
float operation underflows or overflows (mpmath has no exponent limits).
"""
from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational

from mpmath.ctx_iv import MPIntervalContext

from .errors import InconclusiveInterval


def _as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (Rational, float)):
        return Fraction(value)
    return Fraction(str(value).strip())


class FloatArith:
    name = "float"
    zero = 0.0
    one = 1.0

    def const(self, value) -> float:
        if isinstance(value, float):
            return value
        return float(_as_fraction(value))

    def lower(self, x) -> float:
        return float(x)

    def upper(self, x) -> float:
        return float(x)

    def bounds(self, x) -> tuple[float, float]:
        return float(x), float(x)

    def mid(self, x) -> float:
        return float(x)

    def width(self, x) -> float:
        return 0.0

    def abs(self, x):
        return abs(x)

    def max(self, xs):
        return max(xs)

    def min(self, xs):
        return min(xs)

    def is_exact_zero(self, x) -> bool:
        return x == 0

    def excludes_zero(self, x) -> bool:
        return x != 0

    def contains(self, x, value) -> bool:
        return x == value

    def divide_checked(self, num, den):
        if den == 0:
            raise InconclusiveInterval("divisor rounds to zero in floating point")
        return num / den

    def __repr__(self):
        return "FLOAT"


class IntervalArith:
    name = "interval"

    def __init__(self, prec: int = 53):
        self.ctx = MPIntervalContext()
        self.ctx.prec = prec
        self.zero = self.ctx.mpf(0)
        self.one = self.ctx.mpf(1)

    def const(self, value):
        if isinstance(value, float):
            return self.ctx.mpf(value)
        if isinstance(value, self.ctx.mpf):
            return value
        q = _as_fraction(value)
        if q.denominator == 1:
            return self.ctx.mpf(q.numerator)
        return self.ctx.mpf(q.numerator) / q.denominator

    def interval(self, lo, hi):
        return self.ctx.mpf([lo, hi])

    def lower(self, x) -> float:
        x = self.const(x)
        lo = float(x.a)
        if lo > x.a:
            lo = math.nextafter(lo, -math.inf)
        return lo

    def upper(self, x) -> float:
        x = self.const(x)
        hi = float(x.b)
        if hi < x.b:
            hi = math.nextafter(hi, math.inf)
        return hi

    def bounds(self, x) -> tuple[float, float]:
        return self.lower(x), self.upper(x)

    def mid(self, x) -> float:
        return float(self.const(x).mid)

    def width(self, x) -> float:
        lo, hi = self.bounds(x)
        return hi - lo

    def abs(self, x):
        return abs(x)

    def max(self, xs):
        xs = list(xs)
        lo = max((x.a for x in xs), key=_EndpointKey)
        hi = max((x.b for x in xs), key=_EndpointKey)
        return self.ctx.mpf([lo, hi])

    def min(self, xs):
        xs = list(xs)
        lo = min((x.a for x in xs), key=_EndpointKey)
        hi = min((x.b for x in xs), key=_EndpointKey)
        return self.ctx.mpf([lo, hi])

    def is_exact_zero(self, x) -> bool:
        return x.a == 0 and x.b == 0

    def excludes_zero(self, x) -> bool:
        return x.a > 0 or x.b < 0

    def contains(self, x, value) -> bool:
        return bool(x.a <= value <= x.b)

    def divide_checked(self, num, den):
        if not self.excludes_zero(den):
            raise InconclusiveInterval(f"divisor interval {den} contains zero")
        return num / den

    def __repr__(self):
        return f"INTERVAL(prec={self.ctx.prec})"


class _EndpointKey:
    # degenerate mpmath intervals compare correctly but are not totally ordered
    # for max(); this wrapper forces a plain comparison
    __slots__ = ("v",)

    def __init__(self, v):
        self.v = v

    def __lt__(self, other):
        return bool(self.v < other.v)


FLOAT = FloatArith()
INTERVAL = IntervalArith()


def get_arith(mode):
    if isinstance(mode, (FloatArith, IntervalArith)):
        return mode
    if mode == "float":
        return FLOAT
    if mode == "interval":
        return INTERVAL
    raise ValueError(f"unknown scalar mode {mode!r}")
