"""Working precision and first-order error tracking on top of mpmath.

Every real in the library is an ``mpmath.mpf`` at a binary precision taken
from a :class:`PrecisionConfig`.  Composite quantities are assembled from
:class:`Approx` values, which carry a running bound on their absolute error
(truncation plus a four-ulp allowance per rounded operation).  The bound is a
heuristic, not a rigorous enclosure; verification compensates by re-checking
close calls at escalated precision.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

import mpmath
from mpmath import mp, mpf
from mpmath.libmp import from_rational, round_nearest

from .errors import InvalidParameter

DEFAULT_BITS = 128
GUARD_BITS = 16
# four ulps, with ulp(v) <= 2**(1-p)*|v|
ROUNDING_UNITS = 8.0

Real = Union[mpf, int, Fraction, float]


def default_bits() -> int:
    raw = os.environ.get("ELLINT_PREC_BITS")
    if not raw:
        return DEFAULT_BITS
    try:
        bits = int(raw)
    except ValueError:
        raise InvalidParameter(f"ELLINT_PREC_BITS must be an integer, got {raw!r}")
    if bits < 53:
        raise InvalidParameter("ELLINT_PREC_BITS must be at least 53")
    return bits


@dataclass(frozen=True)
class PrecisionConfig:
    bits: int = DEFAULT_BITS
    escalation_factor: int = 2

    def __post_init__(self):
        if self.bits < 53:
            raise InvalidParameter(f"precision must be at least 53 bits, got {self.bits}")
        if self.escalation_factor < 2:
            raise InvalidParameter("escalation_factor must be >= 2")

    def escalated(self) -> "PrecisionConfig":
        return PrecisionConfig(self.bits * self.escalation_factor, self.escalation_factor)

    @classmethod
    def default(cls) -> "PrecisionConfig":
        return cls(default_bits())


def as_config(prec: Union[PrecisionConfig, int, None]) -> PrecisionConfig:
    if prec is None:
        return PrecisionConfig.default()
    if isinstance(prec, PrecisionConfig):
        return prec
    return PrecisionConfig(int(prec))


def bits_of(prec: Union[PrecisionConfig, int, None]) -> int:
    return as_config(prec).bits


def to_fraction(value: Real) -> Fraction:
    """Exact rational value of a binary float, mpf, int or Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    sign, man, exp, _ = value._mpf_
    if not man and exp:
        raise InvalidParameter(f"cannot convert {value} to a rational")
    num = -int(man) if sign else int(man)
    if exp >= 0:
        return Fraction(num << exp)
    return Fraction(num, 1 << -exp)


def rational_mpf(q: Fraction) -> mpf:
    """Round an exact rational to the current working precision."""
    q = Fraction(q)
    return mpf(from_rational(q.numerator, q.denominator, mp.prec, round_nearest))


def ldexp_units(units: float, bits: int) -> mpf:
    """Convert an error expressed in units of 2**-bits to an mpf."""
    if math.isinf(units):
        return mpf("inf")
    return mpmath.ldexp(mpf(units), -bits)


class Approx:
    """An mpf value paired with an absolute error bound.

    The bound is stored as a float in units of ``2**-p`` where ``p`` is the
    working precision current at construction, which keeps it representable
    for any value magnitude the library meets.  All arithmetic between
    ``Approx`` objects must happen under a single working precision.
    """

    __slots__ = ("v", "u")

    def __init__(self, v, u: float = 0.0):
        self.v = v if isinstance(v, mpf) else mpf(v)
        self.u = u

    @classmethod
    def exact(cls, q: Real) -> "Approx":
        if isinstance(q, Fraction) and q.denominator != 1:
            v = rational_mpf(q)
            return cls(v, 0.5 * abs(float(v)) * 2.0)
        if isinstance(q, Fraction):
            q = q.numerator
        v = mpf(q)
        return cls(v, 0.0 if v == q else 2.0 * abs(float(v)))

    @classmethod
    def from_result(cls, res) -> "Approx":
        return cls(res.value, float(mpmath.ldexp(res.err_bound, mp.prec)))

    @property
    def err(self) -> mpf:
        return ldexp_units(self.u, mp.prec)

    def _round(self, v) -> float:
        return ROUNDING_UNITS * abs(float(v))

    @staticmethod
    def lift(o) -> "Approx":
        if isinstance(o, Approx):
            return o
        if isinstance(o, mpf):
            return Approx(o, 0.0)
        return Approx.exact(o)

    def __add__(self, o):
        o = Approx.lift(o)
        v = self.v + o.v
        return Approx(v, self.u + o.u + self._round(v))

    __radd__ = __add__

    def __neg__(self):
        return Approx(-self.v, self.u)

    def __sub__(self, o):
        o = Approx.lift(o)
        v = self.v - o.v
        return Approx(v, self.u + o.u + self._round(v))

    def __rsub__(self, o):
        return Approx.lift(o) - self

    def __mul__(self, o):
        o = Approx.lift(o)
        v = self.v * o.v
        a, b = abs(float(self.v)), abs(float(o.v))
        tiny = self.u * o.u * 2.0 ** -mp.prec
        return Approx(v, a * o.u + b * self.u + tiny + self._round(v))

    __rmul__ = __mul__

    def __truediv__(self, o):
        o = Approx.lift(o)
        v = self.v / o.v
        b = abs(float(o.v))
        slack = b - o.u * 2.0 ** -mp.prec
        if slack <= 0:
            return Approx(v, math.inf)
        return Approx(v, (self.u + abs(float(v)) * o.u) / slack + self._round(v))

    def __rtruediv__(self, o):
        return Approx.lift(o) / self

    def __pow__(self, k):
        """Power with an exact or tracked exponent; base must be positive."""
        if isinstance(k, Approx):
            return (k * self.log()).exp()
        kq = k if isinstance(k, mpf) else (rational_mpf(k) if isinstance(k, Fraction) else mpf(k))
        v = mpmath.power(self.v, kq)
        rel = self._rel()
        return Approx(v, abs(float(kq)) * abs(float(v)) * rel + 2 * self._round(v))

    def _rel(self) -> float:
        a = abs(float(self.v))
        slack = a - self.u * 2.0 ** -mp.prec
        if slack <= 0:
            return math.inf
        return self.u / slack

    def log(self) -> "Approx":
        v = mpmath.log(self.v)
        return Approx(v, self._rel() + self._round(v))

    def log1p(self) -> "Approx":
        """log(1 + self), accurate when ``self`` is small."""
        v = mpmath.log1p(self.v)
        one_plus = 1.0 + float(self.v) - self.u * 2.0 ** -mp.prec
        if one_plus <= 0:
            return Approx(v, math.inf)
        return Approx(v, self.u / one_plus + self._round(v))

    def exp(self) -> "Approx":
        v = mpmath.exp(self.v)
        # error of exp is |v| * (e^u - 1) ~ |v| u for the tiny u in play
        return Approx(v, abs(float(v)) * self.u + self._round(v))

    def sqrt(self) -> "Approx":
        v = mpmath.sqrt(self.v)
        return Approx(v, 0.5 * abs(float(v)) * self._rel() + self._round(v))

    def result(self, terms_used: int = 0):
        from .core import EvalResult

        return EvalResult(self.v, self.err, terms_used)

    def __repr__(self):
        return f"Approx({mpmath.nstr(self.v, 20)} +- {mpmath.nstr(self.err, 3)})"


def pi() -> Approx:
    return Approx(+mp.pi, 1.0)


def log_const(q: Real) -> Approx:
    return Approx.exact(q).log()
