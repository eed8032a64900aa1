"""Exact rational sequences and truncated power series in ``x = r**2``.

All coefficient work is done with :class:`fractions.Fraction`; nothing in
this module touches floating point except :func:`ps_eval`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable, List, Optional, Sequence, Tuple, Union

import mpmath
from mpmath import mpf

from .errors import DivisionByZeroSeries, InvalidParameter, RadiusGuard
from .precision import GUARD_BITS, as_config, ldexp_units, rational_mpf

SEQUENCE_IDS = ("a", "a_tilde", "b", "C", "c", "c_tilde", "d")

# ---------------------------------------------------------------------------
# sequences


class _ACache:
    """Grows the list a_n = [(1/2)_n / n!]**2 on demand."""

    def __init__(self):
        self.values: List[Fraction] = [Fraction(1)]

    def upto(self, n: int) -> List[Fraction]:
        vals = self.values
        while len(vals) <= n:
            k = len(vals) - 1
            vals.append(vals[k] * Fraction(2 * k + 1, 2 * k + 2) ** 2)
        return vals


_A = _ACache()


def a_coeffs(n_max: int) -> List[Fraction]:
    return _A.upto(n_max)[: n_max + 1]


def seq(tag: str, n: int) -> Fraction:
    """Exact n-th term of one of the named sequences."""
    if tag not in SEQUENCE_IDS:
        raise InvalidParameter(f"unknown sequence {tag!r}; expected one of {SEQUENCE_IDS}")
    if n < 0:
        raise InvalidParameter("sequence index must be nonnegative")
    a = _A.upto(n + 4)
    if tag == "a":
        return a[n]
    if tag == "a_tilde":
        return Fraction(3, 4 * (2 * n + 1)) - a[n]
    if tag == "b":
        return (
            Fraction(2 * n + 8, 2 * n + 7) * a[n + 4]
            - a[n + 3] / 2
            - a[n + 2] / 16
            - a[n + 1] / 32
        )
    if tag == "C":
        return seq("b", n) / a[n]
    if tag == "c":
        return (2 * n + 3) * a[n + 1]
    if tag == "c_tilde":
        num = (22 * n + 83) * (2 * n + 9) * (2 * n + 7) * (2 * n + 5) * (2 * n + 3)
        den = (n + 4) ** 2 * (32276 * n * n + 123808 * n + 110907)
        return Fraction(num, den) * a[n + 3]
    # d
    poly = Fraction(10196 * n * n + 39096 * n + 34975, (2 * n + 7) * (2 * n + 5) * (2 * n + 3))
    return (2 * n + 1) * (poly - 2880 * a[n + 3])


def seq_list(tag: str, n_max: int) -> List[Fraction]:
    """Terms 0..n_max of a sequence; linear time for the whole list."""
    a = _A.upto(n_max + 4)
    if tag == "a":
        return a[: n_max + 1]
    return [seq(tag, n) for n in range(n_max + 1)]


def b_closed_form(n: int, constant: int = 123) -> Fraction:
    """Factored form of b_n; ``constant`` exists so tests can mutate it."""
    a = _A.upto(n + 2)
    num = (n + 2) * (n + 1) * (26 * n * n + 116 * n + constant)
    den = 16 * (n + 3) * (n + 4) * (2 * n + 3) ** 2
    return Fraction(num, den) * a[n + 2]


def seq_closed_form_check(tag: str = "b", n_max: int = 100, constant: int = 123) -> bool:
    """True iff the defining and factored forms of ``b_n`` agree for all n <= n_max."""
    if tag != "b":
        raise InvalidParameter("only the b sequence has a separate closed form")
    return all(seq("b", n) == b_closed_form(n, constant) for n in range(n_max + 1))


# ---------------------------------------------------------------------------
# power series


Coeff = Union[Fraction, int]


@dataclass(frozen=True)
class PowerSeries:
    """Truncated series ``sum coeffs[n] x**n`` with ``order = len(coeffs) - 1``."""

    coeffs: Tuple[Fraction, ...]
    _hash: int = field(default=0, init=False, repr=False, compare=False)

    def __post_init__(self):
        if not self.coeffs:
            raise InvalidParameter("a power series needs at least one coefficient")
        object.__setattr__(self, "coeffs", tuple(Fraction(c) for c in self.coeffs))
        object.__setattr__(self, "_hash", hash(self.coeffs))

    def __hash__(self):
        return self._hash

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @classmethod
    def from_fn(cls, fn: Callable[[int], Coeff], order: int) -> "PowerSeries":
        return cls(tuple(Fraction(fn(n)) for n in range(order + 1)))

    @classmethod
    def poly(cls, coeffs: Sequence[Coeff], order: int) -> "PowerSeries":
        c = list(coeffs)[: order + 1]
        return cls(tuple(c) + (Fraction(0),) * (order + 1 - len(c)))

    def truncate(self, order: int) -> "PowerSeries":
        if order > self.order:
            raise InvalidParameter("cannot extend a truncated series")
        return PowerSeries(self.coeffs[: order + 1])

    def __getitem__(self, n: int) -> Fraction:
        return self.coeffs[n]

    def __len__(self):
        return len(self.coeffs)

    def _pair(self, other) -> Tuple["PowerSeries", "PowerSeries"]:
        if not isinstance(other, PowerSeries):
            other = PowerSeries.poly([Fraction(other)], self.order)
        n = min(self.order, other.order)
        return self.truncate(n), other.truncate(n)

    def __add__(self, other):
        u, v = self._pair(other)
        return PowerSeries(tuple(a + b for a, b in zip(u.coeffs, v.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return PowerSeries(tuple(-a for a in self.coeffs))

    def __sub__(self, other):
        u, v = self._pair(other)
        return PowerSeries(tuple(a - b for a, b in zip(u.coeffs, v.coeffs)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, PowerSeries):
            return ps_mul(self, other)
        q = Fraction(other)
        return PowerSeries(tuple(a * q for a in self.coeffs))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, PowerSeries):
            return ps_div(self, other)
        q = Fraction(other)
        return PowerSeries(tuple(a / q for a in self.coeffs))

    def mul_x(self, k: int = 1) -> "PowerSeries":
        """Multiply by x**k, dropping the top k coefficients to keep the order."""
        if k == 0:
            return self
        return PowerSeries((Fraction(0),) * k + self.coeffs[: len(self.coeffs) - k])

    def div_x(self, k: int = 1) -> "PowerSeries":
        """Divide by x**k; the lowest k coefficients must vanish.  Order drops by k."""
        if k == 0:
            return self
        if any(c != 0 for c in self.coeffs[:k]):
            raise InvalidParameter(f"series is not divisible by x**{k}")
        if k > self.order:
            raise InvalidParameter("not enough terms to divide")
        return PowerSeries(self.coeffs[k:])

    def derivative(self) -> "PowerSeries":
        return PowerSeries(tuple(n * c for n, c in enumerate(self.coeffs))[1:] or (Fraction(0),))

    def integral(self) -> "PowerSeries":
        """Antiderivative with zero constant term; order grows by one."""
        return PowerSeries((Fraction(0),) + tuple(c / (n + 1) for n, c in enumerate(self.coeffs)))

    def log(self) -> "PowerSeries":
        return ps_log(self)

    def to_json(self) -> dict:
        return {"order": self.order, "coeffs": [fraction_str(c) for c in self.coeffs]}


def fraction_str(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def ps_mul(u: PowerSeries, v: PowerSeries) -> PowerSeries:
    n = min(u.order, v.order)
    a, b = u.coeffs, v.coeffs
    out = []
    for k in range(n + 1):
        s = Fraction(0)
        for i in range(k + 1):
            if a[i] and b[k - i]:
                s += a[i] * b[k - i]
        out.append(s)
    return PowerSeries(tuple(out))


def ps_div(u: PowerSeries, v: PowerSeries) -> PowerSeries:
    """Quotient u/v by the reciprocal recurrence; needs v[0] != 0."""
    n = min(u.order, v.order)
    if all(c == 0 for c in v.coeffs[: n + 1]):
        raise DivisionByZeroSeries("division by a series that vanishes to the working order")
    if v.coeffs[0] == 0:
        raise DivisionByZeroSeries("divisor has zero constant term; factor out x first")
    a, b = u.coeffs, v.coeffs
    inv0 = 1 / b[0]
    q: List[Fraction] = []
    for k in range(n + 1):
        s = a[k]
        for i in range(1, k + 1):
            if b[i]:
                s -= b[i] * q[k - i]
        q.append(s * inv0)
    return PowerSeries(tuple(q))


def ps_log(u: PowerSeries) -> PowerSeries:
    """log u for u[0] == 1, as the antiderivative of u'/u."""
    if u.coeffs[0] != 1:
        raise InvalidParameter("ps_log needs a unit constant term")
    if u.order == 0:
        return PowerSeries((Fraction(0),))
    return ps_div(u.derivative(), u.truncate(u.order - 1)).integral()


def _log_by_recurrence(coeffs: Sequence[Fraction]) -> PowerSeries:
    """log of a series with unit constant term via n L_n = n F_n - sum k L_k F_{n-k}."""
    n_max = len(coeffs) - 1
    logs = [Fraction(0)] * (n_max + 1)
    for n in range(1, n_max + 1):
        s = n * coeffs[n]
        for k in range(1, n):
            s -= k * logs[k] * coeffs[n - k]
        logs[n] = s / n
    return PowerSeries(tuple(logs))


KNOWN = ("F0", "F1", "logF0", "logF1")


@lru_cache(maxsize=64)
def ps_from_known(name: str, order: int) -> PowerSeries:
    """Closed-form coefficients of 2F1 building blocks and their logarithms."""
    if order < 1:
        raise InvalidParameter("order must be at least 1")
    if name == "F0":
        return PowerSeries(tuple(a_coeffs(order)))
    if name == "F1":
        return PowerSeries.from_fn(lambda n: Fraction(1, 2 * n + 1), order)
    if name == "logF0":
        return _log_by_recurrence(ps_from_known("F0", order).coeffs)
    if name == "logF1":
        return _log_by_recurrence(ps_from_known("F1", order).coeffs)
    if name in _EXTRA:
        return PowerSeries.from_fn(_EXTRA[name], order)
    raise InvalidParameter(f"unknown series {name!r}")


def _a(n: int) -> Fraction:
    return _A.upto(n)[n]


# further cancellation-free building blocks, all as coefficient formulas
_EXTRA = {
    # 2E/pi
    "Eh": lambda n: _a(n) / (1 - 2 * n),
    # (2/pi)(E - r'^2 K)/r^2
    "W": lambda n: _a(n) / (2 * (n + 1)),
    # (2/pi)(K - E)/r^2
    "D": lambda n: _a(n + 1) * Fraction(2 * n + 2, 2 * n + 1),
    # (F1 - 1)/x
    "T": lambda n: Fraction(1, 2 * n + 3),
    # (F0 - 1)/x
    "S0": lambda n: _a(n + 1),
    # (1 - r'^2 F1)/x
    "f1": lambda n: Fraction(2, (2 * n + 1) * (2 * n + 3)),
}


LOGRATIO_SERIES = ("f", "G", "h11", "h12", "h13", "f7")


@lru_cache(maxsize=64)
def logratio_series(name: str, order: int) -> PowerSeries:
    """Maclaurin series in x of the log-ratio functions, exact to ``order``."""
    if name not in LOGRATIO_SERIES:
        raise InvalidParameter(f"unknown series {name!r}; expected one of {LOGRATIO_SERIES}")
    if order < 1:
        raise InvalidParameter("order must be at least 1")
    n = order + 4
    l0 = ps_from_known("logF0", n)
    l1 = ps_from_known("logF1", n)
    if name == "h13":
        out = l0.div_x(1)
    elif name == "f7":
        out = l1.div_x(1)
    elif name == "G":
        out = ps_div(l0.div_x(1), l1.div_x(1))
    elif name == "f":
        g = ps_div(l0.div_x(1), l1.div_x(1))
        out = (g - Fraction(3, 4)).div_x(1)
    elif name == "h11":
        out = (l1 * Fraction(3, 4) + l1.mul_x(1) * Fraction(1, 4) - l0).div_x(2)
    else:  # h12
        out = (l0 - l1 * Fraction(3, 4) - l1.mul_x(1) * Fraction(1, 320)).div_x(3)
    return out.truncate(order)


def g_param_series(c: Fraction, order: int) -> PowerSeries:
    """Series of g(r; c) / x**2 = h11 + (c - 1/4) f7, exact for rational c."""
    c = Fraction(c)
    return logratio_series("h11", order) + logratio_series("f7", order) * (c - Fraction(1, 4))


# ---------------------------------------------------------------------------
# numerical evaluation


@lru_cache(maxsize=1024)
def coefficient_bound(u: PowerSeries) -> Tuple[float, float]:
    """Heuristic envelope (M, g) with |c_n| <= M g**n assumed beyond the order.

    Fitted to the upper half of the known coefficients and inflated by a
    factor of four; used only for tail estimates.
    """
    n = u.order
    lo = max(n // 2, 0)
    mags = [abs(float(c)) for c in u.coeffs[lo:]]
    peak = max(mags) if mags else 0.0
    if peak == 0.0:
        return 0.0, 1.0
    first = next((m for m in mags if m > 0), peak)
    last = mags[-1] if mags[-1] > 0 else peak
    span = max(n - lo, 1)
    g = max(1.0, (last / first) ** (1.0 / span)) if first > 0 else 1.0
    return 4.0 * peak / (g ** lo if g > 1 else 1.0), g


def ps_eval(
    u: PowerSeries,
    r,
    prec=None,
    radius: Optional[float] = None,
    bound: Optional[Tuple[float, float]] = None,
):
    """Evaluate ``u`` at ``x = r**2`` by Horner's rule.

    ``radius`` is the largest ``r`` the caller considers safe; beyond it
    :class:`RadiusGuard` is raised.  The tail is estimated from ``bound``
    (an envelope ``|c_n| <= M g**n``) or from :func:`coefficient_bound`.
    """
    from .core import EvalResult, _parse_real

    cfg = as_config(prec)
    bits, wp = cfg.bits, cfg.bits + GUARD_BITS
    with mpmath.workprec(wp):
        r = _parse_real(r)
        if r < 0:
            raise InvalidParameter("ps_eval needs r >= 0")
        if radius is not None and r > radius:
            raise RadiusGuard(f"r = {mpmath.nstr(r, 8)} exceeds the safe radius {radius}")
        x = r * r
        return _horner(u, x, bits, wp, bound)


@lru_cache(maxsize=1024)
def _numeric_coeffs(u: PowerSeries, wp: int) -> Tuple[Tuple[mpf, ...], Tuple[float, ...]]:
    with mpmath.workprec(wp):
        vals = tuple(rational_mpf(c) for c in reversed(u.coeffs))
    return vals, tuple(abs(float(c)) for c in reversed(u.coeffs))


def _horner(u: PowerSeries, x: mpf, bits: int, wp: int, bound=None):
    from .core import EvalResult, _finish

    vals, mags = _numeric_coeffs(u, wp)
    with mpmath.workprec(wp):
        acc = mpf(0)
        abs_acc = 0.0
        xf = float(x)
        for c, a in zip(vals, mags):
            acc = acc * x + c
            abs_acc = abs_acc * xf + a
        if x == 0:
            return EvalResult(rational_mpf(u.coeffs[0]), mpf(0), 1)
        m, g = bound if bound is not None else coefficient_bound(u)
        gx = g * xf
        n1 = u.order + 1
        if gx >= 1:
            tail = mpf("inf")
        else:
            tail = mpf(m) * mpf(gx) ** n1 / (1 - gx)
        err = tail + ldexp_units(8.0 * (2 * n1 + 2) * abs_acc, wp)
        return _finish(acc, err, bits, n1)


def order_for(bits: int, radius: float) -> int:
    """Series order reaching ``bits`` of accuracy at ``radius`` (rounded up to 8)."""
    per_term = -math.log2(radius * radius)
    n = int(math.ceil((bits + GUARD_BITS + 12) / per_term)) + 4
    return -(-n // 8) * 8
