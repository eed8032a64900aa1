"""Registry of the named functions built from K, E and arth, with their claims.

Each entry has a direct evaluator (formed from the base quantities of
:func:`ellint.core.kit` by plain arithmetic, run with enough extra working
precision to absorb the cancellation near ``r = 0``) and, where that
cancellation is structural, a series evaluator built from exact Maclaurin
coefficients.  Below the entry's switch radius the series path is used.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Dict, List, Optional, Tuple, Union

import mpmath
import sympy as sp
from mpmath import mpf

from .core import EvalResult, Kit, Modulus, _finish, kit
from .errors import ParamOutOfRange, ParamRequired, UnknownFunction
from .precision import GUARD_BITS, Approx, PrecisionConfig, as_config
from .series import (
    PowerSeries,
    _horner,
    a_coeffs,
    g_param_series,
    order_for,
    logratio_series,
    ps_from_known,
    seq,
)

DEFAULT_SWITCH_R = 0.3
MAX_SERIES_R = 0.75

# ---------------------------------------------------------------------------
# identifiers and claim metadata


@dataclass(frozen=True)
class FunctionId:
    name: str
    param: Optional[Fraction] = None

    @classmethod
    def parse(cls, name: str, param=None) -> "FunctionId":
        """Accept ``"h2"`` with ``param=3`` or the compact forms ``"h2:3"``, ``"g:1/4"``."""
        if ":" in name and param is None:
            name, param = name.split(":", 1)
        if param is not None and not isinstance(param, Fraction):
            param = Fraction(str(param))
        return cls(name, param)

    def __str__(self):
        return self.name if self.param is None else f"{self.name}:{self.param}"


@dataclass(frozen=True)
class ClaimSet:
    """Stated properties of one function on ``0 < r < 1``.

    ``range_lo``/``range_hi`` are exact sympy expressions (``sp.oo`` for an
    unbounded side).  ``zero_limit`` is the value approached as ``r -> 0``.
    ``bound`` is a strict inequality ``(">" | "<", constant)`` valid for all r.
    """

    monotone: str = "none"
    convexity: str = "none"
    range_lo: Optional[sp.Expr] = None
    range_hi: Optional[sp.Expr] = None
    zero_limit: Optional[sp.Expr] = None
    bound: Optional[Tuple[str, sp.Expr]] = None
    absolutely_monotone: bool = False

    def to_json(self) -> dict:
        def s(v):
            return None if v is None else str(v)

        return {
            "monotone": self.monotone,
            "convexity": self.convexity,
            "range": [s(self.range_lo), s(self.range_hi)],
            "zero_limit": s(self.zero_limit),
            "bound": None if self.bound is None else [self.bound[0], str(self.bound[1])],
            "absolutely_monotone": self.absolutely_monotone,
        }

    @property
    def has_claims(self) -> bool:
        return (
            self.monotone != "none"
            or self.convexity != "none"
            or self.range_lo is not None
            or self.range_hi is not None
            or self.bound is not None
            or self.absolutely_monotone
        )


Param = Optional[Fraction]
Direct = Callable[[Kit, Param], Approx]
Combine = Callable[[Kit, Approx, Param], Approx]


@dataclass(frozen=True)
class FunctionDescriptor:
    name: str
    group: str
    direct: Direct
    cancel: Callable[[Param], int]
    claims_for: Callable[[Param], ClaimSet]
    series: Optional[Tuple[str, Combine]] = None
    conjecture_for: Optional[Callable[[Param], ClaimSet]] = None
    coeff_series: Optional[str] = None
    param_kind: Optional[str] = None  # "c" (positive rational) or "n" (integer >= 1)
    even: bool = True
    switch_r: float = DEFAULT_SWITCH_R

    def claims(self, param: Param = None) -> ClaimSet:
        return self.claims_for(param)

    def conjecture(self, param: Param = None) -> Optional[ClaimSet]:
        return None if self.conjecture_for is None else self.conjecture_for(param)


# ---------------------------------------------------------------------------
# exact series used by the series path


def poly_arth_series(p: List[Fraction], q: List[Fraction], shift: int, order: int) -> PowerSeries:
    """Series of ``(P(x) F1(x) - Q(x)) / x**shift`` with ``F1 = sum x^n/(2n+1)``."""
    out = []
    for j in range(order + shift + 1):
        c = sum(Fraction(pk, 2 * (j - k) + 1) for k, pk in enumerate(p) if j - k >= 0)
        if j < len(q):
            c -= q[j]
        out.append(Fraction(c))
    return PowerSeries(tuple(out)).div_x(shift)


_POLY = {
    "f10": ([72, -150, -253, 167], [72, -126, 19], 2, -1),
    "f11": ([13, -9], [13, -6], 1, 1),
    "f12": ([1, -5], [1, -2], 1, 1),
    "f13": ([15, -12, 1], [15, -7], 3, 1),
    "f14": ([3, -4, -1], [3, -3], 2, -1),
    "h10": (
        [Fraction(1, 4), Fraction(-1, 12), Fraction(-1, 45), Fraction(-871, 48384)],
        [Fraction(1, 4)],
        3,
        1,
    ),
    # 12 [(1/4 - x/12) F1 - 1/4] / x^2
    "U": ([3, -1], [3], 2, 1),
}


def _known(name: str, order: int) -> PowerSeries:
    return ps_from_known(name, order)


@lru_cache(maxsize=256)
def function_series(key: str, param: Param, order: int) -> PowerSeries:
    """Exact Maclaurin series (in x) behind each series evaluator."""
    if key in _POLY:
        p, q, shift, sign = _POLY[key]
        s = poly_arth_series([Fraction(v) for v in p], [Fraction(v) for v in q], shift, order)
        return s * sign
    n = order + 2
    if key == "f1":
        return _known("f1", order)
    if key == "N24":
        w, f1, f0, a1 = _known("W", n), _known("f1", n), _known("F0", n), _known("F1", n)
        return (w * a1 * 4 - f1 * f0 * 3).div_x(1).truncate(order)
    if key == "M21":
        f1, f0 = _known("f1", n + 1), _known("F0", n + 1)
        return (function_series("N24", None, n + 1) - f1 * f0 / 40).div_x(1).truncate(order)
    if key == "f22":
        f1, eh, t, f0 = _known("f1", n), _known("Eh", n), _known("T", n), _known("F0", n)
        return (f1 * eh - (t * f0 - (t * f0).mul_x(1)) * 2).div_x(1).truncate(order)
    if key == "b":
        return PowerSeries.from_fn(lambda k: seq("b", k), order)
    if key == "h2":
        m = int(param)
        return PowerSeries.from_fn(lambda k: seq("a_tilde", k + m + 1), order)
    if key == "h4":
        return PowerSeries.from_fn(lambda k: seq("d", k) / (2 * k + 1), order)
    if key == "g":
        return g_param_series(Fraction(param), order)
    if key in ("f", "G", "h11", "h12", "h13", "f7"):
        return logratio_series(key, order)
    raise UnknownFunction(f"no series for {key!r}")


def _series_value(k: Kit, key: str, param: Param, order: int) -> Approx:
    ps = function_series(key, param, order)
    res = _horner(ps, k.m.x, k.bits, k.bits + GUARD_BITS)
    return Approx.from_result(res)


# ---------------------------------------------------------------------------
# building blocks (all called inside workprec(k.bits))


def _poly(k: Kit, coeffs) -> Approx:
    acc = Approx(mpf(0))
    for c in reversed(coeffs):
        acc = acc * k.x + c
    return acc


def _K(k: Kit) -> Approx:
    return k.F0 * k.pi * Fraction(1, 2)


def _E(k: Kit) -> Approx:
    return k.Eh * k.pi * Fraction(1, 2)


def _poly_arth(k: Kit, key: str) -> Approx:
    p, q, shift, sign = _POLY[key]
    num = _poly(k, [Fraction(v) for v in p]) * k.F1 - _poly(k, [Fraction(v) for v in q])
    return num / k.x**shift * sign


def _r_pow(k: Kit, n: int) -> Approx:
    return k.r**n


def _lf1(k: Kit) -> Approx:
    return k.L1


def _lf0(k: Kit) -> Approx:
    return k.L0


def _h11(k: Kit) -> Approx:
    return ((3 + k.x) * Fraction(1, 4) * k.L1 - k.L0) / (k.x * k.x)


def _h12(k: Kit) -> Approx:
    return (k.L0 - (Fraction(3, 4) + k.x * Fraction(1, 320)) * k.L1) / k.x**3


def _a_tilde_sum(k: Kit, n: int) -> Approx:
    return _poly(k, [seq("a_tilde", j) for j in range(n + 1)])


def _h2(k: Kit, n: int) -> Approx:
    return (k.F1 * Fraction(3, 4) - k.F0 - _a_tilde_sum(k, n)) / k.x ** (n + 1)


def _h4(k: Kit) -> Approx:
    p3 = _poly(k, [1, Fraction(-1, 12), Fraction(-91, 2880)])
    return k.pi * Fraction(1, 2) * (p3 * k.F1 - k.F0) / (k.x**3 * k.F1)


def _alpha(k: Kit) -> Approx:
    return Fraction(2549, 2880) - 2 / k.pi


def _h9_direct(k: Kit) -> Approx:
    c2 = Fraction(2069, 2880) - 2 / k.pi
    c3 = _alpha(k)
    poly = Fraction(1, 4) - k.x * Fraction(1, 12) + c2 * k.x**2 - c3 * k.x**3
    return poly * k.F1 - Fraction(1, 4)


def _h9_series(k: Kit, u: Approx, _p) -> Approx:
    c2 = Fraction(2069, 2880) - 2 / k.pi
    c3 = _alpha(k)
    x2 = k.x * k.x
    return x2 * u * Fraction(1, 12) + x2 * (c2 - c3 * k.x) * k.F1


def _f24(k: Kit) -> Approx:
    return (4 * k.W * k.F1 / (k.f1 * k.F0) - 3) / k.x


# ---------------------------------------------------------------------------
# claims helpers

PI = sp.pi
R = sp.Rational
OO = sp.oo


def _inc(lo, hi, convexity="none", **kw) -> Callable[[Param], ClaimSet]:
    return lambda _p: ClaimSet("increasing", convexity, lo, hi, zero_limit=lo, **kw)


def _dec(hi, lo, convexity="none", **kw) -> Callable[[Param], ClaimSet]:
    """Decreasing from ``hi`` (at r -> 0) down to ``lo`` (at r -> 1)."""
    return lambda _p: ClaimSet("decreasing", convexity, lo, hi, zero_limit=hi, **kw)


def _const(n: int) -> Callable[[Param], int]:
    return lambda _p: n


def _g_claims(c: Param) -> ClaimSet:
    c = Fraction(c)
    if c >= Fraction(1, 4):
        hi = sp.log(PI / 2) if c == Fraction(1, 4) else OO
        return ClaimSet("increasing", "convex", sp.Integer(0), hi, zero_limit=sp.Integer(0))
    if c <= Fraction(1, 320):
        return ClaimSet("decreasing", "concave", -OO, sp.Integer(0), zero_limit=sp.Integer(0))
    # monotonicity is not settled between 1/320 and 1/4
    return ClaimSet(zero_limit=sp.Integer(0))


def _a_tilde_sym(n: int) -> sp.Expr:
    q = seq("a_tilde", n)
    return R(q.numerator, q.denominator)


def _h2_claims(n: Param) -> ClaimSet:
    lo = _a_tilde_sym(int(n) + 1)
    return ClaimSet("none", "none", lo, OO, zero_limit=lo, absolutely_monotone=True)


def _h3_claims(n: Param) -> ClaimSet:
    lo = _a_tilde_sym(int(n) + 1)
    return ClaimSet("increasing", "none", lo, R(3, 4) - 2 / PI, zero_limit=lo)


def _abs_mono(lo) -> Callable[[Param], ClaimSet]:
    return lambda _p: ClaimSet("none", "none", lo, OO, zero_limit=lo, absolutely_monotone=True)


def _bound(op: str, const, zero) -> Callable[[Param], ClaimSet]:
    return lambda _p: ClaimSet(bound=(op, const), zero_limit=zero)


def _no_claims(zero=None) -> Callable[[Param], ClaimSet]:
    return lambda _p: ClaimSet(zero_limit=zero)


def _conj_abs(zero) -> Callable[[Param], ClaimSet]:
    return lambda _p: ClaimSet(absolutely_monotone=True, zero_limit=zero)


# ---------------------------------------------------------------------------
# the registry

H = Fraction(1, 2)


def _mk(name, group, direct, cancel, claims, **kw) -> FunctionDescriptor:
    return FunctionDescriptor(name, group, direct, cancel, claims, **kw)


def _entries() -> List[FunctionDescriptor]:
    e = []
    add = e.append

    # arth-only combinations
    add(_mk("f1", "arth", lambda k, p: k.f1, _const(1), _inc(R(2, 3), sp.Integer(1), "convex"),
            series=("f1", lambda k, s, p: s)))
    add(_mk("f2", "arth", lambda k, p: k.f1 / (k.xc * k.F1), _const(1), _inc(R(2, 3), OO),
            series=("f1", lambda k, s, p: s / (k.xc * k.F1))))
    add(_mk("f3", "arth", lambda k, p: k.f1 / (k.F1 + k.T), _const(1), _dec(R(1, 2), sp.Integer(0)),
            series=("f1", lambda k, s, p: s / (k.F1 + k.T))))
    add(_mk("f4", "arth-K", lambda k, p: (k.F1 + k.T) / _K(k), _const(1), _inc(8 / (3 * PI), sp.Integer(2))))
    add(_mk("f5", "arth", lambda k, p: (1 + k.xc * k.F1) / k.rp, _const(0),
            _inc(sp.Integer(2), OO, "convex")))
    add(_mk("f6", "arth", lambda k, p: k.f1 / (k.rp * k.T), _const(1), _inc(sp.Integer(2), OO)))
    add(_mk("f7", "arth-log", lambda k, p: k.L1 / k.x, _const(1), _inc(R(1, 3), OO),
            series=("f7", lambda k, s, p: s), conjecture_for=_conj_abs(R(1, 3)), coeff_series="f7"))
    add(_mk("f8", "arth-log", lambda k, p: k.xc * k.F1 * (k.L1 / k.x) / k.f1, _const(1),
            _dec(R(1, 2), sp.Integer(0))))
    add(_mk("f9", "elliptic-log", lambda k, p: k.xc * k.F0 * (k.L0 / k.x) / k.W, _const(1),
            _dec(R(1, 2), sp.Integer(0))))
    add(_mk("f10", "arth", lambda k, p: _poly_arth(k, "f10"), _const(3),
            _bound(">", R(25688, 105), R(1538, 5)), series=("f10", lambda k, s, p: s)))
    add(_mk("f11", "arth", lambda k, p: _poly_arth(k, "f11"), _const(2),
            _bound(">", R(14, 15), R(14, 15)), series=("f11", lambda k, s, p: s)))
    add(_mk("f12", "arth", lambda k, p: _poly_arth(k, "f12"), _const(2),
            _bound("<", R(-8, 3), R(-8, 3)), series=("f12", lambda k, s, p: s)))
    add(_mk("f13", "arth", lambda k, p: _poly_arth(k, "f13"), _const(4), _abs_mono(R(8, 105)),
            series=("f13", lambda k, s, p: s), coeff_series="f13"))
    add(_mk("f14", "arth", lambda k, p: _poly_arth(k, "f14"), _const(3), _abs_mono(R(26, 15)),
            series=("f14", lambda k, s, p: s), coeff_series="f14"))

    # hypergeometric ratios
    add(_mk("f15", "ratio", lambda k, p: k.F1 / k.F0, _const(0), _inc(sp.Integer(1), PI / 2)))
    add(_mk("f16", "ratio", lambda k, p: 3 * k.f1 / (4 * k.W), _const(1), _inc(sp.Integer(1), 3 * PI / 8)))
    add(_mk("f17", "ratio", lambda k, p: k.F0 - k.F1 * k.W / k.f1, _const(1),
            _inc(R(1, 4), sp.log(4) / PI)))

    # K, E remainders
    p18 = [1, Fraction(-1, 2), Fraction(-1, 16), Fraction(-1, 32)]
    add(_mk("f18", "elliptic", lambda k, p: k.pi * H * (_poly(k, p18) * k.F0 - k.Eh) / k.x**4, _const(5),
            _abs_mono(41 * PI / 4096), series=("b", lambda k, s, p: k.pi * H * s), coeff_series="b"))
    add(_mk("f19", "elliptic", lambda k, p: (_poly(k, p18) * k.F0 - k.Eh) / (k.x**4 * k.F0), _const(5),
            _inc(R(41, 2048), R(13, 32)), series=("b", lambda k, s, p: s / k.F0)))
    add(_mk("f20", "elliptic-arth",
            lambda k, p: k.pi * H * k.r**3 * ((Fraction(3, 4) + k.x / 4) * k.f1 * k.F0 - k.W * k.F1),
            _const(3), _inc(sp.Integer(0), sp.log(2), "convex"),
            series=("N24", lambda k, s, p: k.pi * Fraction(1, 8) * k.r**5 * (k.f1 * k.F0 - s)), even=False))
    add(_mk("f21", "elliptic-arth",
            lambda k, p: k.pi * H * k.r**3 * (k.W * k.F1 - (Fraction(3, 4) + k.x / 160) * k.f1 * k.F0),
            _const(4), _inc(sp.Integer(0), OO, "convex"),
            series=("M21", lambda k, s, p: k.pi * Fraction(1, 8) * k.r**5 * k.x * s), even=False))
    add(_mk("f22", "elliptic-arth",
            lambda k, p: k.pi * H * (k.f1 * k.Eh - 2 * k.xc * k.T * k.F0) / k.x, _const(3),
            _inc(PI / 30, sp.Integer(1)), series=("f22", lambda k, s, p: k.pi * H * s)))
    add(_mk("f23", "elliptic-arth", lambda k, p: k.pi * H * (2 * k.xc * k.F1 * k.F0 + k.f1 * k.Eh),
            _const(1), _dec(4 * PI / 3, sp.Integer(1))))
    add(_mk("f24", "elliptic-arth", lambda k, p: _f24(k), _const(3), _inc(R(1, 40), sp.Integer(1)),
            series=("N24", lambda k, s, p: s / (k.f1 * k.F0))))
    add(_mk("f25", "elliptic-arth", lambda k, p: k.W * k.F1 / (k.f1 * k.F0), _const(1),
            _inc(R(3, 4), sp.Integer(1))))

    # log-ratio family
    add(_mk("g", "log-ratio", lambda k, p: (Fraction(3, 4) + Fraction(p) * k.x) * k.L1 - k.L0,
            _const(4), _g_claims, series=("g", lambda k, s, p: k.x * k.x * s), param_kind="c"))
    add(_mk("g1", "log-ratio", lambda k, p: _h11(k) * k.x, _const(3),
            _inc(sp.Integer(0), sp.log(PI / 2)), series=("h11", lambda k, s, p: s * k.x)))
    add(_mk("g2", "log-ratio", lambda k, p: _h11(k) * k.x / k.L1, _const(3),
            _dec(R(79, 320), sp.Integer(0)), series=("h11", lambda k, s, p: s / _f7_series(k))))
    add(_mk("g3", "log-ratio", lambda k, p: _h12(k) * k.x * k.x / k.L1, _const(4),
            _inc(sp.Integer(0), R(79, 320)), series=("h12", lambda k, s, p: s * k.x / _f7_series(k))))
    add(_mk("g4", "log-ratio", lambda k, p: _h12(k) * k.x, _const(4), _inc(sp.Integer(0), OO),
            series=("h12", lambda k, s, p: s * k.x)))
    add(_mk("f", "log-ratio", lambda k, p: (k.L0 / k.L1 - Fraction(3, 4)) / k.x, _const(3),
            _inc(R(1, 320), R(1, 4)), series=("f", lambda k, s, p: s),
            conjecture_for=lambda p: ClaimSet(convexity="convex", absolutely_monotone=True,
                                              zero_limit=R(1, 320)),
            coeff_series="f"))
    add(_mk("G", "log-ratio", lambda k, p: k.L0 / k.L1, _const(2), _inc(R(3, 4), sp.Integer(1)),
            series=("G", lambda k, s, p: s), conjecture_for=_conj_abs(R(3, 4)), coeff_series="G"))

    # K against arth
    add(_mk("h1", "elliptic-arth", lambda k, p: k.pi * H * k.F0 / k.F1, _const(0),
            _dec(PI / 2, sp.Integer(1), "concave")))
    add(_mk("h2", "elliptic-arth", lambda k, p: _h2(k, int(p)), lambda p: int(p) + 2, _h2_claims,
            series=("h2", lambda k, s, p: s), coeff_series="h2", param_kind="n"))
    add(_mk("h3", "elliptic-arth", lambda k, p: _h2(k, int(p)) / k.F1, lambda p: int(p) + 2, _h3_claims,
            series=("h2", lambda k, s, p: s / k.F1), param_kind="n"))
    add(_mk("h4", "elliptic-arth", lambda k, p: _h4(k), _const(4),
            _inc(871 * PI / 96768, 2549 * PI / 5760 - 1),
            series=("h4", lambda k, s, p: k.pi * Fraction(1, 5760) * s / k.F1)))
    add(_mk("h5", "elliptic-arth", lambda k, p: 2 / k.pi * k.F1 ** Fraction(79, 320), _const(1),
            _inc(2 / PI, OO)))
    add(_mk("h6", "elliptic-arth",
            lambda k, p: k.pi * H * k.F0 / k.F1 + k.pi * (k.x / 24 + k.x * k.x * Fraction(91, 5760)),
            _const(0), _dec(PI / 2, 1 + 331 * PI / 5760),
            series=("h4", lambda k, s, p: k.pi * H - k.x**3 * k.pi * Fraction(1, 5760) * s / k.F1)))
    add(_mk("h7", "bound-gap",
            lambda k, p: 1 - 2 / k.pi - k.r / 12 - k.r**3 * Fraction(91, 2880) - _alpha(k) * k.r**5,
            _const(0), _dec(1 - 2 / PI, sp.Integer(0)), even=False))
    add(_mk("h8", "bound-gap",
            lambda k, p: (k.F1 - k.r * k.T) / 4 + (Fraction(3, 4) - 2 / k.pi) * (1 - k.r**3) * k.F1,
            _const(1), _bound(">", sp.Integer(0), 1 - 2 / PI), even=False))
    add(_mk("h9", "bound-gap", lambda k, p: _h9_direct(k), _const(3), _no_claims(sp.Integer(0)),
            series=("U", _h9_series)))
    add(_mk("h10", "bound-gap", lambda k, p: _poly_arth(k, "h10"), _const(4), _no_claims(sp.Integer(0)),
            series=("h10", lambda k, s, p: s * k.x**3 * Fraction(1, 241920))))
    add(_mk("h11", "log-ratio", lambda k, p: _h11(k), _const(3), _no_claims(R(79, 960)),
            series=("h11", lambda k, s, p: s),
            conjecture_for=lambda p: ClaimSet("increasing", "convex", R(79, 960), sp.log(PI / 2),
                                              zero_limit=R(79, 960), absolutely_monotone=True),
            coeff_series="h11"))
    add(_mk("h12", "log-ratio", lambda k, p: _h12(k), _const(4), _no_claims(R(517, 604800)),
            series=("h12", lambda k, s, p: s),
            conjecture_for=lambda p: ClaimSet("increasing", "convex", R(517, 604800), OO,
                                              zero_limit=R(517, 604800), absolutely_monotone=True),
            coeff_series="h12"))
    add(_mk("h13", "elliptic-log", lambda k, p: k.L0 / k.x, _const(1), _no_claims(R(1, 4)),
            series=("h13", lambda k, s, p: s), conjecture_for=_conj_abs(R(1, 4)), coeff_series="h13"))
    return e


def _f7_series(k: Kit) -> Approx:
    return _series_value(k, "f7", None, _order_of(k))


def _order_of(k: Kit) -> int:
    return order_for(k.bits - GUARD_BITS, max(float(k.m.r), DEFAULT_SWITCH_R))


# h10 series is scaled: 241920 h10 / x^3 has the closed-form numerators
_POLY["h10"] = (
    [Fraction(241920, 4), Fraction(-241920, 12), Fraction(-241920, 45), Fraction(-871 * 5, 1)],
    [Fraction(241920, 4)],
    3,
    1,
)

REGISTRY: Dict[str, FunctionDescriptor] = {d.name: d for d in _entries()}


def _h10_direct(k: Kit) -> Approx:
    return _poly_arth(k, "h10") * k.x**3 * Fraction(1, 241920)


REGISTRY["h10"] = replace(REGISTRY["h10"], direct=lambda k, p: _h10_direct(k))


# ---------------------------------------------------------------------------
# public API


def lookup(name: str) -> FunctionDescriptor:
    try:
        return REGISTRY[name]
    except KeyError:
        raise UnknownFunction(f"unknown function {name!r}") from None


def check_param(desc: FunctionDescriptor, param) -> Param:
    if desc.param_kind is None:
        if param is not None:
            raise ParamOutOfRange(f"{desc.name} takes no parameter")
        return None
    if param is None:
        raise ParamRequired(f"{desc.name} needs a parameter ({desc.param_kind})")
    q = Fraction(param)
    if desc.param_kind == "n":
        if q.denominator != 1 or q < 1:
            raise ParamOutOfRange(f"{desc.name} needs an integer n >= 1, got {param}")
    elif q <= 0:
        raise ParamOutOfRange(f"{desc.name} needs c > 0, got {param}")
    return q


def _as_id(fid) -> FunctionId:
    if isinstance(fid, FunctionId):
        return fid
    return FunctionId.parse(str(fid))


def fn_eval(fid, m, prec=None, path: str = "auto") -> EvalResult:
    """Evaluate a registered function at modulus ``m``.

    ``path`` is ``"auto"``, ``"series"`` or ``"direct"``.  The series path
    refuses radii above ``MAX_SERIES_R``.
    """
    fid = _as_id(fid)
    desc = lookup(fid.name)
    param = check_param(desc, fid.param)
    cfg = as_config(prec)
    bits = cfg.bits
    if not isinstance(m, Modulus):
        m = Modulus.from_r(m, cfg)
    if path == "auto":
        path = "series" if desc.series is not None and m.r < desc.switch_r else "direct"
    if path == "series":
        if desc.series is None:
            raise UnknownFunction(f"{desc.name} has no series evaluator")
        from .errors import RadiusGuard

        if m.r > MAX_SERIES_R:
            raise RadiusGuard(f"series path for {desc.name} refused at r = {mpmath.nstr(m.r, 8)}")
        wp = bits + GUARD_BITS
        k = kit(m, wp, True)
        key, combine = desc.series
        order = order_for(bits, max(float(m.r), desc.switch_r))
        with mpmath.workprec(wp):
            s = _series_value(k, key, param, order)
            val = combine(k, s, param)
    elif path == "direct":
        wp = bits + GUARD_BITS + _extra_bits(m, desc.cancel(param))
        k = kit(m, wp, False)
        with mpmath.workprec(wp):
            val = desc.direct(k, param)
    else:
        raise ValueError(f"unknown path {path!r}")
    with mpmath.workprec(k.bits):
        err = val.err
    return _finish(val.v, err, bits)


def _extra_bits(m: Modulus, cancel: int) -> int:
    if cancel <= 0:
        return 0
    lx = -float(mpmath.log(m.x, 2))
    need = int(math.ceil(cancel * max(lx, 0.0))) + 8
    # bucketed so functions at one modulus share cached kits
    return -(-need // 32) * 32


def has_series(name: str) -> bool:
    return lookup(name).series is not None


def fn_claims(fid) -> ClaimSet:
    fid = _as_id(fid)
    desc = lookup(fid.name)
    return desc.claims(check_param(desc, fid.param))


def fn_conjecture(fid) -> Optional[ClaimSet]:
    fid = _as_id(fid)
    desc = lookup(fid.name)
    return desc.conjecture(check_param(desc, fid.param))


def coeff_series(fid, order: int) -> PowerSeries:
    """The exact Maclaurin series (in x) carrying an absolute-monotonicity claim."""
    fid = _as_id(fid)
    desc = lookup(fid.name)
    param = check_param(desc, fid.param)
    if desc.coeff_series is None:
        raise UnknownFunction(f"{desc.name} has no coefficient-level claim")
    return function_series(desc.coeff_series, param, order)


# default parameters used when listing parametrised entries
DEFAULT_PARAMS = {"g": [Fraction(1, 320), Fraction(1, 4), Fraction(1)], "h2": [1, 2, 3, 4], "h3": [1, 2, 3, 4]}


def list_functions() -> List[Tuple[FunctionId, ClaimSet, str]]:
    """Every registry entry, parametrised ones expanded over their default parameters."""
    out = []
    for name, desc in REGISTRY.items():
        params = DEFAULT_PARAMS.get(name, [None])
        for p in params:
            fid = FunctionId(name, None if p is None else Fraction(p))
            out.append((fid, desc.claims(fid.param), desc.group))
    return out


def registry_json() -> List[dict]:
    rows = []
    for name, desc in REGISTRY.items():
        p = DEFAULT_PARAMS.get(name, [None])[0]
        p = None if p is None else Fraction(p)
        conj = desc.conjecture(p)
        rows.append(
            {
                "name": name,
                "param_arity": 0 if desc.param_kind is None else 1,
                "param_kind": desc.param_kind,
                "group": desc.group,
                "has_series": desc.series is not None,
                "claims": desc.claims(p).to_json(),
                "conjecture": None if conj is None else conj.to_json(),
            }
        )
    return rows


def exact_value(expr, bits: int) -> mpf:
    """Evaluate a sympy constant at ``bits`` binary precision."""
    digits = int(bits * 0.30103) + 10
    with mpmath.workprec(bits):
        return mpf(str(sp.N(expr, digits)))
