"""Configurable-precision complete elliptic integrals and their building blocks.

All public operations are pure functions of their arguments.  Internally they
run with :data:`~ellint.precision.GUARD_BITS` extra bits and round the result
to the requested precision; ``err_bound`` covers truncation, the rounding
allowance, and the final rounding.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Tuple, Union

import mpmath
from mpmath import mp, mpf

from .errors import InvalidModulus, InvalidParameter, NonConvergent
from .precision import (
    GUARD_BITS,
    Approx,
    PrecisionConfig,
    as_config,
    ldexp_units,
    to_fraction,
)

Prec = Union[PrecisionConfig, int, None]

# r**2 below this uses hypergeometric series, at or above it AGM / closed forms
SERIES_SWITCH_X = mpf(0.5)
TERM_CAP_PER_BIT = 64
RATIO_SLACK = mpf(2) ** -20


@dataclass(frozen=True)
class EvalResult:
    value: mpf
    err_bound: mpf
    terms_used: int = 0

    def __float__(self):
        return float(self.value)


@dataclass(frozen=True)
class Modulus:
    """A point ``0 < r < 1`` together with ``x = r**2`` and ``rp = sqrt(1 - r**2)``.

    ``x`` and ``1 - x`` are held exactly (they are computed at a precision
    wide enough to be exact for the binary ``r``); ``rp`` is rounded at the
    construction precision plus guard bits.
    """

    r: mpf
    rp: mpf
    x: mpf
    xc: mpf  # 1 - x

    @classmethod
    def from_r(cls, r, prec: Prec = None) -> "Modulus":
        bits = as_config(prec).bits
        with mpmath.workprec(bits + GUARD_BITS):
            r = _parse_real(r)
        if not 0 < r < 1:
            raise InvalidModulus(f"modulus must lie in (0, 1), got {r}")
        wide = 2 * max(bits + GUARD_BITS, _mantissa_bits(r)) + 8
        with mpmath.workprec(wide):
            x = r * r
            xc = (1 - r) * (1 + r)
        with mpmath.workprec(bits + GUARD_BITS):
            rp = mpmath.sqrt(xc)
        return cls(r, rp, x, xc)

    def rp_at(self, wp: int) -> mpf:
        """``r'`` correctly rounded at ``wp`` bits (``xc`` is exact)."""
        with mpmath.workprec(wp):
            return mpmath.sqrt(self.xc)

    @classmethod
    def from_x(cls, x, prec: Prec = None) -> "Modulus":
        """Build the modulus whose square is exactly ``x``."""
        bits = as_config(prec).bits
        with mpmath.workprec(bits + GUARD_BITS):
            x = _parse_real(x)
        if not 0 < x < 1:
            raise InvalidModulus(f"x must lie in (0, 1), got {x}")
        with mpmath.workprec(_mantissa_bits(x) + 64):
            xc = 1 - x
        with mpmath.workprec(bits + GUARD_BITS):
            r = mpmath.sqrt(x)
            rp = mpmath.sqrt(xc)
        return cls(r, rp, x, xc)


def _mantissa_bits(v: mpf) -> int:
    return max(int(v._mpf_[3]), 1)


def _parse_real(v) -> mpf:
    if isinstance(v, mpf):
        return v
    if isinstance(v, Fraction):
        return mpf(v.numerator) / v.denominator
    if isinstance(v, float):
        return mpf(v)
    return mpf(v)


def _fr(v) -> Fraction:
    try:
        q = Fraction(v) if not isinstance(v, Fraction) else v
    except (TypeError, ValueError):
        raise InvalidParameter(f"not a rational parameter: {v!r}")
    return q


def _finish(value: mpf, err_abs: mpf, bits: int, terms: int = 0) -> EvalResult:
    """Round ``value`` to ``bits`` and add the rounding to the error bound."""
    with mpmath.workprec(bits):
        v = +value
    err = err_abs + abs(v) * mpmath.ldexp(1, -bits)
    with mpmath.workprec(53):
        err = +err
    return EvalResult(v, err, terms)


# ---------------------------------------------------------------------------
# hypergeometric series and AGM


def hyp_series(a, b, c, x, prec: Prec = None, max_terms: Optional[int] = None) -> EvalResult:
    """Sum the Gaussian hypergeometric series ``2F1(a, b; c; x)`` for ``0 <= x < 1``.

    Summation stops once a geometric bound on the tail falls below
    ``2**-p * |value|``.  The geometric ratio used is
    ``x * max(1, (a+n)(b+n)/((c+n)(n+1)))``, valid once that factor is
    monotone in ``n``.
    """
    a, b, c = _fr(a), _fr(b), _fr(c)
    if c <= 0 and c.denominator == 1:
        raise InvalidParameter(f"c must not be a nonpositive integer, got {c}")
    return pfq_series((a, b), (c,), x, prec, max_terms)


def pfq_series(nums, dens, x, prec: Prec = None, max_terms: Optional[int] = None) -> EvalResult:
    """Generalized hypergeometric sum ``pFq(nums; dens; x)`` with the same tail rule."""
    nums = tuple(_fr(v) for v in nums)
    dens = tuple(_fr(v) for v in dens)
    if any(d <= 0 and d.denominator == 1 for d in dens):
        raise InvalidParameter("lower parameters must not be nonpositive integers")
    bits = as_config(prec).bits
    cap = max_terms if max_terms is not None else TERM_CAP_PER_BIT * bits
    wp = bits + GUARD_BITS

    # v + n = (p + n q) / q, so each Pochhammer ratio is a ratio of integers
    num_pq = [(v.numerator, v.denominator) for v in nums]
    den_pq = [(v.numerator, v.denominator) for v in dens]
    num_scale = 1
    for _, q in den_pq:
        num_scale *= q
    den_scale = 1
    for _, q in num_pq:
        den_scale *= q

    def factor(n: int) -> Tuple[int, int]:
        num = num_scale
        for p, q in num_pq:
            num *= p + n * q
        den = den_scale * (n + 1)
        for p, q in den_pq:
            den *= p + n * q
        return num, den

    with mpmath.workprec(wp):
        x = _parse_real(x)
        if x < 0 or x >= 1:
            raise InvalidParameter(f"series needs 0 <= x < 1, got {x}")
        if x == 0:
            return EvalResult(mpf(1), mpf(0), 1)
        target = mpmath.ldexp(1, -bits)
        # monotonicity of the Pochhammer factor sets in past this index
        n_mono = int(sum(abs(v) for v in nums + dens)) + 2
        term = mpf(1)
        total = mpf(1)
        weighted = 4.0  # sum of |t_n| * (3n + 4): per-term rounding drift
        n = 0
        fn, fd = factor(0)
        while True:
            if fn == 0:
                err = ldexp_units(ROUND_UNITS * weighted, wp)
                return _finish(total, err, bits, n + 1)
            term = term * fn / fd * x
            n += 1
            total += term
            weighted += abs(float(term)) * (3 * n + 4)
            fn, fd = factor(n)
            if n >= n_mono:
                ratio = mpf(fn) / fd if abs(fn) > fd else mpf(1)
                rho = x * ratio + RATIO_SLACK * x
                if rho < 1:
                    tail = abs(term) * rho / (1 - rho)
                    if tail <= target * abs(total):
                        err = tail + ldexp_units(ROUND_UNITS * weighted, wp)
                        return _finish(total, err, bits, n + 1)
            if n >= cap:
                raise NonConvergent(
                    f"hypergeometric series at x = {mpmath.nstr(x, 8)} "
                    f"did not converge in {cap} terms"
                )


ROUND_UNITS = 8.0


def agm(a0, b0, prec: Prec = None) -> mpf:
    """Arithmetic-geometric mean of two positive reals."""
    bits = as_config(prec).bits
    with mpmath.workprec(bits + GUARD_BITS):
        a, b = _parse_real(a0), _parse_real(b0)
        if a <= 0 or b <= 0:
            raise InvalidParameter("agm needs positive arguments")
        tol = mpmath.ldexp(1, -bits)
        for _ in range(4 * bits):
            if abs(a - b) <= tol * a:
                break
            a, b = (a + b) / 2, mpmath.sqrt(a * b)
        v = (a + b) / 2
    with mpmath.workprec(bits):
        return +v


def _agm_with_e(rp: mpf, r: mpf, wp: int) -> Tuple[mpf, mpf, int]:
    """Return (AGM(1, rp), 1 - sum 2**(n-1) c_n**2, iterations) at precision wp."""
    with mpmath.workprec(wp):
        a, b, c = mpf(1), rp, r
        s = c * c / 2
        power = mpf(1) / 2
        tol = mpmath.ldexp(1, -wp + 4)
        n = 0
        while abs(c) > tol * a or n == 0:
            c = (a - b) / 2
            a, b = (a + b) / 2, mpmath.sqrt(a * b)
            power *= 2
            s += power * c * c
            n += 1
            if n > 4 * wp:
                break
        return a, 1 - s, n


# ---------------------------------------------------------------------------
# K, E and arth(r)/r


def _as_modulus(m, prec: Prec) -> Modulus:
    return m if isinstance(m, Modulus) else Modulus.from_r(m, prec)


def ell_k(m, prec: Prec = None, cross_check: bool = False) -> EvalResult:
    """Complete elliptic integral of the first kind, ``K(r)``."""
    cfg = as_config(prec)
    m = _as_modulus(m, cfg)
    bits, wp = cfg.bits, cfg.bits + GUARD_BITS
    if m.x < SERIES_SWITCH_X:
        s = hyp_series(Fraction(1, 2), Fraction(1, 2), 1, m.x, PrecisionConfig(wp))
        with mpmath.workprec(wp):
            v = mp.pi / 2 * s.value
            err = mp.pi / 2 * s.err_bound + ldexp_units(ROUND_UNITS * abs(float(v)), wp)
        res = _finish(v, err, bits, s.terms_used)
    else:
        res = _k_agm(m, bits)
    if cross_check:
        other = _k_agm(m, bits)
        assert abs(other.value - res.value) <= 4 * (other.err_bound + res.err_bound), (
            "series and AGM paths for K disagree"
        )
    return res


def _k_agm(m: Modulus, bits: int) -> EvalResult:
    wp = bits + GUARD_BITS
    with mpmath.workprec(wp):
        g = agm(1, m.rp_at(wp), wp)
        v = mp.pi / (2 * g)
        # AGM iterations each contribute a few ulps; rp carries one rounding
        err = ldexp_units(ROUND_UNITS * 8 * abs(float(v)), wp)
    return _finish(v, err, bits)


def ell_e(m, prec: Prec = None) -> EvalResult:
    """Complete elliptic integral of the second kind, ``E(r)``."""
    cfg = as_config(prec)
    m = _as_modulus(m, cfg)
    bits, wp = cfg.bits, cfg.bits + GUARD_BITS
    if m.x < SERIES_SWITCH_X:
        s = hyp_series(Fraction(-1, 2), Fraction(1, 2), 1, m.x, PrecisionConfig(wp))
        with mpmath.workprec(wp):
            v = mp.pi / 2 * s.value
            err = mp.pi / 2 * s.err_bound + ldexp_units(ROUND_UNITS * abs(float(v)), wp)
        return _finish(v, err, bits, s.terms_used)
    with mpmath.workprec(wp):
        g, ratio, n = _agm_with_e(m.rp_at(wp), m.r, wp)
        k = mp.pi / (2 * g)
        v = k * ratio
        # the E/K factor can cancel by a few bits near r = 1
        err = ldexp_units(ROUND_UNITS * (8 + 4 * n) * abs(float(k)), wp)
    return _finish(v, err, bits, n)


def arth_ratio(m, prec: Prec = None) -> EvalResult:
    """``arth(r)/r``: series below the switch, logarithmic closed form above."""
    cfg = as_config(prec)
    m = _as_modulus(m, cfg)
    bits, wp = cfg.bits, cfg.bits + GUARD_BITS
    if m.x < SERIES_SWITCH_X:
        return hyp_series(Fraction(1, 2), 1, Fraction(3, 2), m.x, cfg)
    with mpmath.workprec(wp):
        v = (mpmath.log1p(m.r) - mpmath.log1p(-m.r)) / (2 * m.r)
        err = ldexp_units(ROUND_UNITS * 4 * abs(float(v)), wp)
    return _finish(v, err, bits)


def arth_ratio_from_complement(s, prec: Prec = None) -> EvalResult:
    """``arth(r)/r`` as a function of ``s = 1 - r``; keeps full relative accuracy
    in ``s`` when ``r`` is extremely close to 1."""
    cfg = as_config(prec)
    bits, wp = cfg.bits, cfg.bits + GUARD_BITS
    with mpmath.workprec(wp):
        s = _parse_real(s)
        if not 0 < s < 1:
            raise InvalidModulus(f"1 - r must lie in (0, 1), got {s}")
        v = (mpmath.log(2 - s) - mpmath.log(s)) / (2 * (1 - s))
        err = ldexp_units(ROUND_UNITS * 4 * abs(float(v)), wp)
    return _finish(v, err, bits)


def e_minus_rp2k_over_r2(m, prec: Prec = None) -> EvalResult:
    """``(E - r'^2 K) / r^2``, by the cancellation-free series ``(pi/4) 2F1(1/2,1/2;2;r^2)``
    below the switch and by direct subtraction above it."""
    cfg = as_config(prec)
    m = _as_modulus(m, cfg)
    bits, wp = cfg.bits, cfg.bits + GUARD_BITS
    if m.x < SERIES_SWITCH_X:
        s = hyp_series(Fraction(1, 2), Fraction(1, 2), 2, m.x, PrecisionConfig(wp))
        with mpmath.workprec(wp):
            v = mp.pi / 4 * s.value
            err = mp.pi / 4 * s.err_bound + ldexp_units(ROUND_UNITS * abs(float(v)), wp)
        return _finish(v, err, bits, s.terms_used)
    return _direct_e_minus_rp2k_over_r2(m, bits)


def _direct_e_minus_rp2k_over_r2(m: Modulus, bits: int) -> EvalResult:
    wp = bits + GUARD_BITS
    k = Approx_of(ell_k(m, wp), wp)
    e = Approx_of(ell_e(m, wp), wp)
    with mpmath.workprec(wp):
        res = (e - Approx(m.xc) * k) / Approx(m.x)
        v, err = res.v, res.err
    return _finish(v, err, bits)


def k_minus_e_over_r2(m, prec: Prec = None) -> EvalResult:
    """``(K - E) / r^2`` via ``(pi/4) 2F1(1/2,3/2;2;r^2)`` below the switch."""
    cfg = as_config(prec)
    m = _as_modulus(m, cfg)
    bits, wp = cfg.bits, cfg.bits + GUARD_BITS
    if m.x < SERIES_SWITCH_X:
        s = hyp_series(Fraction(1, 2), Fraction(3, 2), 2, m.x, PrecisionConfig(wp))
        with mpmath.workprec(wp):
            v = mp.pi / 4 * s.value
            err = mp.pi / 4 * s.err_bound + ldexp_units(ROUND_UNITS * abs(float(v)), wp)
        return _finish(v, err, bits, s.terms_used)
    k = Approx_of(ell_k(m, wp), wp)
    e = Approx_of(ell_e(m, wp), wp)
    with mpmath.workprec(wp):
        res = (k - e) / Approx(m.x)
        v, err = res.v, res.err
    return _finish(v, err, bits)


def dk_dr(m, prec: Prec = None) -> EvalResult:
    """``dK/dr = (E - r'^2 K) / (r r'^2)``."""
    cfg = as_config(prec)
    m = _as_modulus(m, cfg)
    wp = cfg.bits + GUARD_BITS
    s = Approx_of(e_minus_rp2k_over_r2(m, wp), wp)
    with mpmath.workprec(wp):
        res = s * Approx(m.r) / Approx(m.xc)
        v, err = res.v, res.err
    return _finish(v, err, cfg.bits)


def de_dr(m, prec: Prec = None) -> EvalResult:
    """``dE/dr = (E - K) / r``."""
    cfg = as_config(prec)
    m = _as_modulus(m, cfg)
    wp = cfg.bits + GUARD_BITS
    s = Approx_of(k_minus_e_over_r2(m, wp), wp)
    with mpmath.workprec(wp):
        res = -(s * Approx(m.r))
        v, err = res.v, res.err
    return _finish(v, err, cfg.bits)


def g0_g1(x, prec: Prec = None) -> Tuple[EvalResult, EvalResult]:
    """``G0(x) = 2F1(1/2,1/2;2;x)`` and ``G1(x) = 2F1(1/2,1;5/2;x)``.

    Near ``x = 1`` the series is replaced by the closed forms
    ``G0 = (4/pi) (E - r'^2 K)/r^2`` and ``G1 = (3/2)(r - r'^2 arth r)/r^3``
    at ``r = sqrt(x)``.
    """
    cfg = as_config(prec)
    bits, wp = cfg.bits, cfg.bits + GUARD_BITS
    with mpmath.workprec(wp):
        x = _parse_real(x)
    if not 0 < x < 1:
        raise InvalidParameter(f"g0_g1 needs 0 < x < 1, got {x}")
    if x < SERIES_SWITCH_X:
        return (
            hyp_series(Fraction(1, 2), Fraction(1, 2), 2, x, cfg),
            hyp_series(Fraction(1, 2), 1, Fraction(5, 2), x, cfg),
        )
    m = Modulus.from_x(x, cfg)
    w = Approx_of(_direct_e_minus_rp2k_over_r2(m, wp), wp)
    f1 = Approx_of(arth_ratio(m, wp), wp)
    with mpmath.workprec(wp):
        g0 = w * 4 / Approx(+mp.pi, 1.0)
        g1 = (1 - Approx(m.xc) * f1) / Approx(m.x) * Fraction(3, 2)
        out = (_finish(g0.v, g0.err, bits), _finish(g1.v, g1.err, bits))
    return out


def Approx_of(res: EvalResult, bits: int) -> Approx:
    with mpmath.workprec(bits):
        return Approx.from_result(res)


def ell_k_series(m, prec: Prec = None) -> EvalResult:
    """K(r) by series only: the hypergeometric series below the switch and the
    logarithmic expansion in ``r'`` above it,
    ``K = sum a_n r'^(2n) [log(4/r') - 2 sum_{j<=n} 1/((2j-1)(2j))]``.

    Independent of the AGM, so the two can be checked against each other.
    """
    cfg = as_config(prec)
    m = _as_modulus(m, cfg)
    bits, wp = cfg.bits, cfg.bits + GUARD_BITS
    if m.x < SERIES_SWITCH_X:
        return ell_k(m, cfg)
    with mpmath.workprec(wp):
        y = m.xc
        lg = mpmath.log(4 / m.rp_at(wp))
        a = mpf(1)
        h = mpf(0)
        total = lg
        target = mpmath.ldexp(abs(total), -bits - 2)
        n = 0
        weighted = abs(float(lg))
        while True:
            n += 1
            a = a * y * mpf((2 * n - 1) ** 2) / (4 * n * n)
            h += mpf(2) / ((2 * n - 1) * (2 * n))
            term = a * (lg - h)
            total += term
            weighted += abs(float(term)) * (3 * n + 4)
            # terms are positive and shrink at least by the factor y
            if abs(term) * y / (1 - y) <= target:
                break
            if n >= TERM_CAP_PER_BIT * bits:
                raise NonConvergent("complementary series for K did not converge")
        err = abs(term) * y / (1 - y) + ldexp_units(ROUND_UNITS * (weighted + 4 * abs(float(total))), wp)
    return _finish(total, err, bits, n + 1)


# ---------------------------------------------------------------------------
# cached bundle of base quantities shared by the function registry


@dataclass(frozen=True)
class Kit:
    """Base quantities at one modulus, all as :class:`Approx` at ``bits``.

    ``F0 = 2K/pi``, ``F1 = arth(r)/r``, ``Eh = 2E/pi``,
    ``W = (2/pi)(E - r'^2 K)/r^2``, ``D = (2/pi)(K - E)/r^2``,
    ``T = (F1 - 1)/r^2``, ``S0 = (F0 - 1)/r^2``, ``f1 = (1 - r'^2 F1)/r^2``,
    ``L0 = log F0`` and ``L1 = log F1``.

    With ``series=True`` and ``r**2 < 1/2`` every difference comes from its own
    hypergeometric series; otherwise differences are formed by subtraction,
    which loses bits as ``r -> 0`` (callers add working precision to match).
    """

    m: Modulus
    bits: int
    r: Approx
    x: Approx
    xc: Approx
    rp: Approx
    F0: Approx
    F1: Approx
    Eh: Approx
    W: Approx
    D: Approx
    T: Approx
    S0: Approx
    f1: Approx
    L0: Approx
    L1: Approx

    @property
    def pi(self) -> Approx:
        return Approx(+mp.pi, 1.0)


HALF = Fraction(1, 2)


@lru_cache(maxsize=100_000)
def kit(m: Modulus, bits: int, series: bool = True) -> Kit:
    wp = bits + GUARD_BITS
    cfg = PrecisionConfig(wp)
    small = series and m.x < SERIES_SWITCH_X
    if small:
        parts = dict(
            F0=hyp_series(HALF, HALF, 1, m.x, cfg),
            Eh=hyp_series(-HALF, HALF, 1, m.x, cfg),
            G0=hyp_series(HALF, HALF, 2, m.x, cfg),
            D=hyp_series(HALF, Fraction(3, 2), 2, m.x, cfg),
            T=hyp_series(1, Fraction(3, 2), Fraction(5, 2), m.x, cfg),
            G1=hyp_series(HALF, 1, Fraction(5, 2), m.x, cfg),
            S0=pfq_series((Fraction(3, 2), Fraction(3, 2), 1), (2, 2), m.x, cfg),
        )
    else:
        parts = dict(K=ell_k(m, cfg), E=ell_e(m, cfg), A=arth_ratio(m, cfg))
    with mpmath.workprec(bits):
        p = {k: Approx.from_result(v) for k, v in parts.items()}
        x = Approx(m.x)
        xc = Approx(m.xc)
        if small:
            F0 = p["F0"]
            Eh = p["Eh"]
            W = p["G0"] * HALF
            D = p["D"] * HALF
            T = p["T"] * Fraction(1, 3)
            S0 = p["S0"] * Fraction(1, 4)
            F1 = 1 + x * T
            f1 = p["G1"] * Fraction(2, 3)
            L0 = (x * S0).log1p()
            L1 = (x * T).log1p()
        else:
            two_over_pi = 2 / Approx(+mp.pi, 1.0)
            F0 = p["K"] * two_over_pi
            Eh = p["E"] * two_over_pi
            F1 = p["A"]
            W = (Eh - xc * F0) / x
            D = (F0 - Eh) / x
            T = (F1 - 1) / x
            S0 = (F0 - 1) / x
            f1 = (1 - xc * F1) / x
            L0 = F0.log()
            L1 = F1.log()
        return Kit(
            m=m,
            bits=bits,
            r=Approx(m.r, 0.0 if _mantissa_bits(m.r) <= bits else 2.0 * float(m.r)),
            x=x,
            xc=xc,
            rp=Approx(m.rp_at(bits), 2.0 * float(m.rp)),
            F0=F0,
            F1=F1,
            Eh=Eh,
            W=W,
            D=D,
            T=T,
            S0=S0,
            f1=f1,
            L0=L0,
            L1=L1,
        )
