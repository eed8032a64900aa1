"""Two-sided elementary bounds for 2K/pi (and a few companion ratios).

Every family is written in terms of the base quantities of
:func:`ellint.core.kit`, so lower bound, target and upper bound at one
modulus share the same cached evaluation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Tuple

import mpmath
import sympy as sp
from mpmath import mpf

from .core import EvalResult, Kit, Modulus, _finish, arth_ratio, arth_ratio_from_complement, kit
from .errors import InvalidParameter, UnknownFamily
from .functions import fn_eval
from .precision import GUARD_BITS, Approx, PrecisionConfig, as_config
from .report import GridSpec, Timer, VerificationReport, decide
from .series import seq

FAMILY_KEYS = (
    "AVV", "AQ", "KS", "Ineq1", "Ineq2", "KArth1", "KArth2", "KArth3",
    "Bound1OfK", "EK_PQ", "F25", "F24", "Conj1", "Conj2",
)
CONJECTURAL = frozenset({"Conj1", "Conj2"})
KARTH1_MAX_N = 8
SIDES = ("lower", "upper")

# exact constants; tunable ones can be shifted by a rational perturbation
PI = sp.pi
CONSTANTS: Dict[str, sp.Expr] = {
    "alpha_ineq1": sp.Rational(1, 320),
    "beta_ineq1": sp.Rational(1, 4),
    "alpha": sp.Rational(2549, 2880) - 2 / PI,
    "beta": sp.Rational(871, 48384),
    "delta": 1 - 8 / (3 * PI),
    "eta": sp.Rational(1, 80),
    "tau": 2 / PI,
    "mu": sp.exp(sp.Rational(-79, 960)),
    "alpha1": sp.Rational(3, 4),
    "beta1": sp.Integer(1),
}

# the constant each side is sharp in, and which way tightening moves it
TUNABLE: Dict[Tuple[str, str], Tuple[str, int]] = {
    ("Ineq1", "lower"): ("alpha_ineq1", +1),
    ("Ineq1", "upper"): ("beta_ineq1", -1),
    ("KArth2", "lower"): ("alpha", -1),
    ("KArth2", "upper"): ("beta", +1),
    ("KArth3", "lower"): ("delta", -1),
    ("KArth3", "upper"): ("eta", +1),
    ("AQ", "lower"): ("alpha1", +1),
    ("AQ", "upper"): ("beta1", -1),
}

# where the sharp constant binds: 0 means r -> 0, 1 means r -> 1
BINDING_END: Dict[Tuple[str, str], int] = {
    ("Ineq1", "lower"): 0,
    ("Ineq1", "upper"): 1,
    ("KArth2", "lower"): 1,
    ("KArth2", "upper"): 0,
    ("KArth3", "lower"): 1,
    ("KArth3", "upper"): 0,
    ("AQ", "lower"): 0,
    ("AQ", "upper"): 1,
}


@dataclass(frozen=True)
class BoundFamily:
    """A bound family, optionally restricted to one side.

    ``shift`` adds a rational to named constants (used for sharpness and
    mutation checks); ``n`` is the truncation order of KArth1.
    """

    key: str
    side: str = "both"
    n: Optional[int] = None
    shift: Tuple[Tuple[str, Fraction], ...] = ()

    def __post_init__(self):
        if self.key not in FAMILY_KEYS:
            raise UnknownFamily(f"unknown bound family {self.key!r}")
        if self.side not in SIDES + ("both",):
            raise InvalidParameter(f"side must be lower, upper or both, got {self.side!r}")
        if self.key == "KArth1":
            if self.n is None or not 1 <= int(self.n) <= KARTH1_MAX_N:
                raise InvalidParameter(f"KArth1 needs 1 <= n <= {KARTH1_MAX_N}")
        elif self.n is not None:
            raise InvalidParameter(f"{self.key} takes no n")

    @classmethod
    def parse(cls, text: str, side: str = "both") -> "BoundFamily":
        """``"Ineq1"``, ``"KArth1:3"`` or ``"KArth1(3)"``."""
        t = text.replace("(", ":").rstrip(")")
        if ":" in t:
            key, n = t.split(":", 1)
            return cls(key, side, int(n))
        return cls(t, side)

    @property
    def conjectural(self) -> bool:
        return self.key in CONJECTURAL

    @property
    def sides(self) -> Tuple[str, ...]:
        return SIDES if self.side == "both" else (self.side,)

    def label(self) -> str:
        base = self.key if self.n is None else f"{self.key}({self.n})"
        sh = "".join(f"[{k}{'+' if v >= 0 else ''}{v}]" for k, v in self.shift)
        return base + sh + ("" if self.side == "both" else f".{self.side}")

    def with_side(self, side: str) -> "BoundFamily":
        return BoundFamily(self.key, side, self.n, self.shift)

    def shifted(self, name: str, delta: Fraction) -> "BoundFamily":
        return BoundFamily(self.key, self.side, self.n, self.shift + ((name, Fraction(delta)),))


def acceptance_families() -> List[BoundFamily]:
    out = [BoundFamily(k) for k in ("AVV", "AQ", "KS", "Ineq1", "Ineq2")]
    out += [BoundFamily("KArth1", n=n) for n in range(1, 5)]
    out += [BoundFamily(k) for k in ("KArth2", "KArth3", "EK_PQ", "F24", "F25", "Bound1OfK")]
    return out


def conjecture_families() -> List[BoundFamily]:
    return [BoundFamily("Conj1"), BoundFamily("Conj2")]


# ---------------------------------------------------------------------------
# evaluation


def _const(k: Kit, fam: BoundFamily, name: str) -> Approx:
    pi = k.pi
    base = {
        "alpha_ineq1": lambda: Approx.exact(Fraction(1, 320)),
        "beta_ineq1": lambda: Approx.exact(Fraction(1, 4)),
        "alpha": lambda: Fraction(2549, 2880) - 2 / pi,
        "beta": lambda: Approx.exact(Fraction(871, 48384)),
        "delta": lambda: 1 - 8 / (3 * pi),
        "eta": lambda: Approx.exact(Fraction(1, 80)),
        "tau": lambda: 2 / pi,
        "mu": lambda: Approx.exact(Fraction(-79, 960)).exp(),
        "alpha1": lambda: Approx.exact(Fraction(3, 4)),
        "beta1": lambda: Approx.exact(1),
    }[name]()
    for n, d in fam.shift:
        if n == name:
            base = base + d
    return base


def _poly(k: Kit, coeffs) -> Approx:
    acc = Approx(mpf(0))
    for c in reversed(coeffs):
        acc = acc * k.x + c
    return acc


def _target(k: Kit, key: str) -> Approx:
    if key == "EK_PQ":
        return k.Eh / k.F0
    if key == "F24":
        return k.W * k.F1 / (k.f1 * k.F0)
    if key == "F25":
        return k.D / k.F0
    return k.F0


def _pow_f1(k: Kit, expo: Approx) -> Approx:
    """``F1 ** expo`` as ``exp(expo * log F1)`` using the cancellation-free log."""
    return (expo * k.L1).exp()


def _karth1_base(k: Kit, n: int) -> Approx:
    s = _poly(k, [Fraction(0), Fraction(0)] + [seq("a_tilde", j) for j in range(2, n + 2)])
    return Fraction(1, 4) + k.F1 * Fraction(3, 4) - s


def _sides(k: Kit, fam: BoundFamily) -> Tuple[Approx, Approx]:
    key, x = fam.key, k.x
    c = lambda name: _const(k, fam, name)  # noqa: E731
    if key == "AVV":
        return _max(k.F1.sqrt(), 2 / k.pi * k.F1), k.F1
    if key == "AQ":
        return _pow_f1(k, c("alpha1")), _pow_f1(k, c("beta1"))
    if key == "KS":
        return _pow_f1(k, Fraction(3, 4) + x * x / 200), _pow_f1(k, Fraction(3, 4) + x / 4)
    if key == "Ineq1":
        return (
            _pow_f1(k, Fraction(3, 4) + c("alpha_ineq1") * x),
            _pow_f1(k, Fraction(3, 4) + c("beta_ineq1") * x),
        )
    if key == "Ineq2":
        up = _pow_f1(k, Fraction(3, 4) + x / 4)
        return (-x * (k.pi / 2).log()).exp() * up, up
    if key == "KArth1":
        n = int(fam.n)
        base = _karth1_base(k, n)
        at = seq("a_tilde", n + 1)
        p1 = (Fraction(3, 4) - 2 / k.pi) * k.F1 - at
        p2 = at * (k.F1 - 1)
        xn = x ** (n + 1)
        return base - p1 * xn, base - p2 * xn
    if key == "KArth2":
        p3 = _poly(k, [1, Fraction(-1, 12), Fraction(-91, 2880)])
        x3 = x**3
        return (p3 - c("alpha") * x3) * k.F1, (p3 - c("beta") * x3) * k.F1
    if key == "KArth3":
        x2 = x * x
        lo = Fraction(1, 4) + Fraction(3, 4) * (1 - c("delta") * x2) * k.F1
        hi = Fraction(1, 4) + Fraction(3, 4) * (1 - c("eta") * x2) * k.F1
        return lo, hi
    if key == "Bound1OfK":
        return (1 - (1 - 2 / k.pi) * k.r) * k.F1, k.F1
    if key == "EK_PQ":
        head = [1, Fraction(-1, 2), Fraction(-1, 16), Fraction(-1, 32)]
        return _poly(k, head + [Fraction(-13, 32)]), _poly(k, head + [Fraction(-41, 2048)])
    if key == "F24":
        kk = k.F0 * k.pi / 2
        branch = 1 - Approx.exact(16).log() / (x * x * k.f1 * kk)
        p4 = _max(Approx.exact(Fraction(1, 40)), branch)
        return Fraction(3, 4) + x / 4 * p4, Fraction(3, 4) + x / 4
    if key == "F25":
        q = k.f1 / k.F1
        return 1 - q, 1 - Fraction(3, 4) * q
    if key == "Conj1":
        e0 = Fraction(3, 4) + x / 320
        return (
            _pow_f1(k, e0 + x * x * Fraction(517, 201600)),
            _pow_f1(k, e0 + x * x * Fraction(79, 320)),
        )
    if key == "Conj2":
        up = _pow_f1(k, Fraction(3, 4) + x / 4)
        x2 = x * x
        return (x2 * c("tau").log()).exp() * up, (x2 * c("mu").log()).exp() * up
    raise UnknownFamily(key)


def _max(a: Approx, b: Approx) -> Approx:
    return a if a.v >= b.v else b


def _modulus(m, bits: int) -> Modulus:
    return m if isinstance(m, Modulus) else Modulus.from_r(m, bits)


@dataclass
class BoundValues:
    lower: EvalResult
    target: EvalResult
    upper: EvalResult


def bound_values(fam: BoundFamily, m, prec=None) -> BoundValues:
    """Lower bound, target and upper bound at one modulus."""
    bits = as_config(prec).bits
    m = _modulus(m, bits)
    wp = bits + GUARD_BITS
    k = kit(m, wp, True)
    with mpmath.workprec(wp):
        lo, hi = _sides(k, fam)
        t = _target(k, fam.key)
        out = [(a.v, a.err) for a in (lo, t, hi)]
    return BoundValues(*(_finish(v, e, bits) for v, e in out))


def bound_eval(fam: BoundFamily, m, prec=None) -> EvalResult:
    """Value of one side of a family; ``fam.side`` must be lower or upper."""
    if fam.side not in SIDES:
        raise InvalidParameter("bound_eval needs a family with side lower or upper")
    bv = bound_values(fam, m, prec)
    return bv.lower if fam.side == "lower" else bv.upper


def target_eval(fam: BoundFamily, m, prec=None) -> EvalResult:
    return bound_values(fam, m, prec).target


def _gaps(fam: BoundFamily, r: mpf, side: str):
    def cmp(bits: int):
        bv = bound_values(fam, Modulus.from_r(r, bits), bits)
        if side == "lower":
            return bv.target.value - bv.lower.value, bv.target.err_bound + bv.lower.err_bound
        return bv.upper.value - bv.target.value, bv.upper.err_bound + bv.target.err_bound

    return cmp


def check_bounds(fam: BoundFamily, grid: Optional[GridSpec] = None, prec=None) -> VerificationReport:
    """Strict ``lower < target < upper`` on every grid point, with escalation on ties."""
    grid = grid or GridSpec()
    cfg = as_config(prec)
    min_margin, min_at, witness, escalated, note = None, None, None, False, ""
    with Timer() as t:
        for r in grid.points():
            for side in fam.sides:
                d = decide(_gaps(fam, r, side), cfg)
                escalated |= d.escalated
                if min_margin is None or d.gap < min_margin:
                    min_margin, min_at = d.gap, r
                if not d.ok:
                    bv = bound_values(fam, Modulus.from_r(r, d.bits), d.bits)
                    other = bv.lower if side == "lower" else bv.upper
                    witness = (r, other.value, bv.target.value)
                    note = f"{side} side violated" + (" (indeterminate)" if d.indeterminate else "")
                    break
            if witness is not None:
                break
    return VerificationReport(
        claim_id=f"bounds-{fam.label()}",
        status="pass" if witness is None else "fail",
        precision_bits=cfg.bits,
        grid=grid,
        min_margin=min_margin,
        min_margin_at=min_at,
        witness=witness,
        elapsed=t.elapsed,
        note=note,
        gating=not fam.conjectural,
        escalated=escalated,
    )


# ---------------------------------------------------------------------------
# sharpness


@dataclass
class SharpnessResult:
    family: BoundFamily
    perturbation: Fraction
    witness: Optional[Modulus]
    status: str  # "found" or "not-reachable"
    boundary: Optional[mpf] = None
    gap: Optional[mpf] = None
    note: str = ""

    @property
    def r(self) -> Optional[mpf]:
        return None if self.witness is None else self.witness.r


def _violation(fam: BoundFamily, side: str, r: mpf, bits: int) -> Tuple[mpf, mpf]:
    """(amount by which the bound is violated, err); positive means violated."""
    gap, err = _gaps(fam, r, side)(bits)
    return -gap, err


def sharpness_witness(fam: BoundFamily, perturbation, prec=None) -> SharpnessResult:
    """Search for a modulus that violates ``fam`` with its sharp constant tightened.

    Sweeps ``r = 2**-k`` (toward 0) or ``r = 1 - 2**-k`` (toward 1),
    ``k <= p/2``, following the end where the constant binds, and returns the
    first point whose violation exceeds the error bound.  A bisection between
    that point and the last non-violating one locates the edge of the
    violation region.
    """
    if fam.side not in SIDES:
        raise InvalidParameter("sharpness needs a single side")
    spec = TUNABLE.get((fam.key, fam.side))
    if spec is None:
        raise InvalidParameter(f"{fam.label()} has no tunable sharp constant")
    name, direction = spec
    delta = Fraction(perturbation)
    if delta == 0 or (delta > 0) != (direction > 0):
        raise InvalidParameter(f"perturbation {delta} does not tighten {name}")
    cfg = as_config(prec)
    bits = cfg.bits
    pert = fam.shifted(name, delta)
    end = BINDING_END[(fam.key, fam.side)]
    prev_ok: Optional[mpf] = None
    with mpmath.workprec(bits + GUARD_BITS):
        far = 1 - mpmath.ldexp(1, -8) if end == 0 else mpmath.ldexp(1, -8)
    v, err = _violation(pert, fam.side, far, bits)
    if v < -err:
        prev_ok = far
    for kexp in range(1, bits // 2 + 1):
        with mpmath.workprec(bits + GUARD_BITS):
            r = mpmath.ldexp(1, -kexp) if end == 0 else 1 - mpmath.ldexp(1, -kexp)
        v, err = _violation(pert, fam.side, r, bits)
        if v > err:
            edge = _bisect_edge(pert, fam.side, prev_ok, r, bits) if prev_ok is not None else None
            return SharpnessResult(fam, delta, Modulus.from_r(r, bits), "found", edge, v)
        if v < -err:
            prev_ok = r
    return SharpnessResult(
        fam, delta, None, "not-reachable",
        note=f"no certified violation for r = {'2^-k' if end == 0 else '1 - 2^-k'}, k <= {bits // 2}",
    )


def _bisect_edge(fam: BoundFamily, side: str, good: mpf, bad: mpf, bits: int, steps: int = 40) -> mpf:
    with mpmath.workprec(bits + GUARD_BITS):
        for _ in range(steps):
            mid = (good + bad) / 2
            v, err = _violation(fam, side, mid, bits)
            if v > err:
                bad = mid
            elif v < -err:
                good = mid
            else:
                break
        return (good + bad) / 2


# ---------------------------------------------------------------------------
# crossover and sign changes


@dataclass
class Crossover:
    r0: mpf
    s0: mpf  # 1 - r0
    residual: mpf
    bits: int


def crossover_r0(prec=None) -> Crossover:
    """Root of ``arth(r)/r = (pi/2)**(320/79)`` by bisection in ``s = 1 - r``.

    ``arth(r)/r`` is increasing in ``r``, hence decreasing in ``s``.
    """
    cfg = as_config(prec)
    bits = cfg.bits
    wp = bits + 64
    with mpmath.workprec(wp):
        level = mpmath.power(mpmath.pi / 2, mpf(320) / 79)

        def resid(s):
            return arth_ratio_from_complement(s, wp).value - level

        lo, hi = mpf("1e-30"), mpf("0.5")  # resid(lo) > 0 > resid(hi)
        # bisect on log s: the root sits many decades below 1
        for _ in range(wp + 40):
            mid = mpmath.sqrt(lo * hi) if hi / lo > 4 else (lo + hi) / 2
            if resid(mid) > 0:
                lo = mid
            else:
                hi = mid
            if hi - lo <= mpmath.ldexp(lo, -wp + 8):
                break
        s0 = (lo + hi) / 2
        r0 = 1 - s0
        res = abs(arth_ratio(Modulus.from_r(r0, wp), wp).value - level)
    # r0 is returned at the working precision so the residual refers to it
    return Crossover(r0, s0, res, bits)


@dataclass
class SignScan:
    target: str
    positive: Optional[Tuple[mpf, mpf]]
    negative: Optional[Tuple[mpf, mpf]]
    crossing: Optional[Tuple[mpf, mpf]]
    samples: List[Tuple[mpf, int]] = field(default_factory=list)


def sign_change_scan(target: str, prec=None, grid: Optional[GridSpec] = None) -> SignScan:
    """Certified sign of ``h9`` or ``h10`` over a grid.

    ``positive``/``negative`` are the hulls of the grid points where the sign
    is certified (|value| > err); ``crossing`` brackets the first sign change.
    """
    if target not in ("h9", "h10"):
        raise InvalidParameter("sign scan targets are h9 and h10")
    grid = grid or GridSpec(400)
    bits = as_config(prec).bits
    samples = []
    for r in grid.points():
        res = fn_eval(target, Modulus.from_r(r, bits), bits)
        s = 0
        if res.value > res.err_bound:
            s = 1
        elif res.value < -res.err_bound:
            s = -1
        samples.append((r, s))
    pos = [r for r, s in samples if s > 0]
    neg = [r for r, s in samples if s < 0]
    crossing = None
    last = None
    for r, s in samples:
        if s == 0:
            continue
        if last is not None and s != last[1]:
            crossing = (last[0], r)
            break
        last = (r, s)
    return SignScan(
        target,
        (pos[0], pos[-1]) if pos else None,
        (neg[0], neg[-1]) if neg else None,
        crossing,
        samples,
    )


def ordering_flip(prec=None) -> Tuple[bool, bool]:
    """Whether the log-exponent lower bound beats the (pi/2)^(-x) lower bound
    below the crossover and loses above it."""
    bits = as_config(prec).bits
    c = crossover_r0(bits)
    with mpmath.workprec(bits + GUARD_BITS):
        left, right = c.r0 / 2, (1 + c.r0) / 2
    a = BoundFamily("Ineq1", "lower")
    b = BoundFamily("Ineq2", "lower")
    out = []
    for r in (left, right):
        la = bound_eval(a, Modulus.from_r(r, bits), bits)
        lb = bound_eval(b, Modulus.from_r(r, bits), bits)
        out.append((la.value - lb.value, la.err_bound + lb.err_bound))
    (d0, e0), (d1, e1) = out
    return bool(d0 > e0), bool(-d1 > e1)
