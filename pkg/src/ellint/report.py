"""Grids, verification reports and the escalate-then-decide margin rule."""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Tuple

import mpmath
import numpy as np
from mpmath import mpf

from .errors import InvalidParameter
from .precision import PrecisionConfig

SPACINGS = ("uniform", "geometric-toward-0", "geometric-toward-1", "composite")
STATUSES = ("pass", "fail", "not-reachable")


@dataclass(frozen=True)
class GridSpec:
    """Sample points in ``(lo, hi)``; composite splits the count in thirds over
    a geometric run toward 0, a uniform middle and a geometric run toward 1."""

    n_points: int = 10_000
    lo: float = 1e-6
    hi: float = 1 - 1e-6
    spacing: str = "composite"

    def __post_init__(self):
        if not 0 < self.lo < self.hi < 1:
            raise InvalidParameter(f"grid needs 0 < lo < hi < 1, got ({self.lo}, {self.hi})")
        if self.n_points < 16:
            raise InvalidParameter("grid needs at least 16 points")
        if self.spacing not in SPACINGS:
            raise InvalidParameter(f"unknown spacing {self.spacing!r}")

    def floats(self) -> np.ndarray:
        n, lo, hi = self.n_points, self.lo, self.hi
        if self.spacing == "uniform":
            pts = np.linspace(lo, hi, n)
        elif self.spacing == "geometric-toward-0":
            pts = np.geomspace(lo, hi, n)
        elif self.spacing == "geometric-toward-1":
            pts = 1 - np.geomspace(1 - lo, 1 - hi, n)
        else:
            a, b = min(0.1, hi), max(0.9, lo)
            n0 = n // 3
            n2 = n // 3
            n1 = n - n0 - n2
            pts = np.concatenate(
                [
                    np.geomspace(lo, a, n0, endpoint=False),
                    np.linspace(a, b, n1, endpoint=False),
                    1 - np.geomspace(1 - b, 1 - hi, n2),
                ]
            )
        pts = np.unique(pts)
        return pts[(pts > 0) & (pts < 1)]

    def points(self) -> List[mpf]:
        """Grid points as exact binary mpf values (reproducible across platforms).

        Uniform grids are built as ``lo + i*h`` in exact binary arithmetic so
        that second differences see equal steps.
        """
        if self.spacing == "uniform":
            lo = mpf(self.lo)
            h = mpf((self.hi - self.lo) / (self.n_points - 1))
            with mpmath.workprec(256):
                return [lo + i * h for i in range(self.n_points)]
        return [mpf(float(v)) for v in self.floats()]

    def to_json(self) -> dict:
        return {"n_points": self.n_points, "lo": self.lo, "hi": self.hi, "spacing": self.spacing}


Witness = Tuple[mpf, mpf, mpf]


@dataclass
class VerificationReport:
    claim_id: str
    status: str
    precision_bits: int
    grid: Optional[GridSpec] = None
    min_margin: Optional[mpf] = None
    min_margin_at: Optional[mpf] = None
    witness: Optional[Witness] = None
    elapsed: float = 0.0
    note: str = ""
    gating: bool = True
    escalated: bool = False

    def __post_init__(self):
        if self.status not in STATUSES:
            raise InvalidParameter(f"unknown status {self.status!r}")
        if self.status == "fail" and self.witness is None:
            raise InvalidParameter("a failing report must carry a witness")

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def to_json(self) -> dict:
        def s(v):
            return None if v is None else mpmath.nstr(v, 30)

        return {
            "claim_id": self.claim_id,
            "status": self.status,
            "precision_bits": self.precision_bits,
            "min_margin": s(self.min_margin),
            "min_margin_at": s(self.min_margin_at),
            "witness": None if self.witness is None else [s(v) for v in self.witness],
            "elapsed_ms": round(self.elapsed * 1000.0, 3),
            "grid": None if self.grid is None else self.grid.to_json(),
            "note": self.note,
            "gating": self.gating,
            "escalated": self.escalated,
        }

    def line(self) -> str:
        mm = "" if self.min_margin is None else f" min_margin={mpmath.nstr(self.min_margin, 6)}"
        tag = "" if self.gating else " [non-gating]"
        note = f" ({self.note})" if self.note else ""
        return f"{self.status.upper():13s} {self.claim_id}{mm}{tag}{note}"


class Timer:
    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.t0


# a comparison at a given precision: returns (gap, err) where the claim holds iff gap > err
Comparison = Callable[[int], Tuple[mpf, mpf]]


@dataclass
class Decision:
    ok: bool
    gap: mpf
    err: mpf
    bits: int
    escalated: bool = False
    indeterminate: bool = False


def decide(cmp: Comparison, cfg: PrecisionConfig) -> Decision:
    """Strict comparison with one escalation on a tie.

    A clear pass or clear failure at the base precision is final.  A tie
    (``|gap| <= err``) is retried at the escalated precision; a pass found
    there must be confirmed at twice that precision.
    """
    gap, err = cmp(cfg.bits)
    if gap > err:
        return Decision(True, gap, err, cfg.bits)
    if gap < -err:
        return Decision(False, gap, err, cfg.bits)
    esc = cfg.escalated().bits
    gap2, err2 = cmp(esc)
    if gap2 > err2:
        gap3, err3 = cmp(2 * esc)
        if gap3 > err3:
            return Decision(True, gap2, err2, esc, escalated=True)
        return Decision(False, gap3, err3, 2 * esc, escalated=True, indeterminate=True)
    return Decision(False, gap2, err2, esc, escalated=True, indeterminate=abs(gap2) <= err2)
