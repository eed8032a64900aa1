"""Command-line front end: ``ellint <subcommand> ...``.

Exit codes: 0 success, 1 verification failure, 2 usage or parameter error.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
import time
from fractions import Fraction
from typing import List, Optional

import mpmath

from . import bounds as B
from . import verifier as V
from .core import Modulus, _k_agm
from .errors import EllintError, HarnessSelfTestError
from .functions import FunctionId, fn_eval, registry_json
from .precision import default_bits
from .report import GridSpec
from .series import fraction_str, logratio_series

COEFF_SERIES = ("f", "G", "h11", "h12")


def _digits(bits: int) -> int:
    return int(bits * 0.30103) + 2


def _fid(args) -> FunctionId:
    return FunctionId.parse(args.fn, args.param)


def _modulus(text: str, bits: int) -> Modulus:
    # the decimal string is rounded once at the working precision
    return Modulus.from_r(text, bits)


def cmd_eval(args) -> int:
    res = fn_eval(_fid(args), _modulus(args.r, args.prec), args.prec, path=args.path)
    d = _digits(args.prec)
    print(f"value     {mpmath.nstr(res.value, d)}")
    print(f"err_bound {mpmath.nstr(res.err_bound, 6)}")
    return 0


def cmd_coeffs(args) -> int:
    ps = logratio_series(args.series, args.order)
    if args.format == "json":
        print(json.dumps({"series": args.series, "variable": "r^2",
                          "coefficients": [fraction_str(c) for c in ps.coeffs]}, indent=2))
    else:
        w = csv.writer(sys.stdout, lineterminator="\n")
        w.writerow(["n", "numerator", "denominator"])
        for n, c in enumerate(ps.coeffs):
            w.writerow([n, c.numerator, c.denominator])
    return 0


def cmd_bounds(args) -> int:
    m = _modulus(args.r, args.prec)
    fams = [B.BoundFamily.parse(args.family)] if args.family else B.acceptance_families() + B.conjecture_families()
    d = min(_digits(args.prec), 30)
    print("family,lower,target,upper,holds")
    for fam in fams:
        bv = B.bound_values(fam, m, args.prec)
        holds = (bv.target.value - bv.lower.value > bv.target.err_bound + bv.lower.err_bound
                 and bv.upper.value - bv.target.value > bv.upper.err_bound + bv.target.err_bound)
        row = [mpmath.nstr(v.value, d) for v in (bv.lower, bv.target, bv.upper)]
        print(",".join([fam.label(), *row, "yes" if holds else "no"]))
    return 0


def cmd_verify(args) -> int:
    grid = GridSpec(args.grid) if args.grid else None
    progress = (lambda r: print(r.line(), file=sys.stderr, flush=True)) if args.verbose else None
    try:
        reports = V.run_all(args.suite, args.prec, grid, claim=args.claim, progress=progress)
    except HarnessSelfTestError as e:
        print(f"ellint: harness self-test failed: {e}", file=sys.stderr)
        return 1
    payload = json.dumps([r.to_json() for r in reports], indent=2)
    if args.report:
        with open(args.report, "w") as fh:
            fh.write(payload + "\n")
    else:
        print(payload)
    for r in reports:
        print(r.line(), file=sys.stderr if not args.report else sys.stdout)
    return 0 if V.aggregate_ok(reports) else 1


def cmd_crossover(args) -> int:
    c = B.crossover_r0(args.prec)
    print(f"r0       {mpmath.nstr(c.r0, _digits(args.prec))}")
    print(f"1 - r0   {mpmath.nstr(c.s0, 20)}")
    print(f"residual {mpmath.nstr(c.residual, 6)}")
    return 0


def cmd_scan(args) -> int:
    s = B.sign_change_scan(args.target, args.prec, GridSpec(args.grid))

    def iv(p):
        return "none" if p is None else f"[{mpmath.nstr(p[0], 8)}, {mpmath.nstr(p[1], 8)}]"

    print(f"positive {iv(s.positive)}")
    print(f"negative {iv(s.negative)}")
    print(f"crossing {iv(s.crossing)}")
    return 0


def cmd_bench(args) -> int:
    grid = GridSpec(64).points()
    mods = [Modulus.from_r(r, args.prec) for r in grid]
    rows = []
    t0 = time.perf_counter()
    for _ in range(args.reps):
        for m in mods:
            _k_agm(m, args.prec)
    ref = time.perf_counter() - t0
    rows.append(("K (AGM reference)", ref))
    for fam in B.acceptance_families():
        t0 = time.perf_counter()
        for i in range(args.reps):
            # vary precision so cached kits are not reused across reps
            for m in mods:
                B.bound_values(fam, m, args.prec + i)
        rows.append((fam.label(), time.perf_counter() - t0))
    n = args.reps * len(mods)
    print(f"{'evaluator':24s} {'evals/s':>12s} {'x AGM time':>12s}")
    for name, t in rows:
        print(f"{name:24s} {n / t:12.1f} {t / ref:12.2f}")
    return 0


def cmd_plot(args) -> int:
    fid = _fid(args)
    grid = GridSpec(args.points, args.lo, args.hi, args.spacing)
    d = _digits(args.prec)
    out = open(args.out, "w", newline="") if args.out else sys.stdout
    try:
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["r", "value", "err_bound"])
        for r in grid.points():
            res = fn_eval(fid, Modulus.from_r(r, args.prec), args.prec)
            w.writerow([mpmath.nstr(r, d), mpmath.nstr(res.value, d), mpmath.nstr(res.err_bound, 6)])
    finally:
        if out is not sys.stdout:
            out.close()
    return 0


def cmd_registry(args) -> int:
    print(json.dumps(registry_json(), indent=2))
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ellint", description="Complete elliptic integrals, bounds and claim checks.")
    sub = p.add_subparsers(dest="command", required=True)

    def prec(sp_):
        sp_.add_argument("--prec", type=int, default=default_bits(), help="binary precision in bits")

    e = sub.add_parser("eval", help="evaluate a registered function")
    e.add_argument("--fn", required=True)
    e.add_argument("--r", required=True)
    e.add_argument("--param", type=Fraction)
    e.add_argument("--path", choices=("auto", "series", "direct"), default="auto")
    prec(e)
    e.set_defaults(run=cmd_eval)

    c = sub.add_parser("coeffs", help="exact Maclaurin coefficients in r^2")
    c.add_argument("--series", choices=COEFF_SERIES, required=True)
    c.add_argument("--order", type=int, required=True)
    c.add_argument("--format", choices=("json", "csv"), default="json")
    c.set_defaults(run=cmd_coeffs)

    b = sub.add_parser("bounds", help="bound families at one modulus")
    b.add_argument("--r", required=True)
    b.add_argument("--family")
    prec(b)
    b.set_defaults(run=cmd_bounds)

    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("--suite", choices=V.SUITES, default="acceptance")
    v.add_argument("--claim")
    v.add_argument("--grid", type=int)
    v.add_argument("--report")
    v.add_argument("--verbose", action="store_true")
    prec(v)
    v.set_defaults(run=cmd_verify)

    x = sub.add_parser("crossover", help="root where the two lower bounds swap order")
    prec(x)
    x.set_defaults(run=cmd_crossover)

    s = sub.add_parser("scan", help="certified sign regions of h9 or h10")
    s.add_argument("--target", choices=("h9", "h10"), required=True)
    s.add_argument("--grid", type=int, default=400)
    prec(s)
    s.set_defaults(run=cmd_scan)

    bb = sub.add_parser("bench", help="time bound evaluation against the AGM reference")
    bb.add_argument("--reps", type=int, default=3)
    prec(bb)
    bb.set_defaults(run=cmd_bench)

    pl = sub.add_parser("plot", help="CSV samples r,value,err_bound for plotting elsewhere")
    pl.add_argument("--fn", required=True)
    pl.add_argument("--param", type=Fraction)
    pl.add_argument("--points", type=int, default=200)
    pl.add_argument("--lo", type=float, default=1e-3)
    pl.add_argument("--hi", type=float, default=1 - 1e-3)
    pl.add_argument("--spacing", default="uniform")
    pl.add_argument("--out")
    prec(pl)
    pl.set_defaults(run=cmd_plot)

    rg = sub.add_parser("registry", help="dump the function registry as JSON")
    rg.set_defaults(run=cmd_registry)
    return p


def main(argv: Optional[List[str]] = None) -> int:
    try:
        parser = build_parser()
    except EllintError as e:
        print(f"ellint: {type(e).__name__}: {e}", file=sys.stderr)
        return 2
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        if getattr(args, "prec", 128) < 53:
            raise EllintError("precision must be at least 53 bits")
        return args.run(args)
    except EllintError as e:
        print(f"ellint: {type(e).__name__}: {e}", file=sys.stderr)
        return 2
    except (ValueError, ZeroDivisionError) as e:
        print(f"ellint: invalid input: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
