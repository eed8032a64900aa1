from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from mpmath import mpf

from ellint.core import Modulus
from ellint.errors import ParamOutOfRange, ParamRequired, RadiusGuard, UnknownFunction
from ellint.functions import (
    REGISTRY,
    FunctionId,
    fn_claims,
    fn_eval,
    has_series,
    list_functions,
    registry_json,
)
from ellint.report import GridSpec

BITS = 128


def oracle(name, r, bits=BITS + 64):
    """Independent closed forms from mpmath primitives."""
    with mpmath.workprec(bits):
        r = mpf(r)
        x = r * r
        k = mpmath.ellipk(x)
        e = mpmath.ellipe(x)
        f0 = 2 * k / mpmath.pi
        f1 = mpmath.atanh(r) / r
        g = mpmath.log(f0) / mpmath.log(f1)
        return {
            "G": g,
            "f": (g - mpf(3) / 4) / x,
            "h13": mpmath.log(f0) / x,
            "h11": ((3 + x) / 4 * mpmath.log(f1) - mpmath.log(f0)) / x**2,
            "h12": (mpmath.log(f0) - (mpf(3) / 4 + x / 320) * mpmath.log(f1)) / x**3,
        }[name]


@pytest.mark.parametrize("name", ["G", "f", "h11", "h12", "h13"])
@pytest.mark.parametrize("r", ["0.05", "0.3", "0.6", "0.95"])
def test_against_mpmath_closed_forms(name, r):
    res = fn_eval(name, r, BITS)
    ref = oracle(name, Modulus.from_r(r, BITS).r)
    assert abs(res.value - ref) <= abs(ref) * mpf(2) ** -(BITS - 16)


def test_dual_path_agreement_around_switch():
    grid = GridSpec(100, 0.05, 0.7, "uniform").points()
    tol = mpf(2) ** -(BITS - 8)
    for name, desc in REGISTRY.items():
        if desc.series is None:
            continue
        fid = FunctionId(name, Fraction(1) if desc.param_kind else None)
        for r in grid[::10]:
            a = fn_eval(fid, r, BITS, path="series").value
            b = fn_eval(fid, r, BITS, path="direct").value
            assert abs(a - b) <= tol * max(abs(b), mpf(1) / 10**6), (name, r)


@settings(max_examples=30, deadline=None)
@given(st.floats(min_value=1e-6, max_value=1 - 1e-6))
def test_g_equals_x_f_plus_three_quarters(r):
    m = Modulus.from_r(r, BITS)
    g = fn_eval("G", m, BITS)
    f = fn_eval("f", m, BITS)
    with mpmath.workprec(BITS + 16):
        gap = abs(g.value - (m.x * f.value + mpf(3) / 4))
    assert gap <= mpf(2) ** -(BITS - 4)


def test_h1_example_value():
    assert abs(fn_eval("h1", "0.5", BITS).value - mpf("1.534436")) < mpf("1e-6")


def test_h9_h10_scaled_limits():
    r = mpf(1) / 100
    v9 = fn_eval("h9", r, BITS).value
    v10 = fn_eval("h10", r, BITS).value
    assert abs(3 * v9 / r**4 - (mpf(2133) / 960 - 6 / mpmath.pi)) < mpf("1e-3")
    assert abs(241920 * v10 / r**6 + 1539) < 1


def test_f10_constant_term():
    assert abs(fn_eval("f10", "1e-4", BITS).value - mpf(1538) / 5) < mpf("1e-3")


def test_h6_between_its_limits():
    assert abs(fn_eval("h6", "1e-3", BITS).value - mpmath.pi / 2) < mpf("1e-15")
    near1 = fn_eval("h6", 1 - mpf(2) ** -40, BITS).value
    assert 1 + 331 * mpmath.pi / 5760 < near1 < mpmath.pi / 2


def test_h9_approaches_minus_quarter():
    with mpmath.workprec(BITS):
        rs = [1 - mpf(2) ** -k for k in (20, 40, 60)]
    v = [fn_eval("h9", r, BITS).value for r in rs]
    assert all(x < 0 for x in v)
    assert abs(v[2] + mpf(1) / 4) < abs(v[1] + mpf(1) / 4) < abs(v[0] + mpf(1) / 4)


def test_errors():
    with pytest.raises(UnknownFunction):
        fn_eval("nope", "0.5")
    with pytest.raises(ParamRequired):
        fn_eval("h2", "0.5")
    with pytest.raises(ParamOutOfRange):
        fn_eval(FunctionId("h2", Fraction(0)), "0.5")
    with pytest.raises(ParamOutOfRange):
        fn_eval(FunctionId("g", Fraction(-1)), "0.5")
    with pytest.raises(RadiusGuard):
        fn_eval("f", "0.9", BITS, path="series")


def test_claims_registry():
    assert fn_claims("f").monotone == "increasing"
    assert fn_claims("g:1/4").convexity == "convex"
    assert fn_claims("g:1/320").convexity == "concave"
    # no claim between the two thresholds
    assert not fn_claims("g:1/100").has_claims
    assert fn_claims("h1").convexity == "concave"
    names = {fid.name for fid, _, _ in list_functions()}
    assert {"f1", "f25", "g1", "g4", "h1", "h13"} <= names
    rows = registry_json()
    assert all("group" in row and "claims" in row for row in rows)
    assert has_series("f")


def test_evaluation_is_deterministic():
    a = fn_eval("f", "0.37", BITS)
    b = fn_eval("f", "0.37", BITS)
    assert a == b
