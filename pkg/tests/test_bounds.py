from fractions import Fraction

import mpmath
import pytest
from mpmath import mpf

from ellint import bounds as B
from ellint.core import Modulus
from ellint.errors import InvalidParameter, UnknownFamily
from ellint.report import GridSpec

BITS = 128


def test_ineq1_values_at_half():
    bv = B.bound_values(B.BoundFamily("Ineq1"), "0.5", BITS)
    with mpmath.workprec(BITS):
        ln3 = mpmath.log(3)
        assert abs(bv.lower.value - ln3 ** (mpf(3) / 4 + mpf(1) / 1280)) < mpf("1e-35")
        assert abs(bv.upper.value - ln3 ** (mpf(13) / 16)) < mpf("1e-35")
        assert abs(bv.upper.value - mpf("1.079410")) < mpf("5e-6")
        assert abs(bv.target.value - 2 * mpmath.ellipk(mpf("0.25")) / mpmath.pi) < mpf("1e-35")


def test_ek_pq_at_half():
    bv = B.bound_values(B.BoundFamily("EK_PQ"), "0.5", BITS)
    with mpmath.workprec(BITS):
        ek = mpmath.ellipe(mpf("0.25")) / mpmath.ellipk(mpf("0.25"))
    assert abs(bv.target.value - ek) < mpf("1e-35")
    assert abs(bv.lower.value - mpf("0.869019")) < mpf("1e-6")
    assert abs(bv.upper.value - mpf("0.870527")) < mpf("1e-6")


def test_bound1ofk_near_zero():
    v = B.bound_eval(B.BoundFamily("Bound1OfK", "lower"), "1e-30", BITS)
    assert abs(v.value - 1) < mpf("1e-29")


def test_nesting_at_half():
    m = Modulus.from_r("0.5", BITS)
    lowers, uppers, target = [], [], None
    for fam in B.acceptance_families():
        if fam.key in ("EK_PQ", "F24", "F25"):
            continue
        bv = B.bound_values(fam, m, BITS)
        target = bv.target
        lowers.append(bv.lower)
        uppers.append(bv.upper)
    assert all(target.value - lo.value > target.err_bound + lo.err_bound for lo in lowers)
    assert all(up.value - target.value > target.err_bound + up.err_bound for up in uppers)


def test_chain_sharpening():
    for r in GridSpec(60).points():
        m = Modulus.from_r(r, BITS)
        assert B.bound_eval(B.BoundFamily("Ineq1", "upper"), m, BITS).value <= \
            B.bound_eval(B.BoundFamily("AQ", "upper"), m, BITS).value
        low = B.bound_eval(B.BoundFamily("Bound1OfK", "lower"), m, BITS).value
        for n in (1, 2, 3, 4):
            assert B.bound_eval(B.BoundFamily("KArth1", "lower", n), m, BITS).value > low


def test_mutation_hardened_alpha_fails_near_zero():
    fam = B.BoundFamily("Ineq1", "lower").shifted("alpha_ineq1", Fraction(1, 319) - Fraction(1, 320))
    rep = B.check_bounds(fam, GridSpec(300), BITS)
    assert rep.status == "fail"
    assert rep.witness[0] < mpf("0.5")


def test_small_grid_sweep_passes():
    for fam in B.acceptance_families():
        assert B.check_bounds(fam, GridSpec(40), BITS).passed, fam.label()


def test_sharpness_witnesses():
    res = B.sharpness_witness(B.BoundFamily("Ineq1", "lower"), Fraction(1, 1000), BITS)
    assert res.status == "found"
    assert mpf("0.1") <= res.r < mpf("0.55")
    res = B.sharpness_witness(B.BoundFamily("KArth3", "upper"), Fraction(1, 1000), BITS)
    assert res.status == "found"
    res = B.sharpness_witness(B.BoundFamily("Ineq1", "upper"), Fraction(-1, 1000), BITS)
    assert res.status == "not-reachable" and res.witness is None


def test_sharpness_rejects_loosening():
    with pytest.raises(InvalidParameter):
        B.sharpness_witness(B.BoundFamily("Ineq1", "lower"), Fraction(-1, 1000), BITS)


def test_crossover():
    c = B.crossover_r0(BITS)
    assert c.residual <= mpf(2) ** -124
    assert abs(c.r0 - mpf("0.9999922")) < mpf("1e-7")
    with mpmath.workprec(BITS + 64):
        assert abs(mpmath.atanh(c.r0) / c.r0 - (mpmath.pi / 2) ** (mpf(320) / 79)) < mpf(2) ** -100
    assert B.ordering_flip(BITS) == (True, True)


@pytest.mark.parametrize("target,near0", [("h9", 1), ("h10", -1)])
def test_sign_scan(target, near0):
    s = B.sign_change_scan(target, BITS, GridSpec(100))
    assert s.positive is not None and s.negative is not None
    first = s.positive if near0 > 0 else s.negative
    assert first[0] < s.crossing[0]


def test_family_parsing():
    assert B.BoundFamily.parse("KArth1(3)").n == 3
    with pytest.raises(UnknownFamily):
        B.BoundFamily("Nope")
    with pytest.raises(InvalidParameter):
        B.BoundFamily("KArth1", n=9)
