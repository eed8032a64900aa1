from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from mpmath import mpf

from ellint.core import (
    Modulus,
    _k_agm,
    agm,
    arth_ratio,
    arth_ratio_from_complement,
    de_dr,
    dk_dr,
    e_minus_rp2k_over_r2,
    ell_e,
    ell_k,
    ell_k_series,
    g0_g1,
    hyp_series,
    k_minus_e_over_r2,
)
from ellint.errors import InvalidModulus
from ellint.precision import Approx, PrecisionConfig, as_config

BITS = 128


def close(a, b, rel_bits):
    return abs(a - b) <= abs(b) * mpmath.ldexp(1, -rel_bits)


def oracle_k(r, bits=BITS + 32):
    with mpmath.workprec(bits):
        return mpmath.ellipk(mpf(r) ** 2)


def oracle_e(r, bits=BITS + 32):
    with mpmath.workprec(bits):
        return mpmath.ellipe(mpf(r) ** 2)


@pytest.mark.parametrize("r", ["0.001", "0.1", "0.5", "0.7071", "0.9", "0.999", "0.999999"])
def test_k_and_e_match_mpmath(r):
    m = Modulus.from_r(r, BITS)
    k, e = ell_k(m, BITS), ell_e(m, BITS)
    assert close(k.value, oracle_k(m.r), BITS - 8)
    assert close(e.value, oracle_e(m.r), BITS - 8)
    assert abs(k.value - oracle_k(m.r)) <= k.err_bound + abs(k.value) * mpmath.ldexp(1, -BITS + 2)


def test_k_against_quadrature():
    r = mpf("0.6")
    with mpmath.workprec(200):
        q = mpmath.quad(lambda t: 1 / mpmath.sqrt(1 - r**2 * mpmath.sin(t) ** 2), [0, mpmath.pi / 2])
    assert close(ell_k(r, BITS).value, q, BITS - 8)


@settings(max_examples=40, deadline=None)
@given(st.floats(min_value=1e-6, max_value=1 - 1e-6))
def test_series_and_agm_k_agree(r):
    m = Modulus.from_r(r, BITS)
    assert close(ell_k_series(m, BITS).value, _k_agm(m, BITS).value, BITS - 8)


@settings(max_examples=40, deadline=None)
@given(st.floats(min_value=1e-6, max_value=1 - 1e-9))
def test_arth_ratio_matches_atanh(r):
    m = Modulus.from_r(r, BITS)
    with mpmath.workprec(BITS + 64):
        ref = mpmath.atanh(m.r) / m.r
    assert close(arth_ratio(m, BITS).value, ref, BITS - 8)


def test_arth_ratio_from_complement_near_one():
    s = mpf(2) ** -60
    with mpmath.workprec(BITS + 128):
        ref = mpmath.atanh(1 - s) / (1 - s)
    assert close(arth_ratio_from_complement(s, BITS).value, ref, BITS - 8)


def test_legendre_relation():
    # E K' + E' K - K K' = pi/2
    m = Modulus.from_r("0.3", BITS)
    mc = Modulus.from_r(m.rp, BITS)
    with mpmath.workprec(BITS):
        k, e = ell_k(m, BITS).value, ell_e(m, BITS).value
        kc, ec = ell_k(mc, BITS).value, ell_e(mc, BITS).value
        assert abs(e * kc + ec * k - k * kc - mpmath.pi / 2) < mpmath.ldexp(1, -BITS + 8)


def test_cancellation_free_differences():
    m = Modulus.from_r("1e-20", BITS)
    # limits as r -> 0: (E - r'^2 K)/r^2 -> pi/4, (K - E)/r^2 -> pi/4
    with mpmath.workprec(BITS):
        assert abs(e_minus_rp2k_over_r2(m, BITS).value - mpmath.pi / 4) < mpf("1e-38")
        assert abs(k_minus_e_over_r2(m, BITS).value - mpmath.pi / 4) < mpf("1e-38")


def test_difference_values_at_half():
    m = Modulus.from_r("0.5", BITS)
    with mpmath.workprec(BITS + 32):
        k, e = oracle_k(m.r), oracle_e(m.r)
        assert close(e_minus_rp2k_over_r2(m, BITS).value, (e - (1 - m.x) * k) / m.x, BITS - 10)
        assert close(k_minus_e_over_r2(m, BITS).value, (k - e) / m.x, BITS - 10)


def test_derivatives_match_mpmath_diff():
    r = mpf("0.5")
    with mpmath.workprec(BITS + 32):
        dk = mpmath.diff(lambda t: mpmath.ellipk(t**2), r)
        de = mpmath.diff(lambda t: mpmath.ellipe(t**2), r)
    assert close(dk_dr(r, BITS).value, dk, BITS - 20)
    assert close(de_dr(r, BITS).value, de, BITS - 20)


def test_hyp_series_matches_hyp2f1():
    res = hyp_series(Fraction(1, 2), Fraction(1, 2), 1, mpf("0.25"), BITS)
    with mpmath.workprec(BITS + 32):
        ref = mpmath.hyp2f1(0.5, 0.5, 1, mpf("0.25"))
    assert close(res.value, ref, BITS - 8)
    assert res.terms_used > 0


def test_g0_g1_match_hyp2f1():
    x = mpf("0.81")
    g0, g1 = g0_g1(x, BITS)
    with mpmath.workprec(BITS + 32):
        assert close(g0.value, mpmath.hyp2f1(0.5, 0.5, 2, x), BITS - 10)
        assert close(g1.value, mpmath.hyp2f1(0.5, 1, 2.5, x), BITS - 10)


def test_agm_identity():
    with mpmath.workprec(BITS):
        assert close(agm(1, mpf("0.5"), BITS), mpmath.agm(1, mpf("0.5")), BITS - 4)


@pytest.mark.parametrize("bad", ["0", "1", "-0.5", "1.5"])
def test_invalid_modulus(bad):
    with pytest.raises(InvalidModulus):
        Modulus.from_r(bad, BITS)


def test_precision_config():
    assert as_config(None).bits >= 53
    assert PrecisionConfig(128).escalated().bits == 256


def test_approx_tracks_cancellation():
    with mpmath.workprec(100):
        a = Approx(mpf(1) + mpmath.ldexp(1, -50), 1.0)
        b = Approx(mpf(1), 1.0)
        d = a - b
        assert d.err >= mpmath.ldexp(1, -99)
        assert abs(d.v - mpmath.ldexp(1, -50)) <= d.err
