from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ellint.errors import InvalidParameter
from ellint.series import (
    PowerSeries,
    b_closed_form,
    order_for,
    logratio_series,
    ps_from_known,
    seq,
    seq_closed_form_check,
)
from ellint.functions import coeff_series, function_series

fractions = st.fractions(min_value=-10, max_value=10, max_denominator=50)


@settings(max_examples=50, deadline=None)
@given(st.lists(fractions, min_size=4, max_size=8), st.lists(fractions, min_size=4, max_size=8))
def test_division_inverts_multiplication(u, v):
    v[0] = Fraction(1) if v[0] == 0 else v[0]
    n = min(len(u), len(v)) - 1
    p, q = PowerSeries(tuple(u[: n + 1])), PowerSeries(tuple(v[: n + 1]))
    assert (p * q) / q == p


@settings(max_examples=30, deadline=None)
@given(st.lists(fractions, min_size=3, max_size=7))
def test_log_derivative_identity(u):
    u[0] = Fraction(1)
    p = PowerSeries(tuple(u))
    lg = p.log()
    # (log p)' * p = p'
    lhs = (lg.derivative() * p.truncate(p.order - 1)).truncate(p.order - 1)
    assert lhs == p.derivative()


def test_known_series_against_sympy():
    import sympy as sp

    x = sp.symbols("x")
    r = sp.sqrt(x)
    ref = sp.series(sp.atanh(r) / r, x, 0, 6).removeO()
    f1 = ps_from_known("F1", 5)
    assert [Fraction(str(ref.coeff(x, n))) for n in range(6)] == list(f1.coeffs)
    # 2K/pi = 2F1(1/2,1/2;1;x)
    ref0 = sp.series(sp.hyper([sp.Rational(1, 2), sp.Rational(1, 2)], [1], x), x, 0, 6).removeO()
    assert [Fraction(str(sp.nsimplify(ref0.coeff(x, n)))) for n in range(6)] == list(ps_from_known("F0", 5).coeffs)


def test_g_series_is_f_shifted():
    assert logratio_series("G", 6).coeffs[1:] == logratio_series("f", 5).coeffs
    assert logratio_series("G", 6)[0] == Fraction(3, 4)


def test_sequence_initial_values():
    assert seq("c", 0) == Fraction(3, 4)
    assert seq("c_tilde", 0) == Fraction(217875, 50475008)
    assert seq("d", 0) == Fraction(4355, 84)


def test_b_closed_form_and_mutation():
    assert seq_closed_form_check("b", 200)
    assert not seq_closed_form_check("b", 5, constant=124)
    assert all(b_closed_form(n) > 0 for n in range(50))


def test_unknown_sequence():
    with pytest.raises(InvalidParameter):
        seq("zz", 1)


def test_absolutely_monotone_coefficients_positive():
    for name in ("f13", "f14", "h2:1", "h2:3"):
        ps = coeff_series(name, 120)
        assert all(c > 0 for c in ps.coeffs), name


def test_order_for_grows_with_precision():
    assert order_for(256, 0.3) > order_for(128, 0.3)


def test_function_series_cache_is_exact():
    a = function_series("f", None, 10)
    assert a.coeffs[:2] == (Fraction(1, 320), Fraction(517, 201600))
