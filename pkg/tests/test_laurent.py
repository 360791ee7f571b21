from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lhv import QQ, LaurentPoly, Quad, QuadraticField, RhoOperator, format_laurent, parse_laurent
from lhv.errors import ExprSyntaxError

coeffs = st.fractions(min_value=-9, max_value=9, max_denominator=6)
polys = st.dictionaries(st.integers(-4, 4), coeffs, max_size=4).map(LaurentPoly)


def P(**terms):
    """Shorthand: P(t3=2, tm1=-1) -> 2t^3 - t^-1."""
    coeffs = {}
    for key, value in terms.items():
        exp = int(key[1:].replace("m", "-"))
        coeffs[exp] = Fraction(value)
    return LaurentPoly(coeffs)


def test_difference_of_squares():
    f = P(t1=1, tm1=1)
    g = P(t1=1, tm1=-1)
    assert f * g == P(t2=1, tm2=-1)


def test_unit_law_and_monomial_cancellation():
    f = P(t3=2, t0=-1, tm2=5)
    one = LaurentPoly.one()
    assert f * one == f
    assert P(t3=2) * LaurentPoly({-3: Fraction(1, 2)}) == one


def test_zero_is_canonical():
    assert not LaurentPoly({2: Fraction(0)})
    assert P(t1=1) - P(t1=1) == LaurentPoly.zero()
    assert (P(t1=1) - P(t1=1)).coeffs == {}


@settings(max_examples=60, deadline=None)
@given(polys, polys, polys)
def test_ring_axioms(f, g, h):
    assert (f + g) * h == f * h + g * h
    assert f * g == g * f
    assert (f * g) * h == f * (g * h)


@settings(max_examples=60, deadline=None)
@given(polys, polys)
def test_equal_values_identical_representation(f, g):
    total = f + g
    swapped = g + f
    assert total.coeffs == swapped.coeffs


def test_rho_on_powers():
    rho = RhoOperator(P(t1=1))  # t * d/dt
    assert rho.apply_power(5) == P(t5=5)
    assert rho.apply_power(0) == LaurentPoly.zero()
    rho2 = RhoOperator(P(t2=1))  # t^2 * d/dt
    assert rho2.apply_power(-1) == P(t0=-1)


@pytest.mark.parametrize("i", range(-3, 4))
@pytest.mark.parametrize("j", range(-3, 4))
def test_rho_additivity_on_powers(i, j):
    rho = RhoOperator(P(t2=3, t0=-1))
    ti = LaurentPoly({i: Fraction(1)})
    tj = LaurentPoly({j: Fraction(1)})
    assert rho.apply_power(i + j) == rho.apply_power(i) * tj + ti * rho.apply_power(j)


@settings(max_examples=40, deadline=None)
@given(polys, polys, polys)
def test_rho_is_a_derivation_of_the_ring(p, f, g):
    rho = RhoOperator(p)
    assert rho.apply(f * g) == rho.apply(f) * g + f * rho.apply(g)


@pytest.mark.parametrize(
    "text",
    ["0", "t", "-t", "2t^3 - 1/2t^-1", "t^2 - t^-2", "1/2", "7 - 3t^-4",
     "t^3 + t^2 + t + 1"],
)
def test_string_round_trip(text):
    poly = parse_laurent(text, QQ)
    assert format_laurent(poly) == text


def test_quad_coefficients_parenthesized():
    field = QuadraticField(2)
    poly = LaurentPoly({2: Quad(1, 1, 2), 0: Quad(0, -1, 2)})
    text = format_laurent(poly)
    assert text == "(1+sqrt(2))t^2 - (sqrt(2))"
    assert parse_laurent(text, field) == poly


@settings(max_examples=60, deadline=None)
@given(polys)
def test_value_round_trip(f):
    assert parse_laurent(format_laurent(f), QQ) == f


def test_parse_errors_carry_position():
    with pytest.raises(ExprSyntaxError):
        parse_laurent("", QQ)
    with pytest.raises(ExprSyntaxError):
        parse_laurent("t^", QQ)
    with pytest.raises(ExprSyntaxError):
        parse_laurent("2t 3t", QQ)
