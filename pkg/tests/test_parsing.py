from fractions import Fraction

import pytest

from lhv import AlgebraElement, format_element, parse_expression
from lhv.errors import BackendMismatch, ExprSyntaxError, NotInGamma
from lhv.sampling import random_element

from conftest import make_h, make_l


def test_bracket_expression(cfg):
    assert parse_expression("[L(2;0), L(1;1)]", cfg) == make_l(cfg, 3, 1)


def test_linear_combination(cfg):
    value = parse_expression("H(0;3) + 1/2*H(0;3)", cfg)
    assert value == make_h(cfg, 0, 3).scaled(Fraction(3, 2))


def test_syntax_error_carries_position(cfg):
    with pytest.raises(ExprSyntaxError) as err:
        parse_expression("L(1;0", cfg)
    assert err.value.position == 6  # 1-based column just past the 5-char input
    with pytest.raises(ExprSyntaxError) as err:
        parse_expression("L(1;0) + + L(2;0)", cfg)
    assert err.value.position is not None


def test_nested_and_negated(cfg):
    value = parse_expression("-2*[L(1;0), H(1;2)] - (L(0;0) - L(0;0))", cfg)
    assert value == make_h(cfg, 2, 2).scaled(Fraction(2))


def test_bracket_needs_elements(cfg):
    with pytest.raises(ExprSyntaxError):
        parse_expression("[1, L(1;0)]", cfg)


def test_product_of_elements_rejected(cfg):
    with pytest.raises(ExprSyntaxError):
        parse_expression("L(1;0) * L(2;0)", cfg)


def test_scalar_only_expression_rejected(cfg):
    with pytest.raises(ExprSyntaxError):
        parse_expression("3/4", cfg)


def test_sqrt_on_rational_backend_rejected(cfg):
    with pytest.raises(BackendMismatch):
        parse_expression("sqrt(2)*L(1;0)", cfg)


def test_wrong_coordinate_arity(cfg, qcfg):
    with pytest.raises(NotInGamma):
        parse_expression("L(1,2;0)", cfg)
    with pytest.raises(NotInGamma):
        parse_expression("L(1;0)", qcfg)


def test_quadratic_coefficients(qcfg):
    value = parse_expression("(1+sqrt(2))*L(1,0;2)", qcfg)
    from lhv import Quad

    assert value == AlgebraElement.basis_element(qcfg, "L", (1, 0), 2).scaled(
        Quad(1, 1, 2)
    )


def test_print_parse_round_trip_random(cfg, box, rng):
    for _ in range(30):
        x = random_element(rng, cfg, box)
        assert parse_expression(format_element(x), cfg) == x


def test_print_parse_round_trip_quadratic(qcfg, qbox, rng):
    for _ in range(30):
        x = random_element(rng, qcfg, qbox)
        assert parse_expression(format_element(x), qcfg) == x


def test_parse_print_fixed_points(cfg):
    for text in ("L(1;0)", "2*L(3;1) + H(0;3) - 1/2*H(2;-1)", "L(-2;-1) - H(0;0)"):
        assert format_element(parse_expression(text, cfg)) == text
