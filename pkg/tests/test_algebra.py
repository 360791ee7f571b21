import itertools
from fractions import Fraction

import pytest

from lhv import (
    QQ,
    AlgebraElement,
    GammaConfig,
    LaurentPoly,
    TruncationBox,
    bracket,
    bracket_basis,
    basis_elements,
    central_subspace,
    check_perfect,
    format_element,
    graded_decompose,
    is_central,
    quotient_mod_H,
)
from lhv.errors import BoxTooSmall, ConfigMismatch, SupportOutsideBox
from lhv.sampling import random_element, random_scalar

from conftest import make_h, make_l


def test_bracket_defining_relations(cfg):
    assert bracket(make_l(cfg, 2, 0), make_l(cfg, 1, 1)) == make_l(cfg, 3, 1)
    assert bracket(make_l(cfg, 1, 0), make_h(cfg, 1, 2)) == -make_h(cfg, 2, 2)
    assert not bracket(make_h(cfg, 5, 0), make_h(cfg, -5, 3))


def test_bracket_alternating_on_random_elements(cfg, box, rng):
    for _ in range(25):
        x = random_element(rng, cfg, box)
        assert not bracket(x, x)


def test_bracket_bilinear_and_antisymmetric(cfg, box, rng):
    for _ in range(25):
        x = random_element(rng, cfg, box)
        y = random_element(rng, cfg, box)
        z = random_element(rng, cfg, box)
        c = random_scalar(rng, cfg.field)
        assert bracket(x + y.scaled(c), z) == bracket(x, z) + bracket(y, z).scaled(c)
        assert bracket(x, y) == -bracket(y, x)


def test_bracket_basis_agrees_with_generic_bracket(cfg, box):
    elts = {idx: AlgebraElement.basis_element(cfg, *idx) for idx in box.basis()}
    for b1 in box.basis():
        for b2 in box.basis():
            res = bracket_basis(cfg, b1, b2)
            full = bracket(elts[b1], elts[b2])
            if res is None:
                assert not full
            else:
                coeff, idx = res
                assert full == AlgebraElement.basis_element(cfg, *idx).scaled(coeff)


def test_jacobi_identity_via_generic_bracket():
    cfg = GammaConfig(QQ, [1])
    box = TruncationBox([(-1, 1)], (-1, 1))
    elts = basis_elements(cfg, box)
    for x, y, z in itertools.product(elts, repeat=3):
        total = (
            bracket(bracket(x, y), z)
            + bracket(bracket(y, z), x)
            + bracket(bracket(z, x), y)
        )
        assert not total


def test_config_mismatch(cfg):
    other = GammaConfig(QQ, [2])
    with pytest.raises(ConfigMismatch):
        bracket(make_l(cfg, 1, 0), make_l(other, 1, 0))
    with pytest.raises(ConfigMismatch):
        make_l(cfg, 1, 0) + make_l(other, 1, 0)


def test_graded_decompose(cfg):
    x = make_l(cfg, 1, 0) + make_h(cfg, 1, 2) + make_l(cfg, 0, 5)
    parts = graded_decompose(x)
    assert set(parts) == {(1,), (0,)}
    assert parts[(1,)] == make_l(cfg, 1, 0) + make_h(cfg, 1, 2)
    assert parts[(0,)] == make_l(cfg, 0, 5)
    assert not graded_decompose(AlgebraElement.zero(cfg))
    assert sum(parts.values(), AlgebraElement.zero(cfg)) == x


def test_grading_eigen_equation(cfg, box, rng):
    l00 = make_l(cfg, 0, 0)
    for _ in range(20):
        x = random_element(rng, cfg, box)
        for mu, part in graded_decompose(x).items():
            assert bracket(l00, part) == part.scaled(-cfg.embed(mu))


def test_grading_compatibility_of_bracket(cfg, box):
    for b1 in box.basis():
        for b2 in box.basis():
            res = bracket_basis(cfg, b1, b2)
            if res is not None:
                _, (kind, coords, i) = res
                assert coords == tuple(a + b for a, b in zip(b1[1], b2[1]))
                assert i == b1[2] + b2[2]


def test_centrality(cfg, box):
    assert is_central(make_h(cfg, 0, 2), box)
    assert not is_central(make_l(cfg, 0, 0), box)  # moves L(1;0)
    assert not is_central(make_h(cfg, 1, 0), box)  # [L(-1;0), H(1;0)] = -H(0;0)
    assert bracket(make_l(cfg, -1, 0), make_h(cfg, 1, 0)) == -make_h(cfg, 0, 0)
    with pytest.raises(SupportOutsideBox):
        is_central(make_h(cfg, 0, 9), box)


def test_central_subspace_matches_h_zero_span(cfg, box):
    dim, vectors = central_subspace(cfg, box)
    assert dim == len(list(box.t_values()))
    for vec in vectors:
        for (kind, coords, _i), coeff in vec.items():
            assert kind == "H" and coords == (0,) and coeff


def test_h_span_is_an_ideal(cfg, box):
    for b1 in box.basis():
        for b2 in box.basis():
            if b2[0] != "H":
                continue
            res = bracket_basis(cfg, b1, b2)
            if res is not None:
                assert res[1][0] == "H"


def test_quotient_projection(cfg, box, rng):
    x = make_l(cfg, 1, 0) + make_h(cfg, 2, 3)
    assert quotient_mod_H(x) == make_l(cfg, 1, 0)
    assert not quotient_mod_H(make_h(cfg, 1, 1))
    for _ in range(25):
        a = random_element(rng, cfg, box)
        b = random_element(rng, cfg, box)
        assert quotient_mod_H(bracket(a, b)) == bracket(
            quotient_mod_H(a), quotient_mod_H(b)
        )


def test_box_validation():
    with pytest.raises(BoxTooSmall):
        TruncationBox([(2, 1)], (0, 0))
    with pytest.raises(BoxTooSmall):
        TruncationBox([(-3, 3)], (-3, 3), pad=1)
    box = TruncationBox([(-3, 3)], (-2, 2))
    assert box.pad == 3


def test_box_closure_under_bracket(cfg, box):
    for b1 in box.basis():
        for b2 in box.basis():
            res = bracket_basis(cfg, b1, b2)
            if res is not None:
                _, (kind, coords, i) = res
                assert box.contains_index(coords, i, box.pad)


def test_box_rank_validation(cfg):
    wrong = TruncationBox([(-1, 1), (-1, 1)], (-1, 1))
    with pytest.raises(ConfigMismatch):
        wrong.validate_for(cfg)


def test_check_perfect_witnesses(cfg):
    box = TruncationBox([(-3, 3)], (-3, 3))
    witnesses = {target: (scalar, left, right) for target, scalar, left, right in check_perfect(cfg, box)}
    assert len(witnesses) == box.size()
    # L(3;1) = -(1/3) [L(0;0), L(3;1)]
    scalar, left, right = witnesses[("L", (3,), 1)]
    assert (scalar, left, right) == (Fraction(-1, 3), ("L", (0,), 0), ("L", (3,), 1))
    # H(0;2) = -(1/1) [L(-1;0), H(1;2)]
    scalar, left, right = witnesses[("H", (0,), 2)]
    assert (scalar, left, right) == (Fraction(-1), ("L", (-1,), 0), ("H", (1,), 2))
    # every witness verifies against the generic bracket
    for target, (scalar, left, right) in witnesses.items():
        lhs = bracket(
            AlgebraElement.basis_element(cfg, *left),
            AlgebraElement.basis_element(cfg, *right),
        ).scaled(scalar)
        assert lhs == AlgebraElement.basis_element(cfg, *target)


def test_check_perfect_needs_nonzero_gamma(cfg):
    with pytest.raises(BoxTooSmall):
        check_perfect(cfg, TruncationBox([(0, 0)], (-1, 1)))


def test_canonical_element_printing(cfg):
    x = (
        make_h(cfg, 2, -1).scaled(Fraction(-1, 2))
        + make_l(cfg, 3, 1).scaled(Fraction(2))
        + make_h(cfg, 0, 3)
    )
    assert format_element(x) == "2*L(3;1) + H(0;3) - 1/2*H(2;-1)"
    assert format_element(AlgebraElement.zero(cfg)) == "0"


def test_scaling_and_equality(cfg):
    x = make_l(cfg, 1, 0)
    assert x.scaled(Fraction(0)) == AlgebraElement.zero(cfg)
    assert 2 * x == x + x
    with pytest.raises(TypeError):
        x * x
