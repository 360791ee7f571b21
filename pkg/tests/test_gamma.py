from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lhv import QQ, GammaConfig, Quad, QuadraticField
from lhv.errors import BackendMismatch, BoxTooSmall, NotInGamma, NotInScalingGroup, ZeroScalar
from lhv.gamma import (
    Character,
    GammaHom,
    GSymbol,
    find_scaling,
    g_table_from_symbol,
    iota_apply,
    scaling_group_contains,
    solve_g_space,
)
from lhv.laurent import LaurentPoly


SQRT2 = Quad(0, 1, 2)


def test_generator_validation():
    with pytest.raises(ValueError):
        GammaConfig(QQ, [0])
    with pytest.raises(ValueError):
        GammaConfig(QQ, [1, 2])  # dependent over Q
    field = QuadraticField(2)
    with pytest.raises(ValueError):
        GammaConfig(field, [field.one, field.coerce(3)])
    GammaConfig(field, [field.one, field.sqrt_gen()])


def test_coords_of_rank_one(cfg):
    assert cfg.coords_of(Fraction(3)) == (3,)
    assert cfg.embed((3,)) == 3
    with pytest.raises(NotInGamma):
        cfg.coords_of(Fraction(1, 2))


def test_coords_of_quadratic(qcfg, qfield):
    x = qfield.coerce(2) - SQRT2
    assert qcfg.coords_of(x) == (2, -1)
    assert qcfg.embed((2, -1)) == x
    with pytest.raises(NotInGamma):
        qcfg.coords_of(Quad(Fraction(1, 2), 0, 2))


def test_coords_of_even_lattice():
    cfg2 = GammaConfig(QQ, [2])
    assert cfg2.coords_of(Fraction(4)) == (2,)
    with pytest.raises(NotInGamma):
        cfg2.coords_of(Fraction(3))


def test_scaling_group_integers(cfg):
    assert scaling_group_contains(cfg, Fraction(-1))
    assert not scaling_group_contains(cfg, Fraction(2))
    assert not scaling_group_contains(cfg, Fraction(1, 2))
    with pytest.raises(ZeroScalar):
        scaling_group_contains(cfg, Fraction(0))


def test_scaling_group_fundamental_unit(qcfg):
    # (1+s)*1 = 1+s, (1+s)*s = 2+s, and the inverse s-1 likewise
    unit = Quad(1, 1, 2)
    assert scaling_group_contains(qcfg, unit)
    assert scaling_group_contains(qcfg, unit.inverse())
    assert unit.inverse() == Quad(-1, 1, 2)
    assert not scaling_group_contains(qcfg, SQRT2)  # norm -2, not a unit


def test_scaling_group_is_a_group(qcfg):
    members = [Quad(1, 0, 2), Quad(-1, 0, 2), Quad(1, 1, 2), Quad(-1, 1, 2)]
    for a in members:
        assert scaling_group_contains(qcfg, a.inverse())
        for b in members:
            assert scaling_group_contains(qcfg, a * b)


def test_find_scaling_rank_one():
    cfg2 = GammaConfig(QQ, [2])
    cfg3 = GammaConfig(QQ, [3])
    a = find_scaling(cfg2, cfg3)
    assert a == Fraction(2, 3)
    assert cfg2.coords_of(a * 3) == (1,)
    assert find_scaling(cfg2, cfg2) == 1


def test_find_scaling_rank_mismatch(cfg, qcfg):
    qone = GammaConfig(qcfg.field, [qcfg.field.one])
    assert find_scaling(qone, qcfg) is None
    with pytest.raises(BackendMismatch):
        find_scaling(cfg, qcfg)


def test_find_scaling_consistency_invariant():
    cfg2 = GammaConfig(QQ, [2])
    cfg3 = GammaConfig(QQ, [3])
    a = find_scaling(cfg2, cfg3)
    for g in cfg3.generators:
        cfg2.coords_of(a * g)
    inv = Fraction(1) / a
    for g in cfg2.generators:
        cfg3.coords_of(inv * g)


def test_iota_apply(cfg, qcfg):
    assert iota_apply(cfg, Fraction(-1), (3,)) == (-3,)
    assert iota_apply(cfg, Fraction(1), (3,)) == (3,)
    assert iota_apply(qcfg, Quad(1, 1, 2), (0, 1)) == (2, 1)
    with pytest.raises(NotInScalingGroup):
        iota_apply(cfg, Fraction(2), (1,))


@settings(max_examples=40, deadline=None)
@given(
    st.tuples(st.integers(-8, 8), st.integers(-8, 8)),
    st.tuples(st.integers(-8, 8), st.integers(-8, 8)),
)
def test_hom_and_character_laws(m, n):
    field = QuadraticField(2)
    qcfg = GammaConfig(field, [field.one, field.sqrt_gen()])
    hom = GammaHom((3, -2))
    total = tuple(a + b for a, b in zip(m, n))
    assert hom(total) == hom(m) + hom(n)
    chi = Character((Quad(1, 1, 2), Quad(0, 0, 2) + Fraction(3)))
    assert chi(total) == chi(m) * chi(n)


def test_character_rejects_zero_values():
    with pytest.raises(ZeroScalar):
        Character((Fraction(0),))


def test_gsymbol_relation_exact(cfg):
    sym = GSymbol(cfg, LaurentPoly({1: Fraction(2)}), LaurentPoly({0: Fraction(-1, 3)}))
    for alpha in range(-4, 5):
        for beta in range(-4, 5):
            lhs = sym((alpha + beta,)).scaled(Fraction(alpha - beta))
            rhs = sym((alpha,)).scaled(Fraction(alpha)) - sym((beta,)).scaled(Fraction(beta))
            assert lhs == rhs


def test_g_space_rank_two(cfg, box):
    basis = solve_g_space(cfg, box.gamma_values())
    assert len(basis) == 2


def test_g_space_contains_parametric_family(cfg, box):
    from lhv.linalg import LinearSystem

    gammas = box.gamma_values()
    basis = solve_g_space(cfg, gammas)
    for target in (
        {g: Fraction(1) for g in gammas},
        {g: cfg.embed(g) for g in gammas if any(g)},
    ):
        sys = LinearSystem(len(basis))
        for g in gammas:
            sys.add_equation(
                {j: basis[j].get(g, 0) for j in range(len(basis))}, target.get(g, 0)
            )
        assert sys.solve() is not None


def test_g_space_rejects_square_table(cfg):
    # alpha -> alpha^2 fails the relation at (2, 1): 1*g_3 = 9 vs 2*4 - 1*1 = 7
    g = {(a,): Fraction(a * a) for a in range(-3, 4)}
    lhs = (Fraction(2) - 1) * g[(3,)]
    rhs = Fraction(2) * g[(2,)] - Fraction(1) * g[(1,)]
    assert lhs != rhs
    # and the constant table passes the same substitution everywhere
    ones = {(a,): Fraction(1) for a in range(-3, 4)}
    for a in range(-3, 4):
        for b in range(-3, 4):
            if not -3 <= a + b <= 3:
                continue
            assert (Fraction(a) - b) * ones[(a + b,)] == Fraction(a) * ones[(a,)] - Fraction(b) * ones[(b,)]


def test_g_space_box_too_small(cfg):
    with pytest.raises(BoxTooSmall):
        solve_g_space(cfg, [(0,), (1,)])


def test_g_table_from_symbol(cfg, box):
    sym = GSymbol(cfg, LaurentPoly({0: Fraction(1)}), LaurentPoly({0: Fraction(1)}))
    table = g_table_from_symbol(sym, box.gamma_values())
    assert table[(2,)] == 3  # 1 + 2
    assert (-1,) not in table  # 1 - 1 = 0 dropped
