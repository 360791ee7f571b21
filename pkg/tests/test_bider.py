from fractions import Fraction

import pytest

from lhv import (
    AlgebraElement,
    BilinearTable,
    LinearTable,
    bracket,
    check_biderivation,
    check_commuting,
    check_post_lie,
    decompose_commuting,
    extract_inner_coefficient,
)
from lhv.errors import (
    NonCentralResidual,
    NonInnerResidual,
    NotABiderivation,
    NotCommuting,
)
from lhv.sampling import random_element, random_scalar

from conftest import make_h, make_l


def test_bracket_multiple_is_a_biderivation(cfg, box):
    table = BilinearTable.from_bracket_multiple(cfg, box, Fraction(5))
    report = check_biderivation(table, box)
    assert report.passed
    zero = BilinearTable(cfg, box, {})
    assert check_biderivation(zero, box).passed


def test_single_entry_perturbation_rejected(cfg, box):
    table = BilinearTable.from_bracket_multiple(cfg, box, Fraction(1))
    broken = table.perturbed(("L", (1,), 0), ("L", (2,), 0), make_l(cfg, 3, 0))
    report = check_biderivation(broken, box)
    assert not report.passed
    assert report.failures


def test_perturbation_violates_substitution_oracle(cfg, box):
    # direct check at the triple (L(1;0), L(2;0), L(0;0)) for the broken table
    table = BilinearTable.from_bracket_multiple(cfg, box, Fraction(1))
    broken = table.perturbed(("L", (1,), 0), ("L", (2,), 0), make_l(cfg, 3, 0))
    b1, b2, b3 = make_l(cfg, 1, 0), make_l(cfg, 2, 0), make_l(cfg, 0, 0)
    # f(b1, [b2, b3]) should equal [f(b1,b2), b3] + [b2, f(b1,b3)]
    lhs = broken.eval_elements(b1, bracket(b2, b3))
    rhs = bracket(broken.value(("L", (1,), 0), ("L", (2,), 0)), b3) + bracket(
        b2, broken.value(("L", (1,), 0), ("L", (0,), 0))
    )
    assert lhs != rhs


def test_extract_inner_coefficient(cfg, box):
    for lam in (Fraction(3), Fraction(0), Fraction(-7, 2)):
        table = BilinearTable.from_bracket_multiple(cfg, box, lam)
        assert extract_inner_coefficient(table, box) == lam


def test_extract_rejects_central_residual(cfg, box):
    table = BilinearTable.from_bracket_multiple(cfg, box, Fraction(1))
    broken = table.perturbed(
        ("L", (1,), 0), ("L", (0,), 0), make_h(cfg, 0, 0).scaled(Fraction(2))
    )
    with pytest.raises((NonInnerResidual, NotABiderivation)):
        extract_inner_coefficient(broken, box)


def test_biderivation_bracket_exchange_identity(cfg, box, rng):
    # [f(b1,b2), [b3,b4]] == [[b1,b2], f(b3,b4)] for the inner table
    table = BilinearTable.from_bracket_multiple(cfg, box, Fraction(4, 3))
    idxs = box.basis()
    for _ in range(40):
        b1, b2, b3, b4 = (rng.choice(idxs) for _ in range(4))
        e1 = AlgebraElement.basis_element(cfg, *b1)
        e2 = AlgebraElement.basis_element(cfg, *b2)
        e3 = AlgebraElement.basis_element(cfg, *b3)
        e4 = AlgebraElement.basis_element(cfg, *b4)
        lhs = bracket(table.value(b1, b2), bracket(e3, e4))
        rhs = bracket(bracket(e1, e2), table.value(b3, b4))
        assert lhs == rhs


def test_biderivation_kills_central_slots(cfg, box):
    # f(x, c) = f(c, x) = 0 for central c, via the extracted inner form
    table = BilinearTable.from_bracket_multiple(cfg, box, Fraction(2))
    central = ("H", (0,), 1)
    for idx in box.basis():
        assert not table.value(idx, central)
        assert not table.value(central, idx)


def test_commuting_pairs_give_central_values(cfg, box):
    # [b1, b2] = 0 implies the inner-form value lies in the center (here: 0)
    table = BilinearTable.from_bracket_multiple(cfg, box, Fraction(3))
    from lhv.algebra import bracket_basis

    for b1 in box.basis():
        for b2 in box.basis():
            if bracket_basis(cfg, b1, b2) is None:
                assert not table.value(b1, b2)


def test_check_commuting(cfg, box):
    ident = LinearTable.from_function(
        cfg, box, lambda idx: AlgebraElement.basis_element(cfg, *idx).scaled(Fraction(7))
    )
    assert check_commuting(ident, box).passed

    def with_central(idx):
        out = AlgebraElement.basis_element(cfg, *idx)
        if idx == ("L", (1,), 0):
            out = out + make_h(cfg, 0, 0)
        return out

    assert check_commuting(LinearTable.from_function(cfg, box, with_central), box).passed

    def broken(idx):
        if idx == ("L", (1,), 0):
            return make_l(cfg, 2, 0)
        return AlgebraElement.basis_element(cfg, *idx)

    report = check_commuting(LinearTable.from_function(cfg, box, broken), box)
    assert not report.passed
    assert report.failures


def test_decompose_commuting_round_trip(cfg, box):
    tau_img = make_h(cfg, 0, 1)
    phi = LinearTable.from_function(
        cfg,
        box,
        lambda idx: AlgebraElement.basis_element(cfg, *idx).scaled(Fraction(2)) + tau_img,
    )
    lam, tau = decompose_commuting(phi, box)
    assert lam == 2
    for idx in box.basis():
        assert tau.value(idx) == tau_img

    ident = LinearTable.from_function(
        cfg, box, lambda idx: AlgebraElement.basis_element(cfg, *idx)
    )
    lam, tau = decompose_commuting(ident, box)
    assert lam == 1
    assert not tau.values


def test_decompose_commuting_non_central_residual(cfg, box):
    phi = LinearTable.from_function(
        cfg,
        box,
        lambda idx: AlgebraElement.basis_element(cfg, *idx) + make_h(cfg, 1, 0),
    )
    with pytest.raises(NonCentralResidual):
        decompose_commuting(phi, box)


def test_decompose_commuting_random_round_trips(cfg, box, rng):
    for _ in range(10):
        lam = random_scalar(rng, cfg.field)
        tau_values = {}
        for idx in box.basis():
            if rng.random() < 0.4:
                k = rng.choice(list(box.t_values()))
                c = random_scalar(rng, cfg.field)
                v = make_h(cfg, 0, k).scaled(c)
                if v:
                    tau_values[idx] = v
        phi = LinearTable.from_function(
            cfg,
            box,
            lambda idx: AlgebraElement.basis_element(cfg, *idx).scaled(lam)
            + tau_values.get(idx, AlgebraElement.zero(cfg)),
        )
        got_lam, got_tau = decompose_commuting(phi, box)
        assert got_lam == lam
        assert got_tau.values == tau_values


def test_post_lie_zero_product_passes(cfg, box):
    report = check_post_lie(BilinearTable(cfg, box, {}), box)
    assert report.passed
    assert report.details["trivial"]


def test_post_lie_bracket_multiple_fails_commutativity(cfg, box):
    table = BilinearTable.from_bracket_multiple(cfg, box, Fraction(5))
    report = check_post_lie(table, box)
    assert not report.passed
    assert report.failures[0]["identity"] == "commutativity"


def test_post_lie_constant_product_fails_bracket_action(cfg, box):
    values = {}
    for b1 in box.basis():
        for b2 in box.basis():
            values[(b1, b2)] = make_h(cfg, 0, 0)
    table = BilinearTable(cfg, box, values)
    report = check_post_lie(table, box)
    assert not report.passed
    assert report.failures[0]["identity"] in ("bracket-action", "bracket-compat")
    # substitution oracle at (L(1;0), L(-1;0), L(0;0)): [x,y].z != x.(y.z) - y.(x.z)
    b1, b2, b3 = ("L", (1,), 0), ("L", (-1,), 0), ("L", (0,), 0)
    lhs = table.value(("L", (0,), 0), b3).scaled(Fraction(2))  # [b1,b2] = 2 L(0;0)
    rhs = table.eval_elements(
        AlgebraElement.basis_element(cfg, *b1), table.value(b2, b3)
    ) - table.eval_elements(AlgebraElement.basis_element(cfg, *b2), table.value(b1, b3))
    assert lhs != rhs
