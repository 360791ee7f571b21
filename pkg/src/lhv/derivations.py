"""Derivations: the four degree-zero families, inner derivations, tables.

A derivation is a linear map satisfying the Leibniz identity
``D([x,y]) = [D(x),y] + [x,D(y)]``.  Four analytic families act
diagonally on the lattice grading:

* :class:`ScalingDerivation` -- multiplies both kinds by an additive
  Laurent-valued map of the lattice index.
* :class:`LToHDerivation` -- sends each ``L`` symbol to a multiple of the
  matching ``H`` symbol (the multiplier is an affine :class:`GSymbol`)
  and kills ``H``.
* :class:`HScalingDerivation` -- multiplies only ``H`` symbols by a fixed
  Laurent polynomial.
* :class:`CoefficientDerivation` -- applies a derivation ``p(t) d/dt`` of
  the coefficient ring to every t-coefficient.

:class:`InnerDerivation` is ``ad(x) = [x, -]``, and
:class:`TableDerivation` is a raw basis-indexed value table over a box.
Every degree-zero derivation table over a large enough box decomposes
exactly into the four families (:func:`decompose_degree_zero`), with the
one documented overlap ``ad(L(0;k)) == ScalingDerivation`` with generator
values ``-generator * t**k``.
"""

from __future__ import annotations

from dataclasses import dataclass

from .algebra import (
    AlgebraElement,
    TruncationBox,
    basis_elements,
    bracket,
    bracket_basis,
    format_basis_index,
    format_element,
)
from .errors import (
    BoxTooSmall,
    DisagreementAfterWitness,
    NonZeroResidual,
    NotADerivation,
    NotDegreeZero,
    SupportOutsideBox,
    ZeroDegree,
)
from .gamma import GammaConfig, GammaHom, GSymbol, coords_sub
from .laurent import LaurentPoly, RhoOperator
from .linalg import LinearSystem
from .reports import Report
from .scalars import scalar_inverse


class Derivation:
    """Base class: linear maps given by their action on basis symbols."""

    cfg: GammaConfig

    def apply_basis(self, kind: str, coords, i: int) -> AlgebraElement:
        raise NotImplementedError

    def defined_on(self, kind: str, coords, i: int) -> bool:
        return True

    def apply(self, x: AlgebraElement) -> AlgebraElement:
        out = AlgebraElement.zero(self.cfg)
        for (kind, coords), poly in x.terms.items():
            for exp, c in poly.coeffs.items():
                if not self.defined_on(kind, coords, exp):
                    raise SupportOutsideBox(
                        f"{format_basis_index((kind, coords, exp))} outside the table domain"
                    )
                out = out + self.apply_basis(kind, coords, exp).scaled(c)
        return out

    def scaled(self, scalar) -> "Derivation":
        raise NotImplementedError


class InnerDerivation(Derivation):
    """``ad(x)``: brackets the fixed element on the left."""

    def __init__(self, x: AlgebraElement):
        self.cfg = x.cfg
        self.x = x

    def apply_basis(self, kind, coords, i):
        return bracket(self.x, AlgebraElement.basis_element(self.cfg, kind, coords, i))

    def apply(self, y):
        return bracket(self.x, y)

    def scaled(self, scalar):
        return InnerDerivation(self.x.scaled(scalar))

    def __repr__(self):
        return f"InnerDerivation({format_element(self.x)})"


class ScalingDerivation(Derivation):
    """Multiplies every basis symbol by ``hom(lattice index)``."""

    def __init__(self, cfg: GammaConfig, hom: GammaHom):
        self.cfg = cfg
        self.hom = hom

    def apply_basis(self, kind, coords, i):
        poly = self.hom(coords)
        return AlgebraElement.from_term(self.cfg, kind, coords, poly.shifted(i))

    def scaled(self, scalar):
        return ScalingDerivation(self.cfg, self.hom.scaled(scalar))

    def __repr__(self):
        return f"ScalingDerivation({self.hom!r})"


class LToHDerivation(Derivation):
    """Sends ``L(a;i)`` to ``g(a) * H(a;i)`` and kills every ``H`` symbol."""

    def __init__(self, sym: GSymbol):
        self.cfg = sym.cfg
        self.sym = sym

    def apply_basis(self, kind, coords, i):
        if kind == "H":
            return AlgebraElement.zero(self.cfg)
        poly = self.sym(coords)
        return AlgebraElement.from_term(self.cfg, "H", coords, poly.shifted(i))

    def scaled(self, scalar):
        return LToHDerivation(self.sym.scaled(scalar))

    def __repr__(self):
        return f"LToHDerivation({self.sym!r})"


class HScalingDerivation(Derivation):
    """Multiplies ``H`` symbols by a fixed Laurent polynomial, kills ``L``."""

    def __init__(self, cfg: GammaConfig, poly: LaurentPoly):
        self.cfg = cfg
        self.poly = poly

    def apply_basis(self, kind, coords, i):
        if kind == "L":
            return AlgebraElement.zero(self.cfg)
        return AlgebraElement.from_term(self.cfg, "H", coords, self.poly.shifted(i))

    def scaled(self, scalar):
        return HScalingDerivation(self.cfg, self.poly.scaled(scalar))

    def __repr__(self):
        return f"HScalingDerivation({self.poly!r})"


class CoefficientDerivation(Derivation):
    """Extends a derivation ``p(t) d/dt`` of the coefficient ring."""

    def __init__(self, cfg: GammaConfig, rho: RhoOperator):
        self.cfg = cfg
        self.rho = rho

    def apply_basis(self, kind, coords, i):
        return AlgebraElement.from_term(self.cfg, kind, coords, self.rho.apply_power(i))

    def apply(self, x):
        terms = {key: self.rho.apply(poly) for key, poly in x.terms.items()}
        return AlgebraElement(self.cfg, terms)

    def scaled(self, scalar):
        return CoefficientDerivation(self.cfg, self.rho.scaled(scalar))

    def __repr__(self):
        return f"CoefficientDerivation({self.rho!r})"


class SumDerivation(Derivation):
    def __init__(self, cfg: GammaConfig, parts):
        self.cfg = cfg
        self.parts = list(parts)

    def apply_basis(self, kind, coords, i):
        out = AlgebraElement.zero(self.cfg)
        for part in self.parts:
            out = out + part.apply_basis(kind, coords, i)
        return out

    def apply(self, x):
        out = AlgebraElement.zero(self.cfg)
        for part in self.parts:
            out = out + part.apply(x)
        return out

    def defined_on(self, kind, coords, i):
        return all(p.defined_on(kind, coords, i) for p in self.parts)

    def scaled(self, scalar):
        return SumDerivation(self.cfg, [p.scaled(scalar) for p in self.parts])

    def __repr__(self):
        return f"SumDerivation({self.parts!r})"


class TableDerivation(Derivation):
    """Raw basis-to-value table over a box; missing entries are zero."""

    def __init__(self, cfg: GammaConfig, box: TruncationBox, values: dict):
        box.validate_for(cfg)
        self.cfg = cfg
        self.box = box
        self.values = {k: v for k, v in values.items() if v}
        for idx, val in self.values.items():
            if not box.contains_index(idx[1], idx[2]):
                raise SupportOutsideBox(f"table key {format_basis_index(idx)} outside the box")
            if not box.padded_contains_element(val):
                raise SupportOutsideBox(
                    f"table value at {format_basis_index(idx)} leaves the padded box"
                )

    def defined_on(self, kind, coords, i):
        return self.box.contains_index(coords, i)

    def apply_basis(self, kind, coords, i):
        if not self.box.contains_index(coords, i):
            raise SupportOutsideBox(
                f"{format_basis_index((kind, coords, i))} outside the table domain"
            )
        return self.values.get((kind, tuple(coords), i), AlgebraElement.zero(self.cfg))

    def scaled(self, scalar):
        return TableDerivation(
            self.cfg, self.box, {k: v.scaled(scalar) for k, v in self.values.items()}
        )

    def __repr__(self):
        return f"TableDerivation(<{len(self.values)} entries>)"


def tabulate(D: Derivation, box: TruncationBox) -> TableDerivation:
    """Record a derivation's action on every box basis element."""
    values = {}
    for idx in box.basis():
        img = D.apply_basis(*idx)
        if img:
            values[idx] = img
    return TableDerivation(D.cfg, box, values)


def apply_derivation(D: Derivation, x: AlgebraElement) -> AlgebraElement:
    return D.apply(x)


def scaling_hom_for_inner_l0(cfg: GammaConfig, k: int) -> GammaHom:
    """The documented overlap: ``ad(L(0;k))`` acts as a scaling derivation.

    Its generator values are ``-generator * t**k``; asserting the overlap
    keeps the family sum honest about not being direct against ad.
    """
    return GammaHom(tuple(LaurentPoly.term(-g, k) for g in cfg.generators))


# --------------------------------------------------------------------------
# checking and decomposition
# --------------------------------------------------------------------------


def check_derivation(D: Derivation, box: TruncationBox) -> Report:
    """Verify the Leibniz identity on all box basis pairs, exactly.

    Pairs whose bracket leaves a table's domain are skipped and counted;
    analytic families are checked everywhere.
    """
    cfg = D.cfg
    box.validate_for(cfg)
    idxs = box.basis()
    elts = basis_elements(cfg, box)
    images = [D.apply_basis(*idx) for idx in idxs]
    checked = skipped = 0
    failures = []
    for i in range(len(idxs)):
        for j in range(i + 1, len(idxs)):
            res = bracket_basis(cfg, idxs[i], idxs[j])
            if res is None:
                lhs = AlgebraElement.zero(cfg)
            else:
                coeff, out_idx = res
                if not D.defined_on(*out_idx):
                    skipped += 1
                    continue
                lhs = D.apply_basis(*out_idx).scaled(coeff)
            rhs = bracket(images[i], elts[j]) + bracket(elts[i], images[j])
            checked += 1
            if lhs != rhs:
                failures.append(
                    {
                        "pair": [format_basis_index(idxs[i]), format_basis_index(idxs[j])],
                        "lhs": format_element(lhs),
                        "rhs": format_element(rhs),
                    }
                )
                return Report("leibniz", False, checked, skipped, failures)
    return Report("leibniz", True, checked, skipped)


def degree_of(D: Derivation, box: TruncationBox):
    """The common grade shift of all basis images, or None when mixed.

    A derivation with zero image everywhere reports degree zero.
    """
    cfg = D.cfg
    box.validate_for(cfg)
    shift = None
    for kind, g, i in box.basis():
        img = D.apply_basis(kind, g, i)
        for (k2, g2), poly in img.terms.items():
            if not poly:
                continue
            s = coords_sub(g2, g)
            if shift is None:
                shift = s
            elif shift != s:
                return None
    return shift if shift is not None else (0,) * cfg.rank


def homogeneous_parts(D: TableDerivation, box: TruncationBox, check: bool = True) -> dict:
    """Split a table by grade shift; the parts sum back to the table.

    When ``check`` is set and the table satisfies Leibniz on the box, each
    part is verified to satisfy it too (grade projection of an exact
    identity, so a failure means corrupted input).
    """
    cfg = D.cfg
    parts: dict = {}
    for idx in box.basis():
        img = D.apply_basis(*idx)
        if not img:
            continue
        kind, g, i = idx
        for (k2, g2), poly in img.terms.items():
            shift = coords_sub(g2, g)
            table = parts.setdefault(shift, {})
            prev = table.get(idx)
            piece = AlgebraElement.from_term(cfg, k2, g2, poly)
            table[idx] = piece if prev is None else prev + piece
    result = {
        shift: TableDerivation(cfg, box, values) for shift, values in parts.items()
    }
    if check and check_derivation(D, box).passed:
        for shift, part in result.items():
            if not check_derivation(part, box).passed:
                raise NotADerivation(
                    f"homogeneous part at shift {shift} fails the Leibniz identity"
                )
    return result


def inner_witness_nonzero_degree(
    D: TableDerivation, gamma, box: TruncationBox
) -> AlgebraElement:
    """Witness ``w`` with ``ad(w)`` equal to a nonzero-degree table on the box.

    ``w`` is the image of ``L(0;0)`` scaled by the inverse embedded degree;
    the reconstruction is verified on every box basis element.
    """
    cfg = D.cfg
    gamma = tuple(gamma)
    if not any(gamma):
        raise ZeroDegree("the witness construction needs a nonzero degree")
    if not check_derivation(D, box).passed:
        raise NotADerivation("table fails the Leibniz identity on the box")
    zero = (0,) * cfg.rank
    if not box.contains_index(zero, 0):
        raise BoxTooSmall("box must contain the index (0...; 0)")
    w = D.apply_basis("L", zero, 0).scaled(scalar_inverse(cfg.embed(gamma)))
    for idx in box.basis():
        expected = D.apply_basis(*idx)
        got = bracket(w, AlgebraElement.basis_element(cfg, *idx))
        if got != expected:
            raise DisagreementAfterWitness(
                f"ad(witness) disagrees with the table at {format_basis_index(idx)}"
            )
    return w


@dataclass
class DecompositionResult:
    """The four family parameters recovered from a degree-zero table."""

    hom: GammaHom
    sym: GSymbol
    h_scale: LaurentPoly
    rho: RhoOperator
    residual: dict

    def to_derivation(self, cfg: GammaConfig) -> SumDerivation:
        return SumDerivation(
            cfg,
            [
                ScalingDerivation(cfg, self.hom),
                LToHDerivation(self.sym),
                HScalingDerivation(cfg, self.h_scale),
                CoefficientDerivation(cfg, self.rho),
            ],
        )


def decompose_degree_zero(D: TableDerivation, box: TruncationBox) -> DecompositionResult:
    """Recover the four family parameters from a degree-zero derivation table.

    Extraction order is fixed: the coefficient-ring part from the image of
    ``L(0;1)``, then the scaling map from the L-diagonal at degree 0, the
    affine L-to-H symbol from the H-components of L-images, and the
    H-scaling polynomial from the image of ``H(0;0)``.  The reconstruction
    must match the table on every box index; otherwise
    :class:`NonZeroResidual` carries the mismatch table.
    """
    cfg = D.cfg
    box.validate_for(cfg)
    deg = degree_of(D, box)
    if deg is None or any(deg):
        raise NotDegreeZero(f"table has degree {deg!r}")
    if not check_derivation(D, box).passed:
        raise NotADerivation("table fails the Leibniz identity on the box")

    zero = (0,) * cfg.rank
    units = [cfg.unit(s) for s in range(cfg.rank)]
    required = [("L", zero, 1), ("H", zero, 0)] + [("L", u, 0) for u in units]
    for idx in required:
        if not box.contains_index(idx[1], idx[2]):
            raise BoxTooSmall(f"decomposition needs {format_basis_index(idx)} in the box")

    rho = RhoOperator(D.apply_basis("L", zero, 1).component("L", zero))
    coeff_part = CoefficientDerivation(cfg, rho)

    def reduced(kind, coords, i):
        return D.apply_basis(kind, coords, i) - coeff_part.apply_basis(kind, coords, i)

    hom = GammaHom(tuple(reduced("L", u, 0).component("L", u) for u in units))

    g_values = {g: reduced("L", g, 0).component("H", g) for g in box.gamma_values()}
    c = g_values[zero]
    d = LaurentPoly()
    for g in box.gamma_values():
        if any(g):
            d = (g_values[g] - c).scaled(scalar_inverse(cfg.embed(g)))
            break
    sym = GSymbol(cfg, c, d)

    h_scale = reduced("H", zero, 0).component("H", zero)

    recon = SumDerivation(
        cfg,
        [
            ScalingDerivation(cfg, hom),
            LToHDerivation(sym),
            HScalingDerivation(cfg, h_scale),
            coeff_part,
        ],
    )
    residual = {}
    for idx in box.basis():
        diff = D.apply_basis(*idx) - recon.apply_basis(*idx)
        if diff:
            residual[idx] = diff
    if residual:
        raise NonZeroResidual(
            "table is not in the four-family span over this box", residual=residual
        )
    return DecompositionResult(hom, sym, h_scale, rho, residual)


def direct_sum_check(cfg: GammaConfig, box: TruncationBox, window=None) -> Report:
    """Only the zero parameter tuple gives the zero derivation on the box.

    Sets up the homogeneous linear system in all family parameters
    (Laurent coefficients restricted to ``window``, default the box degree
    range) and reports the kernel; a degenerate box is flagged with the
    parameter groups its kernel leaves unconstrained.
    """
    box.validate_for(cfg)
    window = list(window) if window is not None else list(box.t_values())
    cols: list = []
    col_of: dict = {}

    def col(key):
        if key not in col_of:
            col_of[key] = len(cols)
            cols.append(key)
        return col_of[key]

    for s in range(cfg.rank):
        for m in window:
            col(("phi", s, m))
    for m in window:
        col(("g.c", m))
    for m in window:
        col(("g.d", m))
    for m in window:
        col(("b", m))
    for m in window:
        col(("rho", m))

    sys = LinearSystem(len(cols))
    for kind, g, i in box.basis():
        by_outdeg_L: dict = {}
        by_outdeg_H: dict = {}
        for m in window:
            if kind == "L":
                for s in range(cfg.rank):
                    if g[s]:
                        row = by_outdeg_L.setdefault(m + i, {})
                        row[col(("phi", s, m))] = g[s]
                if i:
                    row = by_outdeg_L.setdefault(m + i - 1, {})
                    row[col(("rho", m))] = i
                row = by_outdeg_H.setdefault(m + i, {})
                row[col(("g.c", m))] = cfg.field.one
                e = cfg.embed(g)
                if e:
                    row[col(("g.d", m))] = e
            else:
                row = by_outdeg_H.setdefault(m + i, {})
                for s in range(cfg.rank):
                    if g[s]:
                        row[col(("phi", s, m))] = g[s]
                row[col(("b", m))] = cfg.field.one
                if i:
                    row2 = by_outdeg_H.setdefault(m + i - 1, {})
                    row2[col(("rho", m))] = i
        for row in by_outdeg_L.values():
            sys.add_equation(row, 0)
        for row in by_outdeg_H.values():
            sys.add_equation(row, 0)

    kernel = sys.nullspace()
    groups = set()
    for vec in kernel:
        for j in vec:
            key = cols[j]
            groups.add(f"phi[{key[1]}]" if key[0] == "phi" else key[0])
    return Report(
        "direct-sum",
        passed=not kernel,
        checked=len(cols),
        details={
            "kernel_dimension": len(kernel),
            "underconstrained": sorted(groups),
        },
    )
