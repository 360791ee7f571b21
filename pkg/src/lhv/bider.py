"""Bilinear tables: biderivations, commuting maps, post-Lie products.

A biderivation is a bilinear map that obeys the Leibniz identity in each
slot against the bracket; on this algebra every one is a scalar multiple
of the bracket itself, with no central correction.  Commuting linear maps
(``[f(x), x] = 0``) split as ``scalar * id`` plus a map into the center,
and the only commutative post-Lie product compatible with the bracket is
zero.  All checks sweep box basis tuples exactly, skipping (and counting)
tuples whose intermediate brackets leave the table domain.
"""

from __future__ import annotations

from .algebra import (
    AlgebraElement,
    TruncationBox,
    basis_elements,
    bracket,
    bracket_basis,
    format_basis_index,
    format_element,
    is_central,
)
from .errors import (
    NonCentralResidual,
    NonInnerResidual,
    NotABiderivation,
    NotCommuting,
    SupportOutsideBox,
)
from .gamma import GammaConfig
from .reports import Report
from .scalars import scalar_inverse


class BilinearTable:
    """Values on ordered pairs of box basis indices; bilinear extension implied."""

    def __init__(self, cfg: GammaConfig, box: TruncationBox, values: dict):
        box.validate_for(cfg)
        self.cfg = cfg
        self.box = box
        self.values = {k: v for k, v in values.items() if v}
        for (i1, i2), val in self.values.items():
            if not box.contains_index(i1[1], i1[2]) or not box.contains_index(i2[1], i2[2]):
                raise SupportOutsideBox("table key outside the box")
            if not box.padded_contains_element(val):
                raise SupportOutsideBox("table value leaves the padded box")

    @classmethod
    def from_bracket_multiple(cls, cfg, box, lam) -> BilinearTable:
        """The inner table ``(x, y) -> lam * [x, y]``."""
        values = {}
        idxs = box.basis()
        for b1 in idxs:
            for b2 in idxs:
                res = bracket_basis(cfg, b1, b2)
                if res is None:
                    continue
                coeff, idx = res
                c = coeff * lam
                if c:
                    values[(b1, b2)] = AlgebraElement.basis_element(
                        cfg, *idx
                    ).scaled(c)
        return cls(cfg, box, values)

    def value(self, b1, b2) -> AlgebraElement:
        return self.values.get((b1, b2), AlgebraElement.zero(self.cfg))

    def perturbed(self, b1, b2, delta: AlgebraElement) -> BilinearTable:
        """Copy with ``delta`` added at one ordered pair."""
        values = dict(self.values)
        values[(b1, b2)] = self.value(b1, b2) + delta
        return BilinearTable(self.cfg, self.box, values)

    def eval_elements(self, x: AlgebraElement, y: AlgebraElement):
        """Bilinear extension; None when a monomial leaves the table domain."""
        out = AlgebraElement.zero(self.cfg)
        for bx in x.support():
            if not self.box.contains_index(bx[1], bx[2]):
                return None
            cx = x.coefficient(*bx)
            for by in y.support():
                if not self.box.contains_index(by[1], by[2]):
                    return None
                cy = y.coefficient(*by)
                out = out + self.value(bx, by).scaled(cx * cy)
        return out


class LinearTable:
    """Values on single box basis indices; linear extension implied."""

    def __init__(self, cfg: GammaConfig, box: TruncationBox, values: dict):
        box.validate_for(cfg)
        self.cfg = cfg
        self.box = box
        self.values = {k: v for k, v in values.items() if v}
        for idx, val in self.values.items():
            if not box.contains_index(idx[1], idx[2]):
                raise SupportOutsideBox("table key outside the box")
            if not box.padded_contains_element(val):
                raise SupportOutsideBox("table value leaves the padded box")

    @classmethod
    def from_function(cls, cfg, box, fn) -> LinearTable:
        return cls(cfg, box, {idx: fn(idx) for idx in box.basis()})

    def value(self, idx) -> AlgebraElement:
        return self.values.get(idx, AlgebraElement.zero(self.cfg))


def _compiled_values(f: BilinearTable):
    """Flatten table values to ``(coeff, basis index)`` tuples for fast sweeps."""
    comp = {}
    for pair, val in f.values.items():
        flat = []
        for (kind, coords), poly in val.terms.items():
            for exp, c in poly.coeffs.items():
                flat.append((c, (kind, coords, exp)))
        comp[pair] = tuple(flat)
    return comp


def check_biderivation(f: BilinearTable, box: TruncationBox) -> Report:
    """Both slot-wise Leibniz identities over all ordered basis triples.

    Stops at the first failing triple; triples whose bracket leaves the
    box (so the table cannot be evaluated there) are skipped and counted.
    The sweep runs on index-level data: table values are flattened to
    ``(coeff, index)`` monomial lists and all structure-constant lookups
    are memoized, which keeps the hot loop free of element construction.
    """
    cfg = f.cfg
    idxs = box.basis()
    comp = _compiled_values(f)
    empty = ()
    bb = {}
    for b1 in idxs:
        for b2 in idxs:
            bb[(b1, b2)] = bracket_basis(cfg, b1, b2)
    in_box = set(idxs)
    memo: dict = {}
    miss = object()

    def br(u, v):
        key = (u, v)
        r = memo.get(key, miss)
        if r is miss:
            r = memo[key] = bracket_basis(cfg, u, v)
        return r

    def side(parts1, left1, parts2, left2):
        """Accumulate sum of brackets of monomial lists against basis indices."""
        acc: dict = {}
        for c, idx in parts1:
            r = br(left1, idx) if left1 is not None else None
            if r is not None:
                key = r[1]
                s = acc.get(key, 0) + c * r[0]
                if s:
                    acc[key] = s
                else:
                    acc.pop(key, None)
        for c, idx in parts2:
            r = br(idx, left2) if left2 is not None else None
            if r is not None:
                key = r[1]
                s = acc.get(key, 0) + c * r[0]
                if s:
                    acc[key] = s
                else:
                    acc.pop(key, None)
        return acc

    def as_dict(parts, scale):
        out: dict = {}
        for c, idx in parts:
            s = out.get(idx, 0) + c * scale
            if s:
                out[idx] = s
            else:
                out.pop(idx, None)
        return out

    checked = skipped = 0
    get = comp.get
    for b1 in idxs:
        for b2 in idxs:
            left = bb[(b1, b2)]
            left_ok = left is None or left[1] in in_box
            for b3 in idxs:
                # identity in the first slot: f([b1,b2], b3)
                if left_ok:
                    lhs = (
                        as_dict(get((left[1], b3), empty), left[0])
                        if left is not None
                        else {}
                    )
                    rhs = side(get((b2, b3), empty), b1, get((b1, b3), empty), b2)
                    checked += 1
                    if lhs != rhs:
                        return Report(
                            "biderivation",
                            False,
                            checked,
                            skipped,
                            [_index_failure(cfg, "first-slot", b1, b2, b3, lhs, rhs)],
                        )
                else:
                    skipped += 1
                # identity in the second slot: f(b1, [b2,b3])
                mid = bb[(b2, b3)]
                if mid is None or mid[1] in in_box:
                    lhs = (
                        as_dict(get((b1, mid[1]), empty), mid[0])
                        if mid is not None
                        else {}
                    )
                    rhs = side(get((b1, b3), empty), b2, get((b1, b2), empty), b3)
                    checked += 1
                    if lhs != rhs:
                        return Report(
                            "biderivation",
                            False,
                            checked,
                            skipped,
                            [_index_failure(cfg, "second-slot", b1, b2, b3, lhs, rhs)],
                        )
                else:
                    skipped += 1
    return Report("biderivation", True, checked, skipped)


def _index_failure(cfg, identity, b1, b2, b3, lhs: dict, rhs: dict):
    def rebuild(data):
        out = AlgebraElement.zero(cfg)
        for idx, c in data.items():
            out = out + AlgebraElement.basis_element(cfg, *idx).scaled(c)
        return out

    return _triple_failure(identity, b1, b2, b3, rebuild(lhs), rebuild(rhs))


def _triple_failure(identity, b1, b2, b3, lhs, rhs):
    return {
        "identity": identity,
        "triple": [format_basis_index(b) for b in (b1, b2, b3)],
        "lhs": format_element(lhs),
        "rhs": format_element(rhs),
    }


def extract_inner_coefficient(
    f: BilinearTable, box: TruncationBox, reference_gamma=None
):
    """The scalar ``lam`` with ``f == lam * bracket`` on every box pair.

    ``lam`` is read off the reference pair ``(L(0;0), L(g;0))`` (``g``
    defaults to the first generator) and then verified against all ordered
    box pairs; any central or non-central residual raises
    :class:`NonInnerResidual`.
    """
    cfg = f.cfg
    if not check_biderivation(f, box).passed:
        raise NotABiderivation("table fails a biderivation identity on the box")
    zero = (0,) * cfg.rank
    g = tuple(reference_gamma) if reference_gamma is not None else cfg.unit(0)
    ref = (("L", zero, 0), ("L", g, 0))
    res = bracket_basis(cfg, *ref)
    if res is None:
        # degenerate reference: fall back to the first non-commuting pair
        for b1 in box.basis():
            for b2 in box.basis():
                res = bracket_basis(cfg, b1, b2)
                if res is not None:
                    ref = (b1, b2)
                    break
            if res is not None:
                break
        if res is None:
            raise NonInnerResidual("the box has no pair with a nonzero bracket")
    coeff, idx = res
    lam = f.value(*ref).coefficient(*idx) * scalar_inverse(coeff)
    idxs = box.basis()
    for b1 in idxs:
        for b2 in idxs:
            expected = bracket_basis(cfg, b1, b2)
            got = f.value(b1, b2)
            if expected is None:
                ok = not got
            else:
                c, out_idx = expected
                ok = got == AlgebraElement.basis_element(cfg, *out_idx).scaled(c * lam)
            if not ok:
                raise NonInnerResidual(
                    f"table differs from {cfg.field.format(lam)} * bracket at "
                    f"({format_basis_index(b1)}, {format_basis_index(b2)})"
                )
    return lam


# --------------------------------------------------------------------------
# commuting linear maps
# --------------------------------------------------------------------------


def check_commuting(phi: LinearTable, box: TruncationBox) -> Report:
    """Polarized commuting identity ``[phi(b1), b2] + [phi(b2), b1] = 0``.

    Over a characteristic-zero field this pair sweep is equivalent to the
    quadratic identity ``[phi(x), x] = 0`` for all box-supported ``x``.
    """
    cfg = phi.cfg
    idxs = box.basis()
    elts = {idx: AlgebraElement.basis_element(cfg, *idx) for idx in idxs}
    checked = 0
    for i, b1 in enumerate(idxs):
        for b2 in idxs[i:]:
            total = bracket(phi.value(b1), elts[b2]) + bracket(phi.value(b2), elts[b1])
            checked += 1
            if total:
                return Report(
                    "commuting",
                    False,
                    checked,
                    failures=[
                        {
                            "pair": [format_basis_index(b1), format_basis_index(b2)],
                            "value": format_element(total),
                        }
                    ],
                )
    return Report("commuting", True, checked)


def decompose_commuting(phi: LinearTable, box: TruncationBox):
    """Split a commuting table as ``lam * id + (map into the center)``.

    ``lam`` is the self-coefficient at the first non-central basis element
    in canonical order; every remaining image must be central.  Centrality
    of the residual is validated first (:class:`NonCentralResidual`; a
    central residual makes the map commuting automatically), then the
    commuting identity itself (:class:`NotCommuting`).  Residuals outside
    the box count as non-central at this truncation scale.  Returns
    ``(lam, tau)`` with ``tau`` a :class:`LinearTable`.
    """
    cfg = phi.cfg
    reference = None
    for idx in box.basis():
        if not is_central(AlgebraElement.basis_element(cfg, *idx), box):
            reference = idx
            break
    if reference is None:
        raise NotCommuting("box has no non-central basis element")
    lam = phi.value(reference).coefficient(*reference)
    tau_values = {}
    for idx in box.basis():
        tau = phi.value(idx) - AlgebraElement.basis_element(cfg, *idx).scaled(lam)
        if tau:
            tau_values[idx] = tau
    tau_table = LinearTable(cfg, box, tau_values)
    for idx, value in tau_table.values.items():
        if not box.contains_element(value):
            raise NonCentralResidual(
                f"residual at {format_basis_index(idx)} leaves the box"
            )
        if not is_central(value, box):
            raise NonCentralResidual(
                f"residual at {format_basis_index(idx)} is not central: "
                f"{format_element(value)}"
            )
    if not check_commuting(phi, box).passed:
        raise NotCommuting("table fails the commuting identity on the box")
    return lam, tau_table


# --------------------------------------------------------------------------
# commutative post-Lie products
# --------------------------------------------------------------------------


def check_post_lie(prod: BilinearTable, box: TruncationBox) -> Report:
    """The three commutative post-Lie identities over box basis tuples.

    Checks, in order: symmetry of the product on all pairs, then
    ``[x,y].z = x.(y.z) - y.(x.z)`` and ``x.[y,z] = [x.y, z] + [y, x.z]``
    on all triples whose intermediate values stay inside the table domain
    (others are skipped and counted).  A fully passing product is also
    compared against zero; the report records whether it is trivial.
    """
    cfg = prod.cfg
    idxs = box.basis()
    elts = {idx: AlgebraElement.basis_element(cfg, *idx) for idx in idxs}
    checked = skipped = 0
    for i, b1 in enumerate(idxs):
        for b2 in idxs[i:]:
            checked += 1
            if prod.value(b1, b2) != prod.value(b2, b1):
                return Report(
                    "post-lie",
                    False,
                    checked,
                    skipped,
                    [
                        {
                            "identity": "commutativity",
                            "pair": [format_basis_index(b1), format_basis_index(b2)],
                            "lhs": format_element(prod.value(b1, b2)),
                            "rhs": format_element(prod.value(b2, b1)),
                        }
                    ],
                )
    bb = {}
    for b1 in idxs:
        for b2 in idxs:
            bb[(b1, b2)] = bracket_basis(cfg, b1, b2)
    in_box = set(idxs)
    for b1 in idxs:
        for b2 in idxs:
            br12 = bb[(b1, b2)]
            for b3 in idxs:
                # [b1,b2].b3 = b1.(b2.b3) - b2.(b1.b3)
                lhs = None
                if br12 is None:
                    lhs = AlgebraElement.zero(cfg)
                elif br12[1] in in_box:
                    lhs = prod.value(br12[1], b3).scaled(br12[0])
                r1 = prod.eval_elements(elts[b1], prod.value(b2, b3))
                r2 = prod.eval_elements(elts[b2], prod.value(b1, b3))
                if lhs is None or r1 is None or r2 is None:
                    skipped += 1
                else:
                    checked += 1
                    if lhs != r1 - r2:
                        return Report(
                            "post-lie",
                            False,
                            checked,
                            skipped,
                            [_triple_failure("bracket-action", b1, b2, b3, lhs, r1 - r2)],
                        )
                # b1.[b2,b3] = [b1.b2, b3] + [b2, b1.b3]
                br23 = bb[(b2, b3)]
                if br23 is None:
                    lhs2 = AlgebraElement.zero(cfg)
                elif br23[1] in in_box:
                    lhs2 = prod.value(b1, br23[1]).scaled(br23[0])
                else:
                    skipped += 1
                    continue
                rhs2 = bracket(prod.value(b1, b2), elts[b3]) + bracket(
                    elts[b2], prod.value(b1, b3)
                )
                checked += 1
                if lhs2 != rhs2:
                    return Report(
                        "post-lie",
                        False,
                        checked,
                        skipped,
                        [_triple_failure("bracket-compat", b1, b2, b3, lhs2, rhs2)],
                    )
    return Report(
        "post-lie",
        True,
        checked,
        skipped,
        details={"trivial": not prod.values},
    )
