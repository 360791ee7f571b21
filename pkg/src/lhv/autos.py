"""The automorphism group: parameter tuples, action, group law, extraction.

Every automorphism acts monomially on the basis,

    theta(L(a; i)) = s * b**i * chi(a) * L(a/s; psi*i + phi(a))

(and identically on ``H``), where ``s`` ranges over the scaling group of
the lattice, ``phi`` is an integer-valued additive map, ``chi`` a
character, ``psi`` a sign flipping the Laurent degree, and ``b`` a nonzero
scalar exponentiated by the degree.  Tuples ``(s, phi, chi, psi, b)``
multiply by an explicit closed-form law; composing actions equals acting
by the composed tuple, which the verification suites check exactly.

Extraction inverts a monomial-shaped table: the leading scalar comes from
the image of ``L(0;0)``, the coefficient and exponent data must satisfy
multiplicativity/additivity laws over all box index pairs, and the
re-applied parameters must reproduce the table bit for bit.
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
)
from .errors import (
    BoxTooSmall,
    InvalidParams,
    LawViolation,
    NotMonomialShape,
    RoundTripMismatch,
)
from .gamma import (
    Character,
    GammaConfig,
    GammaHom,
    apply_iota_matrix,
    find_scaling,
    iota_matrix,
    scaling_group_contains,
)
from .linalg import LinearSystem
from .reports import Report
from .scalars import scalar_inverse, scalar_pow


class AutomorphismParams:
    """The tuple ``(a, phi, chi, psi, b)`` with its group structure.

    ``a`` must lie in the scaling group (checked at construction; the
    lattice action ``coords -> coords_of(a**-1 * embed(coords))`` is
    precomputed), ``phi`` is an integer-valued :class:`GammaHom`, ``chi``
    a :class:`Character`, ``psi`` one of ``+1/-1`` and ``b`` nonzero.
    """

    __slots__ = ("cfg", "a", "phi", "chi", "psi", "b", "_inv_cols")

    def __init__(self, cfg: GammaConfig, a, phi: GammaHom, chi: Character, psi: int, b):
        a = cfg.field.coerce(a)
        b = cfg.field.coerce(b)
        if psi not in (1, -1):
            raise InvalidParams(f"psi must be +1 or -1, got {psi!r}")
        if not b:
            raise InvalidParams("b must be nonzero")
        if len(phi.gen_values) != cfg.rank or len(chi.gen_values) != cfg.rank:
            raise InvalidParams("phi and chi need one value per generator")
        if not all(isinstance(v, int) for v in phi.gen_values):
            raise InvalidParams("phi must take integer values")
        try:
            inv_cols = iota_matrix(cfg, scalar_inverse(a))
        except Exception as exc:
            raise InvalidParams(f"a={cfg.field.format(a)} is not a lattice scaling") from exc
        self.cfg = cfg
        self.a = a
        self.phi = phi
        self.chi = Character(tuple(cfg.field.coerce(v) for v in chi.gen_values))
        self.psi = psi
        self.b = b
        self._inv_cols = inv_cols

    @classmethod
    def identity(cls, cfg: GammaConfig) -> AutomorphismParams:
        return cls(
            cfg,
            cfg.field.one,
            GammaHom.zero_int(cfg.rank),
            Character.trivial(cfg.field, cfg.rank),
            1,
            cfg.field.one,
        )

    def apply_basis_index(self, kind: str, coords, i: int):
        """Image of one basis symbol as ``(scalar, basis index)``."""
        coeff = self.a * scalar_pow(self.b, i) * self.chi(coords)
        target = apply_iota_matrix(self._inv_cols, coords)
        return coeff, (kind, target, self.psi * i + self.phi(coords))

    def apply(self, x: AlgebraElement) -> AlgebraElement:
        out = AlgebraElement.zero(self.cfg)
        for (kind, coords), poly in x.terms.items():
            for exp, c in poly.coeffs.items():
                coeff, idx = self.apply_basis_index(kind, coords, exp)
                out = out + AlgebraElement.basis_element(self.cfg, *idx).scaled(coeff * c)
        return out

    def compose(self, other: AutomorphismParams) -> AutomorphismParams:
        """The tuple acting as "self after other"."""
        if self.cfg != other.cfg:
            raise InvalidParams("parameters belong to different configurations")
        cfg = self.cfg
        cols = other._inv_cols  # coordinate action of 1/other.a
        phi_vals = []
        chi_vals = []
        for s in range(cfg.rank):
            moved = apply_iota_matrix(cols, cfg.unit(s))
            phi_vals.append(self.phi(moved) + self.psi * other.phi.gen_values[s])
            chi_vals.append(
                scalar_pow(self.b, other.phi.gen_values[s])
                * other.chi.gen_values[s]
                * self.chi(moved)
            )
        return AutomorphismParams(
            cfg,
            self.a * other.a,
            GammaHom(tuple(phi_vals)),
            Character(tuple(chi_vals)),
            self.psi * other.psi,
            scalar_pow(self.b, other.psi) * other.b,
        )

    def invert(self) -> AutomorphismParams:
        """The inverse tuple, solved in closed form from the group law."""
        cfg = self.cfg
        cols = iota_matrix(cfg, self.a)
        phi_vals = []
        chi_vals = []
        for s in range(cfg.rank):
            moved = apply_iota_matrix(cols, cfg.unit(s))
            phi_vals.append(-self.psi * self.phi(moved))
            chi_vals.append(
                scalar_inverse(scalar_pow(self.b, phi_vals[-1]) * self.chi(moved))
            )
        return AutomorphismParams(
            cfg,
            scalar_inverse(self.a),
            GammaHom(tuple(phi_vals)),
            Character(tuple(chi_vals)),
            self.psi,
            scalar_pow(self.b, -self.psi),
        )

    def __eq__(self, other):
        if not isinstance(other, AutomorphismParams):
            return NotImplemented
        return (
            self.cfg == other.cfg
            and self.a == other.a
            and self.phi == other.phi
            and self.chi == other.chi
            and self.psi == other.psi
            and self.b == other.b
        )

    def __repr__(self):
        fmt = self.cfg.field.format
        return (
            f"AutomorphismParams(a={fmt(self.a)}, phi={list(self.phi.gen_values)}, "
            f"chi={[fmt(v) for v in self.chi.gen_values]}, psi={self.psi:+d}, "
            f"b={fmt(self.b)})"
        )


def apply_automorphism(p: AutomorphismParams, x: AlgebraElement) -> AlgebraElement:
    return p.apply(x)


def compose_params(p1: AutomorphismParams, p2: AutomorphismParams) -> AutomorphismParams:
    return p1.compose(p2)


def invert_params(p: AutomorphismParams) -> AutomorphismParams:
    return p.invert()


def tabulate_automorphism(p: AutomorphismParams, box: TruncationBox) -> dict:
    """Record the action on every box basis index."""
    out = {}
    for idx in box.basis():
        coeff, target = p.apply_basis_index(*idx)
        out[idx] = AlgebraElement.basis_element(p.cfg, *target).scaled(coeff)
    return out


def check_automorphism(theta: dict, cfg: GammaConfig, box: TruncationBox) -> Report:
    """Bracket preservation on box pairs plus injectivity on the box span.

    ``theta`` maps every box basis index to its image element.  Pairs
    whose bracket leaves the table domain are skipped and counted.
    """
    box.validate_for(cfg)
    idxs = box.basis()
    missing = [b for b in idxs if b not in theta]
    if missing:
        raise BoxTooSmall(f"theta is not total on the box: missing {missing[0]}")
    checked = skipped = 0
    failures = []
    for i, b1 in enumerate(idxs):
        for b2 in idxs[i + 1 :]:
            res = bracket_basis(cfg, b1, b2)
            if res is None:
                lhs = AlgebraElement.zero(cfg)
            else:
                coeff, out_idx = res
                if out_idx not in theta:
                    skipped += 1
                    continue
                lhs = theta[out_idx].scaled(coeff)
            rhs = bracket(theta[b1], theta[b2])
            checked += 1
            if lhs != rhs:
                failures.append(
                    {
                        "pair": [format_basis_index(b1), format_basis_index(b2)],
                        "lhs": format_element(lhs),
                        "rhs": format_element(rhs),
                    }
                )
                return Report("automorphism", False, checked, skipped, failures)

    injective = _injective_on_box(theta, cfg, idxs)
    if not injective:
        failures.append({"injectivity": "images are linearly dependent"})
    return Report(
        "automorphism",
        not failures,
        checked,
        skipped,
        failures,
        details={"injective": injective},
    )


def _injective_on_box(theta: dict, cfg: GammaConfig, idxs) -> bool:
    monomials = {}
    all_monomial = True
    for b in idxs:
        mono = theta[b].monomial()
        if mono is None:
            all_monomial = False
            break
        monomials[b] = mono
    if all_monomial:
        targets = [m[1] for m in monomials.values()]
        return all(m[0] for m in monomials.values()) and len(set(targets)) == len(targets)
    # general case: the images must be linearly independent
    col_of: dict = {}
    rows: dict = {}
    for j, b in enumerate(idxs):
        for comp in theta[b].support():
            coeff = theta[b].coefficient(*comp)
            if comp not in col_of:
                col_of[comp] = len(col_of)
            rows.setdefault(col_of[comp], {})[j] = coeff
    sys = LinearSystem(len(idxs))
    for row in rows.values():
        sys.add_equation(row, 0)
    return not sys.nullspace()


def extract_params(theta: dict, cfg: GammaConfig, box: TruncationBox) -> AutomorphismParams:
    """Invert a monomial-shaped automorphism table into its parameter tuple.

    Raises :class:`NotMonomialShape` when an image is not a single scaled
    basis symbol of the same kind, :class:`LawViolation` when the
    extracted coefficient/exponent data breaks the multiplicativity and
    additivity laws (or implies invalid parameters), and
    :class:`RoundTripMismatch` when re-applying the extracted tuple does
    not reproduce the table exactly.
    """
    box.validate_for(cfg)
    zero = (0,) * cfg.rank
    units = [cfg.unit(s) for s in range(cfg.rank)]
    needed = [("L", zero, 0), ("L", zero, 1)] + [("L", u, 0) for u in units]
    for idx in needed:
        if not box.contains_index(idx[1], idx[2]):
            raise BoxTooSmall(f"extraction needs {format_basis_index(idx)} in the box")

    mono = {}
    for idx in box.basis():
        if idx not in theta:
            raise BoxTooSmall(f"theta is not total on the box: missing {idx}")
        m = theta[idx].monomial()
        if m is None:
            raise NotMonomialShape(
                f"image of {format_basis_index(idx)} is not a single monomial"
            )
        coeff, target = m
        if target[0] != idx[0]:
            raise NotMonomialShape(
                f"image of {format_basis_index(idx)} changes kind"
            )
        mono[idx] = (coeff, target)

    a, a_target = mono[("L", zero, 0)]
    if a_target[1] != zero or a_target[2] != 0:
        raise LawViolation("the image of L(0...;0) must stay at index (0...;0)")
    a_inv = scalar_inverse(a)

    # the L and H images must carry identical coefficient/exponent data
    mu = {}
    eps = {}
    shift = {}
    for (kind, g, i), (coeff, target) in mono.items():
        key = (g, i)
        data = (coeff * a_inv, target[2], target[1])
        prev = mu.get(key)
        if prev is None:
            mu[key] = data[0]
            eps[key] = data[1]
            shift[key] = data[2]
        elif (mu[key], eps[key], shift[key]) != data:
            raise LawViolation(
                f"L and H images disagree at index ({g}, {i})"
            )

    # multiplicativity of mu, additivity of eps, compatibility of the shift
    keys = list(mu)
    keyset = set(keys)
    for g1, i1 in keys:
        for g2, i2 in keys:
            total = (tuple(x + y for x, y in zip(g1, g2)), i1 + i2)
            if total not in keyset:
                continue
            if mu[(g1, i1)] * mu[(g2, i2)] != mu[total]:
                raise LawViolation(f"mu fails multiplicativity at {((g1, i1), (g2, i2))}")
            if eps[(g1, i1)] + eps[(g2, i2)] != eps[total]:
                raise LawViolation(f"eps fails additivity at {((g1, i1), (g2, i2))}")

    psi = eps[(zero, 1)]
    if psi not in (1, -1):
        raise LawViolation(f"degree action eps(0, 1) = {psi} is not a sign")
    b = mu[(zero, 1)]
    phi_vals = tuple(eps[(u, 0)] for u in units)
    chi_vals = tuple(mu[(u, 0)] for u in units)
    try:
        params = AutomorphismParams(
            cfg, a, GammaHom(phi_vals), Character(chi_vals), psi, b
        )
    except InvalidParams as exc:
        raise LawViolation(str(exc)) from exc

    for idx in box.basis():
        coeff, target = params.apply_basis_index(*idx)
        if mono[idx] != (coeff, target):
            raise RoundTripMismatch(
                f"extracted parameters disagree with theta at {format_basis_index(idx)}"
            )
    return params


# --------------------------------------------------------------------------
# isomorphisms between two lattices
# --------------------------------------------------------------------------


class ScalingIsomorphism:
    """``L(a;i) -> s * L(a/s; i)`` between algebras over two lattices.

    Exists exactly when some ``s`` rescales the target lattice onto the
    source lattice; the scalar factor in front is what makes the map
    bracket-preserving.
    """

    def __init__(self, source: GammaConfig, target: GammaConfig, a):
        self.source = source
        self.target = target
        self.a = a
        self._a_inv = scalar_inverse(a)

    def apply_basis_index(self, kind, coords, i):
        image = self.target.coords_of(self._a_inv * self.source.embed(coords))
        return self.a, (kind, image, i)

    def apply(self, x: AlgebraElement) -> AlgebraElement:
        out = AlgebraElement.zero(self.target)
        for (kind, coords), poly in x.terms.items():
            coeff, (k2, image, _) = self.apply_basis_index(kind, coords, 0)
            out = out + AlgebraElement.from_term(self.target, k2, image, poly.scaled(coeff))
        return out

    def verify(self, box: TruncationBox) -> Report:
        """Bracket preservation across the two algebras on box basis pairs."""
        box.validate_for(self.source)
        idxs = box.basis()
        elts = [AlgebraElement.basis_element(self.source, *b) for b in idxs]
        images = [self.apply(e) for e in elts]
        checked = 0
        for i in range(len(idxs)):
            for j in range(i + 1, len(idxs)):
                lhs = self.apply(bracket(elts[i], elts[j]))
                rhs = bracket(images[i], images[j])
                checked += 1
                if lhs != rhs:
                    return Report(
                        "scaling-isomorphism",
                        False,
                        checked,
                        failures=[
                            {
                                "pair": [
                                    format_basis_index(idxs[i]),
                                    format_basis_index(idxs[j]),
                                ]
                            }
                        ],
                    )
        return Report("scaling-isomorphism", True, checked)

    def describe(self) -> dict:
        return {
            "a": self.source.field.format(self.a),
            "action": "L(g;i) -> a*L(g/a;i), H(g;i) -> a*H(g/a;i)",
        }


def isomorphism_by_scaling(
    cfg: GammaConfig, other: GammaConfig, box: TruncationBox | None = None
):
    """The induced isomorphism when the lattices differ by a scalar, else None.

    When a box is supplied the bracket preservation is verified on it
    before returning.
    """
    a = find_scaling(cfg, other)
    if a is None:
        return None
    iso = ScalingIsomorphism(cfg, other, a)
    if box is not None and not iso.verify(box).passed:  # pragma: no cover
        raise RoundTripMismatch("scaling isomorphism failed bracket preservation")
    return iso
