"""Elements and bracket of the loop Heisenberg-Virasoro algebra.

The algebra is spanned by symbols ``L(gamma; i)`` and ``H(gamma; i)`` with
``gamma`` a lattice element and ``i`` an integer Laurent degree, under

    [L(a;i), L(b;j)] = (a - b) L(a+b; i+j)
    [L(a;i), H(b;j)] = -b      H(a+b; i+j)
    [H(a;i), H(b;j)] = 0

where lattice elements act through their field embedding.  An
:class:`AlgebraElement` stores, per ``(kind, gamma)`` pair, the Laurent
polynomial of its t-coefficients, so ``L(a;i)`` is the pair
``("L", a) -> t**i``.

Universal statements are only ever checked over a finite
:class:`TruncationBox` of basis indices, padded so that one bracket of box
elements stays representable.
"""

from __future__ import annotations

import itertools

from .errors import BoxTooSmall, ConfigMismatch, SupportOutsideBox
from .gamma import GammaConfig, coords_add, coords_neg, coords_sub
from .laurent import LaurentPoly, format_laurent
from .linalg import LinearSystem
from .scalars import Quad, format_scalar, scalar_inverse

_KIND_ORDER = {"L": 0, "H": 1}

#: A basis index: (kind, gamma coordinates, t-degree).
BasisIndex = tuple


def basis_sort_key(idx: BasisIndex):
    kind, coords, i = idx
    return (_KIND_ORDER[kind], coords, i)


class TruncationBox:
    """Finite window of basis indices with closure padding.

    ``gamma_bounds`` is one inclusive ``(lo, hi)`` interval per lattice
    coordinate, ``t_bounds`` the interval of Laurent degrees.  ``pad``
    widens every interval symmetrically to form the closure box; it must
    absorb one bracket (sum of two box indices), which pins
    ``pad >= max(hi, -lo)`` per interval.  Omitting ``pad`` picks that
    minimal value.
    """

    def __init__(self, gamma_bounds, t_bounds, pad: int | None = None):
        gb = tuple((int(lo), int(hi)) for lo, hi in gamma_bounds)
        tb = (int(t_bounds[0]), int(t_bounds[1]))
        for lo, hi in gb + (tb,):
            if lo > hi:
                raise BoxTooSmall(f"empty interval [{lo}, {hi}]")
        need = max(max(hi, -lo, 0) for lo, hi in gb + (tb,))
        if pad is None:
            pad = need
        elif pad < need:
            raise BoxTooSmall(
                f"pad {pad} cannot absorb one bracket; need at least {need}"
            )
        self.gamma_bounds = gb
        self.t_bounds = tb
        self.pad = pad
        self._gamma_values = None
        self._basis = None

    @property
    def rank(self) -> int:
        return len(self.gamma_bounds)

    def validate_for(self, cfg: GammaConfig):
        if self.rank != cfg.rank:
            raise ConfigMismatch(
                f"box has {self.rank} gamma intervals, lattice has rank {cfg.rank}"
            )

    def gamma_values(self) -> list:
        if self._gamma_values is None:
            ranges = [range(lo, hi + 1) for lo, hi in self.gamma_bounds]
            self._gamma_values = sorted(itertools.product(*ranges))
        return self._gamma_values

    def t_values(self) -> range:
        lo, hi = self.t_bounds
        return range(lo, hi + 1)

    def basis(self) -> list[BasisIndex]:
        """All box indices in canonical order (kind, gamma lex, degree)."""
        if self._basis is None:
            self._basis = [
                (kind, g, i)
                for kind in ("L", "H")
                for g in self.gamma_values()
                for i in self.t_values()
            ]
        return self._basis

    def contains_index(self, coords, i: int, pad: int = 0) -> bool:
        for (lo, hi), n in zip(self.gamma_bounds, coords):
            if not (lo - pad <= n <= hi + pad):
                return False
        lo, hi = self.t_bounds
        return lo - pad <= i <= hi + pad

    def contains_element(self, x: AlgebraElement, pad: int = 0) -> bool:
        return all(self.contains_index(g, i, pad) for _, g, i in x.support())

    def padded_contains_element(self, x: AlgebraElement) -> bool:
        return self.contains_element(x, self.pad)

    def size(self) -> int:
        return len(self.basis())

    def to_json(self):
        return {
            "gamma_bounds": [list(b) for b in self.gamma_bounds],
            "t_bounds": list(self.t_bounds),
            "pad": self.pad,
        }

    def __eq__(self, other):
        return (
            isinstance(other, TruncationBox)
            and other.gamma_bounds == self.gamma_bounds
            and other.t_bounds == self.t_bounds
            and other.pad == self.pad
        )

    def __repr__(self):
        return (
            f"TruncationBox({list(self.gamma_bounds)!r}, "
            f"{list(self.t_bounds)!r}, pad={self.pad})"
        )


class AlgebraElement:
    """Finitely supported combination of ``L``/``H`` basis symbols."""

    __slots__ = ("cfg", "terms")

    def __init__(self, cfg: GammaConfig, terms=None):
        clean = {}
        if terms:
            for key, poly in terms.items():
                if poly:
                    clean[key] = poly
        object.__setattr__(self, "cfg", cfg)
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("AlgebraElement values are immutable")

    def __reduce__(self):
        return (AlgebraElement, (self.cfg, self.terms))

    @classmethod
    def zero(cls, cfg: GammaConfig) -> AlgebraElement:
        return cls(cfg)

    @classmethod
    def basis_element(cls, cfg: GammaConfig, kind: str, coords, i: int) -> AlgebraElement:
        coords = tuple(coords)
        cfg.embed(coords)  # validates the coordinate arity
        return cls(cfg, {(kind, coords): LaurentPoly.term(cfg.field.one, i)})

    @classmethod
    def from_term(cls, cfg: GammaConfig, kind: str, coords, poly: LaurentPoly) -> AlgebraElement:
        return cls(cfg, {(kind, tuple(coords)): poly})

    def _check_cfg(self, other: AlgebraElement):
        if self.cfg != other.cfg:
            raise ConfigMismatch("elements belong to different algebra configurations")

    def __add__(self, other):
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        self._check_cfg(other)
        out = dict(self.terms)
        for key, poly in other.terms.items():
            s = out.get(key)
            s = poly if s is None else s + poly
            if s:
                out[key] = s
            else:
                out.pop(key, None)
        return AlgebraElement(self.cfg, out)

    def __sub__(self, other):
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return self + (-other)

    def __neg__(self):
        return AlgebraElement(self.cfg, {k: -p for k, p in self.terms.items()})

    def scaled(self, scalar) -> AlgebraElement:
        if not scalar:
            return AlgebraElement(self.cfg)
        return AlgebraElement(self.cfg, {k: p.scaled(scalar) for k, p in self.terms.items()})

    def __mul__(self, scalar):
        if isinstance(scalar, AlgebraElement):
            raise TypeError("algebra elements have no associative product; use bracket()")
        return self.scaled(scalar)

    __rmul__ = __mul__

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, AlgebraElement):
            return self.cfg == other.cfg and self.terms == other.terms
        return NotImplemented

    def __hash__(self):
        return hash(frozenset((k, p) for k, p in self.terms.items()))

    def support(self):
        """Iterate basis indices ``(kind, coords, degree)`` with nonzero coefficient."""
        for (kind, coords), poly in self.terms.items():
            for exp in poly.coeffs:
                yield (kind, coords, exp)

    def coefficient(self, kind: str, coords, i: int):
        poly = self.terms.get((kind, tuple(coords)))
        return poly.coefficient(i) if poly is not None else 0

    def component(self, kind: str, coords) -> LaurentPoly:
        return self.terms.get((kind, tuple(coords)), LaurentPoly())

    def monomial(self):
        """Return ``(coeff, (kind, coords, i))`` for single-term elements, else None."""
        if len(self.terms) != 1:
            return None
        [(key, poly)] = self.terms.items()
        mono = poly.monomial()
        if mono is None:
            return None
        exp, coeff = mono
        return coeff, (key[0], key[1], exp)

    def __str__(self):
        return format_element(self)

    def __repr__(self):
        return f"<{format_element(self)}>"


def bracket(x: AlgebraElement, y: AlgebraElement) -> AlgebraElement:
    """The Lie bracket, extended bilinearly from the defining relations."""
    x._check_cfg(y)
    cfg = x.cfg
    embed = cfg.embed
    out: dict = {}
    for (k1, g1), f1 in x.terms.items():
        for (k2, g2), f2 in y.terms.items():
            if k1 == "H":
                if k2 == "H":
                    continue
                coeff = embed(g1)
                kind = "H"
            elif k2 == "H":
                coeff = -embed(g2)
                kind = "H"
            else:
                coeff = embed(g1) - embed(g2)
                kind = "L"
            if not coeff:
                continue
            key = (kind, coords_add(g1, g2))
            piece = (f1 * f2).scaled(coeff)
            s = out.get(key)
            s = piece if s is None else s + piece
            if s:
                out[key] = s
            else:
                out.pop(key, None)
    return AlgebraElement(cfg, out)


def bracket_basis(cfg: GammaConfig, b1: BasisIndex, b2: BasisIndex):
    """Bracket of two basis indices: ``(scalar, index)`` or None when zero."""
    k1, g1, i1 = b1
    k2, g2, i2 = b2
    if k1 == "H":
        if k2 == "H":
            return None
        coeff = cfg.embed(g1)
        kind = "H"
    elif k2 == "H":
        coeff = -cfg.embed(g2)
        kind = "H"
    else:
        coeff = cfg.embed(g1) - cfg.embed(g2)
        kind = "L"
    if not coeff:
        return None
    return coeff, (kind, coords_add(g1, g2), i1 + i2)


def basis_elements(cfg: GammaConfig, box: TruncationBox) -> list[AlgebraElement]:
    box.validate_for(cfg)
    return [AlgebraElement.basis_element(cfg, k, g, i) for k, g, i in box.basis()]


# --------------------------------------------------------------------------
# grading, center, quotient
# --------------------------------------------------------------------------


def graded_decompose(x: AlgebraElement) -> dict:
    """Split by lattice index; each part is an eigenvector of ad L(0;0)."""
    parts: dict = {}
    for (kind, coords), poly in x.terms.items():
        bucket = parts.setdefault(coords, {})
        bucket[(kind, coords)] = poly
    return {g: AlgebraElement(x.cfg, terms) for g, terms in parts.items()}


def is_central(x: AlgebraElement, box: TruncationBox) -> bool:
    """Whether ``x`` brackets to zero with every box basis element."""
    box.validate_for(x.cfg)
    if not box.contains_element(x):
        raise SupportOutsideBox("element leaves the box")
    for b in basis_elements(x.cfg, box):
        if bracket(x, b):
            return False
    return True


def central_subspace(cfg: GammaConfig, box: TruncationBox):
    """Exact solution space of "brackets to zero with the whole box".

    Returns ``(dimension, basis)`` where each basis vector is a
    ``{basis index: scalar}`` dict over box indices.  The expected answer
    is the span of the ``H(0; j)``, one dimension per box degree.
    """
    box.validate_for(cfg)
    idxs = box.basis()
    col_of = {b: j for j, b in enumerate(idxs)}
    rows: dict = {}
    for j, u in enumerate(idxs):
        for b in idxs:
            res = bracket_basis(cfg, u, b)
            if res is None:
                continue
            coeff, out_idx = res
            row = rows.setdefault((b, out_idx), {})
            s = row.get(j, 0) + coeff
            if s:
                row[j] = s
            else:
                row.pop(j, None)
    sys = LinearSystem(len(idxs))
    for row in rows.values():
        sys.add_equation(row, 0)
    basis = sys.nullspace()
    vectors = [
        {idxs[j]: c for j, c in vec.items() if c} for vec in basis
    ]
    return len(vectors), vectors


def quotient_mod_H(x: AlgebraElement) -> AlgebraElement:
    """Project onto the L-part; the H-span is an ideal, so this respects brackets."""
    return AlgebraElement(
        x.cfg, {key: poly for key, poly in x.terms.items() if key[0] == "L"}
    )


def check_perfect(cfg: GammaConfig, box: TruncationBox):
    """Exhibit every box basis element as an explicit bracket from the padded box.

    Returns a list of witness records ``(target, scalar, left, right)``
    with ``scalar * [left, right] == target`` verified exactly; raises
    :class:`BoxTooSmall` when no nonzero lattice value is available.
    """
    box.validate_for(cfg)
    nonzero = [g for g in box.gamma_values() if any(g)]
    if not nonzero:
        raise BoxTooSmall("perfectness witnesses need some nonzero lattice value")
    # smallest height, positive representative preferred
    gstar = min(nonzero, key=lambda g: (sum(abs(n) for n in g), tuple(-n for n in g)))
    estar = cfg.embed(gstar)
    zero = (0,) * cfg.rank
    witnesses = []
    for target in box.basis():
        kind, g, i = target
        if kind == "L":
            if any(g):
                scalar = -scalar_inverse(cfg.embed(g))
                left, right = ("L", zero, 0), ("L", g, i)
            else:
                scalar = scalar_inverse(2 * estar)
                left, right = ("L", gstar, 0), ("L", coords_neg(gstar), i)
        else:
            scalar = -scalar_inverse(estar)
            left, right = ("L", coords_sub(g, gstar), 0), ("H", gstar, i)
        for w in (left, right):
            if not box.contains_index(w[1], w[2], box.pad):
                raise BoxTooSmall(f"witness {w} falls outside the padded box")
        res = bracket_basis(cfg, left, right)
        if res is None:
            raise BoxTooSmall(f"degenerate witness bracket for {target}")
        coeff, idx = res
        if idx != target or scalar * coeff != cfg.field.one:
            raise BoxTooSmall(f"witness for {target} failed verification")
        witnesses.append((target, scalar, left, right))
    return witnesses


# --------------------------------------------------------------------------
# text form
# --------------------------------------------------------------------------


def format_basis_index(idx: BasisIndex) -> str:
    kind, coords, i = idx
    return f"{kind}({','.join(str(n) for n in coords)};{i})"


def format_element(x: AlgebraElement) -> str:
    """Canonical expression string, e.g. ``2*L(3;1) + H(0;3) - 1/2*H(2;-1)``."""
    entries = []
    for (kind, coords), poly in x.terms.items():
        for exp in sorted(poly.coeffs):
            entries.append(((_KIND_ORDER[kind], coords, exp), kind, coords, exp, poly.coeffs[exp]))
    if not entries:
        return "0"
    entries.sort(key=lambda e: e[0])
    pieces = []
    for _, kind, coords, exp, coeff in entries:
        if isinstance(coeff, Quad) and coeff.y != 0:
            neg = coeff.x < 0 if coeff.x != 0 else coeff.y < 0
            mag = -coeff if neg else coeff
            text = f"({format_scalar(mag)})*"
        else:
            if isinstance(coeff, Quad):
                coeff = coeff.x
            neg = coeff < 0
            mag = -coeff if neg else coeff
            text = "" if mag == 1 else f"{format_scalar(mag)}*"
        body = f"{text}{format_basis_index((kind, coords, exp))}"
        if not pieces:
            pieces.append(f"-{body}" if neg else body)
        else:
            pieces.append(f" - {body}" if neg else f" + {body}")
    return "".join(pieces)
