"""The grading group: a finitely generated lattice embedded in the field.

``Gamma`` is realized as ``Z^k`` embedded into the scalar backend by a
tuple of Q-linearly independent generators; every group element is a
coordinate vector (a plain tuple of ints) and ``embed`` turns it into the
field scalar that the bracket coefficients use.  On the rational backend
independence forces rank 1; on ``Q(sqrt(d))`` ranks 1 and 2 are possible,
and rank 2 is what makes the scaling group ``A = {a : a*Gamma = Gamma}``
bigger than ``{1, -1}``.

Also here: additive maps out of the lattice (:class:`GammaHom`),
multiplicative characters (:class:`Character`), the affine symbols
``g_alpha = c + d*embed(alpha)`` satisfying
``(alpha-beta) g_{alpha+beta} = alpha g_alpha - beta g_beta``
(:class:`GSymbol`), and the solver that certifies those symbols exhaust
the solution space of that functional equation over a finite box.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import BackendMismatch, BoxTooSmall, NotInGamma, NotInScalingGroup, ZeroScalar
from .laurent import LaurentPoly
from .linalg import LinearSystem
from .scalars import scalar_inverse, scalar_pow

#: Group elements are plain coordinate tuples.
GammaElement = tuple


def coords_add(a: GammaElement, b: GammaElement) -> GammaElement:
    return tuple(x + y for x, y in zip(a, b))

def coords_sub(a: GammaElement, b: GammaElement) -> GammaElement:
    return tuple(x - y for x, y in zip(a, b))

def coords_neg(a: GammaElement) -> GammaElement:
    return tuple(-x for x in a)


class GammaConfig:
    """Generators of the lattice and the induced embedding into the field.

    The generators must be linearly independent over Q; this is checked at
    construction and is what makes ``coords_of`` well defined.
    """

    def __init__(self, field, generators):
        gens = tuple(field.coerce(g) for g in generators)
        if not gens:
            raise ValueError("at least one generator is required")
        comps = [field.components(g) for g in gens]
        dim = len(comps[0])
        if len(gens) > dim:
            raise ValueError(
                f"{len(gens)} generators cannot be Q-independent in a "
                f"{dim}-dimensional backend"
            )
        if not _full_column_rank(comps):
            raise ValueError("generators are linearly dependent over Q")
        self.field = field
        self.generators = gens
        self.rank = len(gens)
        self._gen_comps = comps
        self._embed_cache: dict = {}

    def zero(self) -> GammaElement:
        return (0,) * self.rank

    def unit(self, s: int = 0) -> GammaElement:
        """Coordinate vector of the ``s``-th generator."""
        e = [0] * self.rank
        e[s] = 1
        return tuple(e)

    def embed(self, coords: GammaElement):
        """The field scalar ``sum(n_s * generator_s)``."""
        cached = self._embed_cache.get(coords)
        if cached is None:
            if len(coords) != self.rank:
                raise NotInGamma(f"expected {self.rank} coordinates, got {len(coords)}")
            value = self.field.zero
            for n, g in zip(coords, self.generators):
                if n:
                    value = value + n * g
            cached = self._embed_cache[coords] = value
        return cached

    def coords_of(self, x) -> GammaElement:
        """Invert the embedding; raises :class:`NotInGamma` when impossible."""
        target = self.field.components(x)
        sol = _solve_rational(self._gen_comps, target)
        if sol is None:
            raise NotInGamma(f"{x} is not in the generator lattice")
        coords = []
        for v in sol:
            if v.denominator != 1:
                raise NotInGamma(f"{x} needs non-integer coordinate {v}")
            coords.append(v.numerator)
        return tuple(coords)

    def contains(self, x) -> bool:
        try:
            self.coords_of(x)
            return True
        except NotInGamma:
            return False

    def __eq__(self, other):
        return (
            isinstance(other, GammaConfig)
            and other.field == self.field
            and other.generators == self.generators
        )

    def __hash__(self):
        return hash((self.field, self.generators))

    def __repr__(self):
        gens = ", ".join(self.field.format(g) for g in self.generators)
        return f"GammaConfig({self.field!r}, [{gens}])"


def _full_column_rank(columns) -> bool:
    """Rank check for a small list of component tuples over Q."""
    k = len(columns)
    if k == 1:
        return any(columns[0])
    if k == 2:
        (a, b), (c, d) = columns[0], columns[1]
        return a * d - b * c != 0
    sys = LinearSystem(k)
    for r in range(len(columns[0])):
        sys.add_equation({j: columns[j][r] for j in range(k)}, 0)
    return sys.rank() == k


def _solve_rational(columns, target):
    """Solve ``sum_j n_j * columns[j] = target`` over Q; None if inconsistent."""
    k = len(columns)
    sys = LinearSystem(k)
    for r in range(len(target)):
        sys.add_equation({j: columns[j][r] for j in range(k)}, target[r])
    sol = sys.solve()
    if sol is None:
        return None
    return [Fraction(sol.get(j, 0)) for j in range(k)]


# --------------------------------------------------------------------------
# scaling group
# --------------------------------------------------------------------------


def scaling_group_contains(cfg: GammaConfig, a) -> bool:
    """Whether multiplication by ``a`` maps the lattice bijectively onto itself.

    Decided exactly: ``a*g`` and ``g/a`` must land back in the lattice for
    every generator ``g``.
    """
    a = cfg.field.coerce(a)
    if not a:
        raise ZeroScalar("scaling by zero is never bijective")
    a_inv = scalar_inverse(a)
    return all(cfg.contains(a * g) for g in cfg.generators) and all(
        cfg.contains(a_inv * g) for g in cfg.generators
    )


def iota_matrix(cfg: GammaConfig, a):
    """Columns of the coordinate action of multiplication by ``a``.

    ``columns[s]`` is ``coords_of(a * generator_s)``; raises
    :class:`NotInScalingGroup` when ``a`` is not in the scaling group.
    """
    if not scaling_group_contains(cfg, a):
        raise NotInScalingGroup(f"{cfg.field.format(a)} does not preserve the lattice")
    a = cfg.field.coerce(a)
    return tuple(cfg.coords_of(a * g) for g in cfg.generators)


def iota_apply(cfg: GammaConfig, a, coords: GammaElement) -> GammaElement:
    """``coords_of(a * embed(coords))`` for ``a`` in the scaling group."""
    cols = iota_matrix(cfg, a)
    return apply_iota_matrix(cols, coords)


def apply_iota_matrix(cols, coords: GammaElement) -> GammaElement:
    rank = len(cols[0])
    return tuple(
        sum(cols[s][r] * coords[s] for s in range(len(cols))) for r in range(rank)
    )


def find_scaling(cfg: GammaConfig, other: GammaConfig, search_bound: int = 8):
    """Some ``a`` with ``a * other-lattice == this lattice``, or None.

    Any returned value is verified exactly on the generators, and the sign
    is normalized so the first nonzero rational component is positive
    (``-a`` works whenever ``a`` does).  For rank-one lattices the search
    is complete; for rank two it enumerates candidates
    ``(n . generators) / other-generator`` with ``|n| <= search_bound`` in
    order of increasing coefficient height (so the smallest valid scaling
    wins), which covers bounded heights but is not exhaustive: whenever
    the scaling group is infinite, so is the set of valid scalings.
    """
    if cfg.field != other.field:
        raise BackendMismatch("lattices live over different backends")
    if cfg.rank != other.rank:
        return None

    def is_scaling(a) -> bool:
        if not a:
            return False
        a_inv = scalar_inverse(a)
        return all(cfg.contains(a * g) for g in other.generators) and all(
            other.contains(a_inv * g) for g in cfg.generators
        )

    def canonical_sign(a):
        for comp in cfg.field.components(a):
            if comp > 0:
                return a
            if comp < 0:
                return -a
        return a

    if cfg.rank == 1:
        a = cfg.generators[0] * scalar_inverse(other.generators[0])
        if is_scaling(a):
            return canonical_sign(a)
        return None

    span = range(-search_bound, search_bound + 1)
    weights = sorted(
        (
            (n0, n1)
            for n0 in span
            for n1 in span
            if n0 or n1
        ),
        key=lambda n: (abs(n[0]) + abs(n[1]), n),
    )
    for n0, n1 in weights:
        w = n0 * cfg.generators[0] + n1 * cfg.generators[1]
        for g_other in other.generators:
            a = w * scalar_inverse(g_other)
            if is_scaling(a):
                return canonical_sign(a)
    return None


# --------------------------------------------------------------------------
# maps out of the lattice
# --------------------------------------------------------------------------


class GammaHom:
    """Additive map determined by its values on the generators.

    Values may be integers (index shifts for automorphisms) or Laurent
    polynomials (coefficient scalings for derivations); evaluation is the
    coordinate-weighted sum either way.
    """

    __slots__ = ("gen_values",)

    def __init__(self, gen_values):
        object.__setattr__(self, "gen_values", tuple(gen_values))

    def __setattr__(self, name, value):
        raise AttributeError("GammaHom values are immutable")

    def __reduce__(self):
        return (GammaHom, (self.gen_values,))

    def __call__(self, coords: GammaElement):
        values = self.gen_values
        out = None
        for n, v in zip(coords, values):
            piece = n * v
            out = piece if out is None else out + piece
        return out

    def is_zero(self) -> bool:
        return not any(self.gen_values)

    def scaled(self, scalar) -> GammaHom:
        return GammaHom(tuple(v * scalar for v in self.gen_values))

    def __eq__(self, other):
        if isinstance(other, GammaHom):
            return self.gen_values == other.gen_values
        return NotImplemented

    def __hash__(self):
        return hash(self.gen_values)

    def __repr__(self):
        return f"GammaHom({list(self.gen_values)!r})"

    @classmethod
    def zero_int(cls, rank: int) -> GammaHom:
        return cls((0,) * rank)

    @classmethod
    def zero_laurent(cls, rank: int) -> GammaHom:
        return cls((LaurentPoly(),) * rank)


class Character:
    """Multiplicative map into the nonzero scalars, extended from generators."""

    __slots__ = ("gen_values",)

    def __init__(self, gen_values):
        values = tuple(gen_values)
        if not all(values):
            raise ZeroScalar("character values must be nonzero")
        object.__setattr__(self, "gen_values", values)

    def __setattr__(self, name, value):
        raise AttributeError("Character values are immutable")

    def __reduce__(self):
        return (Character, (self.gen_values,))

    def __call__(self, coords: GammaElement):
        out = None
        for n, v in zip(coords, self.gen_values):
            piece = scalar_pow(v, n)
            out = piece if out is None else out * piece
        return out

    def __eq__(self, other):
        if isinstance(other, Character):
            return self.gen_values == other.gen_values
        return NotImplemented

    def __hash__(self):
        return hash(self.gen_values)

    def __repr__(self):
        return f"Character({list(self.gen_values)!r})"

    @classmethod
    def trivial(cls, field, rank: int) -> Character:
        return cls((field.one,) * rank)


class GSymbol:
    """The affine family ``alpha -> c + d*embed(alpha)`` of Laurent values.

    Members satisfy ``(A - B)(c + d(A+B)) = A(c + dA) - B(c + dB)`` for all
    embedded values A, B -- an identity, spot-checked at construction on a
    small coordinate sample.
    """

    __slots__ = ("cfg", "c", "d")

    def __init__(self, cfg: GammaConfig, c: LaurentPoly, d: LaurentPoly):
        object.__setattr__(self, "cfg", cfg)
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "d", d)
        self._spot_check()

    def __setattr__(self, name, value):
        raise AttributeError("GSymbol values are immutable")

    def __reduce__(self):
        return (GSymbol, (self.cfg, self.c, self.d))

    def _spot_check(self):
        cfg = self.cfg
        sample = [cfg.zero(), cfg.unit(0), coords_neg(cfg.unit(0))]
        if cfg.rank > 1:
            sample.append(cfg.unit(1))
        for alpha in sample:
            for beta in sample:
                lhs = (self(coords_add(alpha, beta))).scaled(
                    cfg.embed(alpha) - cfg.embed(beta)
                )
                rhs = self(alpha).scaled(cfg.embed(alpha)) - self(beta).scaled(
                    cfg.embed(beta)
                )
                if lhs != rhs:  # pragma: no cover - identity holds symbolically
                    raise ValueError("GSymbol relation failed a spot check")

    def __call__(self, coords: GammaElement) -> LaurentPoly:
        return self.c + self.d.scaled(self.cfg.embed(coords))

    def is_zero(self) -> bool:
        return not self.c and not self.d

    def scaled(self, scalar) -> GSymbol:
        return GSymbol(self.cfg, self.c.scaled(scalar), self.d.scaled(scalar))

    def __eq__(self, other):
        if isinstance(other, GSymbol):
            return self.cfg == other.cfg and self.c == other.c and self.d == other.d
        return NotImplemented

    def __hash__(self):
        return hash((self.c, self.d))

    def __repr__(self):
        return f"GSymbol(c={self.c!r}, d={self.d!r})"


def solve_g_space(cfg: GammaConfig, gamma_values) -> list[dict]:
    """Basis of the solution space of the defining relation over a finite box.

    ``gamma_values`` is the finite list of coordinate tuples to quantify
    over (it must contain 0 and at least three values).  The relation
    preserves the Laurent degree, so it decomposes degree by degree into
    the same scalar system; the returned basis vectors are therefore plain
    ``{coords: scalar}`` tables, to be multiplied by arbitrary Laurent
    polynomials.
    """
    values = sorted(set(gamma_values))
    if len(values) < 3 or (0,) * cfg.rank not in values:
        raise BoxTooSmall("need at least three lattice values including 0")
    index = {g: i for i, g in enumerate(values)}
    sys = LinearSystem(len(values))
    for alpha in values:
        ea = cfg.embed(alpha)
        for beta in values:
            total = coords_add(alpha, beta)
            if total not in index:
                continue
            eb = cfg.embed(beta)
            row: dict = {}
            for col, coeff in (
                (index[total], ea - eb),
                (index[alpha], -ea),
                (index[beta], eb),
            ):
                if coeff:
                    s = row.get(col, 0) + coeff
                    if s:
                        row[col] = s
                    else:
                        row.pop(col, None)
            sys.add_equation(row, 0)
    basis = sys.nullspace()
    return [
        {g: vec[i] for g, i in index.items() if vec.get(i, 0)} for vec in basis
    ]


def g_table_from_symbol(sym: GSymbol, gamma_values, degree: int = 0) -> dict:
    """Tabulate a symbol's coefficient at one Laurent degree over a box."""
    out = {}
    for g in gamma_values:
        c = sym(g).coefficient(degree)
        if c:
            out[g] = c
    return out
