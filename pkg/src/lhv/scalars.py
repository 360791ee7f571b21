"""Exact scalar arithmetic: rationals and real quadratic extensions.

Two pluggable backends play the role of the ground field:

* :class:`RationalField` -- plain rationals, represented by
  :class:`fractions.Fraction` (arbitrary precision, always canonical).
* :class:`QuadraticField` -- ``Q(sqrt(d))`` for a fixed square-free integer
  ``d`` that is not a perfect square; elements are :class:`Quad` values
  ``x + y*sqrt(d)`` with rational components.

All arithmetic is exact; equality and the zero test are decidable.  Plain
integers and Fractions mix freely with :class:`Quad` values (the rationals
embed into every quadratic extension), but two :class:`Quad` values with
different ``d`` never combine -- that raises :class:`BackendMismatch`.

Scalars serialize to decimal-free strings such as ``"-3/4"`` and
``"1-1/2*sqrt(2)"``; see ``docs/grammar.md`` for the grammar.  ``parse``
and ``format`` are exact inverses.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .errors import BackendMismatch, ExprSyntaxError


def _is_squarefree(n: int) -> bool:
    n = abs(n)
    if n == 0:
        return False
    f = 2
    while f * f <= n:
        if n % (f * f) == 0:
            return False
        while n % f == 0:
            n //= f
        f += 1
    return True


class Quad:
    """``x + y*sqrt(d)`` with rational ``x, y`` and a fixed integer ``d``.

    Values are immutable and kept in canonical form by construction (the
    components are Fractions, which normalize themselves).  ``Quad`` values
    with ``y == 0`` compare and hash equal to the corresponding Fraction.
    """

    __slots__ = ("x", "y", "d")

    def __init__(self, x, y, d: int):
        object.__setattr__(self, "x", Fraction(x))
        object.__setattr__(self, "y", Fraction(y))
        object.__setattr__(self, "d", d)

    def __setattr__(self, name, value):
        raise AttributeError("Quad values are immutable")

    def __reduce__(self):
        return (Quad, (self.x, self.y, self.d))

    def _coerce(self, other):
        if isinstance(other, Quad):
            if other.d != self.d:
                raise BackendMismatch(
                    f"cannot combine sqrt({self.d}) and sqrt({other.d}) values"
                )
            return other
        if isinstance(other, (int, Fraction)):
            return Quad(other, 0, self.d)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Quad(self.x + o.x, self.y + o.y, self.d)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Quad(self.x - o.x, self.y - o.y, self.d)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Quad(o.x - self.x, o.y - self.y, self.d)

    def __neg__(self):
        return Quad(-self.x, -self.y, self.d)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Quad(
            self.x * o.x + self.d * self.y * o.y,
            self.x * o.y + self.y * o.x,
            self.d,
        )

    __rmul__ = __mul__

    def inverse(self) -> Quad:
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("scalar division by zero")
        return Quad(self.x / n, -self.y / n, self.d)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        base = self if n >= 0 else self.inverse()
        result = Quad(1, 0, self.d)
        for _ in range(abs(n)):
            result = result * base
        return result

    def norm(self) -> Fraction:
        """Field norm ``x**2 - d*y**2``; zero only for the zero element."""
        return self.x * self.x - self.d * self.y * self.y

    def conjugate(self) -> Quad:
        return Quad(self.x, -self.y, self.d)

    def __bool__(self):
        return bool(self.x) or bool(self.y)

    def __eq__(self, other):
        if isinstance(other, Quad):
            return self.d == other.d and self.x == other.x and self.y == other.y
        if isinstance(other, (int, Fraction)):
            return self.y == 0 and self.x == other
        return NotImplemented

    def __hash__(self):
        if self.y == 0:
            return hash(self.x)
        return hash((self.x, self.y, self.d))

    def __repr__(self):
        return f"Quad({self.x!r}, {self.y!r}, d={self.d})"

    def __str__(self):
        return format_scalar(self)


class RationalField:
    """The rationals; scalar values are :class:`fractions.Fraction`."""

    zero = Fraction(0)
    one = Fraction(1)

    def coerce(self, value):
        if isinstance(value, Fraction):
            return value
        if isinstance(value, int):
            return Fraction(value)
        if isinstance(value, Quad):
            if value.y == 0:
                return value.x
            raise BackendMismatch("irrational value in a rational context")
        if isinstance(value, str):
            return self.parse(value)
        raise BackendMismatch(f"cannot coerce {value!r} to a rational scalar")

    def components(self, value) -> tuple:
        """Coordinates of ``value`` over Q (here: a 1-tuple)."""
        return (self.coerce(value),)

    def from_components(self, comps):
        return comps[0]

    def parse(self, text: str):
        return parse_scalar(text, self)

    def format(self, value) -> str:
        return format_scalar(self.coerce(value))

    def to_json(self):
        return "rationals"

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("rationals")

    def __repr__(self):
        return "RationalField()"


class QuadraticField:
    """``Q(sqrt(d))`` for square-free, non-square ``d``; values are :class:`Quad`."""

    def __init__(self, d: int):
        if d in (0, 1) or not _is_squarefree(d):
            raise ValueError(f"d must be a square-free integer != 0, 1; got {d}")
        self.d = d
        self.zero = Quad(0, 0, d)
        self.one = Quad(1, 0, d)

    def sqrt_gen(self) -> Quad:
        """The generator ``sqrt(d)``."""
        return Quad(0, 1, self.d)

    def coerce(self, value):
        if isinstance(value, Quad):
            if value.d != self.d:
                raise BackendMismatch(
                    f"value from sqrt({value.d}) used in sqrt({self.d}) field"
                )
            return value
        if isinstance(value, (int, Fraction)):
            return Quad(value, 0, self.d)
        if isinstance(value, str):
            return self.parse(value)
        raise BackendMismatch(f"cannot coerce {value!r} to a quadratic scalar")

    def components(self, value) -> tuple:
        """Coordinates of ``value`` over Q (here: the pair ``(x, y)``)."""
        v = self.coerce(value)
        return (v.x, v.y)

    def from_components(self, comps):
        return Quad(comps[0], comps[1], self.d)

    def parse(self, text: str):
        return parse_scalar(text, self)

    def format(self, value) -> str:
        return format_scalar(self.coerce(value))

    def to_json(self):
        return {"quadratic": self.d}

    def __eq__(self, other):
        return isinstance(other, QuadraticField) and other.d == self.d

    def __hash__(self):
        return hash(("quadratic", self.d))

    def __repr__(self):
        return f"QuadraticField({self.d})"


#: Shared rational backend instance.
QQ = RationalField()


def field_from_json(spec) -> RationalField | QuadraticField:
    from .errors import ConfigError

    if spec == "rationals" or spec == {"rationals": True}:
        return QQ
    if isinstance(spec, dict) and set(spec) == {"quadratic"}:
        d = spec["quadratic"]
        if not isinstance(d, int):
            raise ConfigError(f'"quadratic" wants an integer, got {d!r}')
        try:
            return QuadraticField(d)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
    raise ConfigError(f"unrecognized field descriptor {spec!r}")


def scalar_inverse(value):
    """Exact multiplicative inverse; raises ZeroDivisionError on zero."""
    if isinstance(value, Quad):
        return value.inverse()
    if value == 0:
        raise ZeroDivisionError("scalar division by zero")
    return Fraction(1) / Fraction(value)


def scalar_pow(value, n: int):
    """``value**n`` for any integer ``n`` (negative powers via the inverse)."""
    if isinstance(value, Quad):
        return value**n
    if n < 0:
        return scalar_inverse(value) ** (-n)
    return Fraction(value) ** n


def as_int(value):
    """Collapse a scalar to a plain int when exactly integral, else return it.

    Sweeps use this so that rank-one integer lattices run on native ints.
    """
    if isinstance(value, Fraction) and value.denominator == 1:
        return value.numerator
    return value


# --------------------------------------------------------------------------
# text form
# --------------------------------------------------------------------------

_RATIONAL_RE = re.compile(r"[+-]?\d+(?:/\d+)?")
_QUAD_RE = re.compile(
    r"""
    (?:(?P<x>[+-]?\d+(?:/\d+)?)\s*(?=[+-]))?   # rational part, only before a sign
    (?P<sign>[+-])?                            # sign of the sqrt part
    \s*
    (?:(?P<y>\d+(?:/\d+)?)\s*\*\s*)?           # optional |coefficient| with '*'
    sqrt\(\s*(?P<d>-?\d+)\s*\)
    """,
    re.VERBOSE,
)


def format_scalar(value) -> str:
    """Canonical decimal-free string form of a scalar."""
    if isinstance(value, int):
        value = Fraction(value)
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, Quad):
        if value.y == 0:
            return str(value.x)
        mag = abs(value.y)
        root = f"sqrt({value.d})" if mag == 1 else f"{mag}*sqrt({value.d})"
        if value.x == 0:
            return root if value.y > 0 else f"-{root}"
        sign = "+" if value.y > 0 else "-"
        return f"{value.x}{sign}{root}"
    raise TypeError(f"not a scalar: {value!r}")


def parse_scalar(text: str, field):
    """Parse a scalar string for the given backend.

    Accepts ``p``, ``p/q`` on every backend and additionally
    ``x+y*sqrt(d)`` forms (with either part omissible, ``y = 1`` implicit)
    on a matching quadratic backend.
    """
    s = text.strip()
    if not s:
        raise ExprSyntaxError("empty scalar literal", 1)
    if _RATIONAL_RE.fullmatch(s):
        frac = Fraction(s)
        return field.coerce(frac)
    m = _QUAD_RE.fullmatch(s)
    if m is None:
        raise ExprSyntaxError(f"malformed scalar literal {text!r}", 1)
    d = int(m.group("d"))
    if not isinstance(field, QuadraticField):
        raise BackendMismatch(f"sqrt({d}) literal on the rational backend")
    if d != field.d:
        raise BackendMismatch(f"sqrt({d}) literal in a sqrt({field.d}) field")
    x = Fraction(m.group("x")) if m.group("x") else Fraction(0)
    y = Fraction(m.group("y")) if m.group("y") else Fraction(1)
    if m.group("sign") == "-":
        y = -y
    elif m.group("sign") is None and m.group("x") is not None:
        # "2sqrt(2)" without an operator between the parts
        raise ExprSyntaxError(f"malformed scalar literal {text!r}", 1)
    return Quad(x, y, d)
