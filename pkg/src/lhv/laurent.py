"""Sparse Laurent polynomials over an exact scalar backend.

A :class:`LaurentPoly` is a finitely supported map from integer exponents
to nonzero scalars, i.e. an element of ``F[t, t^-1]``.  The zero
coefficients are never stored, so equal values always have identical
representations.  :class:`RhoOperator` wraps ``p(t) * d/dt``, the general
derivation of the Laurent ring.

Text form: terms in descending exponent order, e.g. ``"2t^3 - 1/2t^-1"``;
quadratic-extension coefficients are parenthesized, ``"(1+sqrt(2))t^2"``.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import ExprSyntaxError
from .scalars import Quad, format_scalar, parse_scalar


def _is_scalar(value) -> bool:
    return isinstance(value, (int, Fraction, Quad))


class LaurentPoly:
    """Finitely supported ``exponent -> scalar`` map, exact ring arithmetic."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=None):
        clean = {}
        if coeffs:
            for exp, c in coeffs.items():
                if c:
                    clean[exp] = c
        object.__setattr__(self, "coeffs", clean)

    def __setattr__(self, name, value):
        raise AttributeError("LaurentPoly values are immutable")

    def __reduce__(self):
        return (LaurentPoly, (self.coeffs,))

    @classmethod
    def term(cls, coeff, exp: int = 0) -> LaurentPoly:
        """The monomial ``coeff * t**exp``."""
        return cls({exp: coeff} if coeff else {})

    @classmethod
    def zero(cls) -> LaurentPoly:
        return cls()

    @classmethod
    def one(cls, field=None) -> LaurentPoly:
        one = field.one if field is not None else Fraction(1)
        return cls({0: one})

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, LaurentPoly):
            return self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def __add__(self, other):
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        out = dict(self.coeffs)
        for exp, c in other.coeffs.items():
            s = out.get(exp, 0) + c
            if s:
                out[exp] = s
            else:
                out.pop(exp, None)
        return LaurentPoly(out)

    def __sub__(self, other):
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self + (-other)

    def __neg__(self):
        return LaurentPoly({e: -c for e, c in self.coeffs.items()})

    def __mul__(self, other):
        if isinstance(other, LaurentPoly):
            out = {}
            for e1, c1 in self.coeffs.items():
                for e2, c2 in other.coeffs.items():
                    e = e1 + e2
                    s = out.get(e, 0) + c1 * c2
                    if s:
                        out[e] = s
                    else:
                        out.pop(e, None)
            return LaurentPoly(out)
        if _is_scalar(other):
            return self.scaled(other)
        return NotImplemented

    def __rmul__(self, other):
        if _is_scalar(other):
            return self.scaled(other)
        return NotImplemented

    def scaled(self, scalar) -> LaurentPoly:
        if not scalar:
            return LaurentPoly()
        return LaurentPoly({e: c * scalar for e, c in self.coeffs.items()})

    def shifted(self, k: int) -> LaurentPoly:
        """Multiply by ``t**k``."""
        if k == 0:
            return self
        return LaurentPoly({e + k: c for e, c in self.coeffs.items()})

    def monomial(self):
        """Return ``(exp, coeff)`` if this is a single term, else None."""
        if len(self.coeffs) != 1:
            return None
        [(exp, coeff)] = self.coeffs.items()
        return exp, coeff

    def coefficient(self, exp: int):
        return self.coeffs.get(exp, 0)

    def support(self):
        return sorted(self.coeffs)

    def __str__(self):
        return format_laurent(self)

    def __repr__(self):
        return f"LaurentPoly({self.coeffs!r})"


class RhoOperator:
    """The derivation ``p(t) * d/dt`` of the Laurent ring."""

    __slots__ = ("p",)

    def __init__(self, p: LaurentPoly):
        object.__setattr__(self, "p", p)

    def __setattr__(self, name, value):
        raise AttributeError("RhoOperator values are immutable")

    def __reduce__(self):
        return (RhoOperator, (self.p,))

    def apply_power(self, i: int) -> LaurentPoly:
        """Image of ``t**i``, i.e. ``i * p(t) * t**(i-1)``."""
        if i == 0:
            return LaurentPoly()
        return self.p.scaled(i).shifted(i - 1)

    def apply(self, f: LaurentPoly) -> LaurentPoly:
        out = LaurentPoly()
        for exp, c in f.coeffs.items():
            out = out + self.apply_power(exp).scaled(c)
        return out

    def scaled(self, scalar) -> RhoOperator:
        return RhoOperator(self.p.scaled(scalar))

    def __bool__(self):
        return bool(self.p)

    def __eq__(self, other):
        if isinstance(other, RhoOperator):
            return self.p == other.p
        return NotImplemented

    def __hash__(self):
        return hash(("rho", self.p))

    def __repr__(self):
        return f"RhoOperator({self.p!r})"

    def __str__(self):
        return f"({format_laurent(self.p)})*d/dt"


# --------------------------------------------------------------------------
# text form
# --------------------------------------------------------------------------


def _format_coeff(coeff) -> tuple[str, bool]:
    """Return (text of |coeff| with quad parenthesization, coeff-is-negative)."""
    if isinstance(coeff, Quad):
        if coeff.y != 0:
            lead_neg = coeff.x < 0 if coeff.x != 0 else coeff.y < 0
            shown = -coeff if lead_neg else coeff
            return f"({format_scalar(shown)})", lead_neg
        coeff = coeff.x
    neg = coeff < 0
    return format_scalar(-coeff if neg else coeff), neg


def format_laurent(poly: LaurentPoly) -> str:
    """Canonical form: descending exponents, unit coefficients omitted."""
    if not poly.coeffs:
        return "0"
    pieces = []
    for exp in sorted(poly.coeffs, reverse=True):
        text, neg = _format_coeff(poly.coeffs[exp])
        if exp == 0:
            body = text
        else:
            tpart = "t" if exp == 1 else f"t^{exp}"
            body = tpart if text == "1" else f"{text}{tpart}"
        if not pieces:
            pieces.append(f"-{body}" if neg else body)
        else:
            pieces.append(f" - {body}" if neg else f" + {body}")
    return "".join(pieces)


def parse_laurent(text: str, field) -> LaurentPoly:
    """Parse the canonical Laurent form back into a value.

    Grammar (see docs/grammar.md): signed terms ``[coeff][t[^exp]]`` joined
    by ``+``/``-``; coefficients are scalar literals, parenthesized when
    they contain a sign of their own.
    """
    s = text
    n = len(s)
    pos = 0
    coeffs: dict[int, object] = {}

    def skip_ws():
        nonlocal pos
        while pos < n and s[pos].isspace():
            pos += 1

    def read_int() -> int:
        nonlocal pos
        start = pos
        if pos < n and s[pos] in "+-":
            pos += 1
        while pos < n and s[pos].isdigit():
            pos += 1
        if pos == start or not s[start:pos].lstrip("+-"):
            raise ExprSyntaxError("expected an integer", pos + 1)
        return int(s[start:pos])

    skip_ws()
    if pos >= n:
        raise ExprSyntaxError("empty polynomial", 1)
    first = True
    while pos < n:
        skip_ws()
        if pos >= n:
            break
        sign = 1
        if s[pos] in "+-":
            sign = -1 if s[pos] == "-" else 1
            pos += 1
            skip_ws()
        elif not first:
            raise ExprSyntaxError("expected '+' or '-' between terms", pos + 1)
        first = False
        coeff = None
        if pos < n and s[pos] == "(":
            depth, start = 1, pos + 1
            pos += 1
            while pos < n and depth:
                if s[pos] == "(":
                    depth += 1
                elif s[pos] == ")":
                    depth -= 1
                pos += 1
            if depth:
                raise ExprSyntaxError("unbalanced '(' in coefficient", start)
            coeff = parse_scalar(s[start : pos - 1], field)
        elif pos < n and (s[pos].isdigit() or s.startswith("sqrt", pos)):
            start = pos
            while pos < n and (s[pos].isdigit() or s[pos] == "/"):
                pos += 1
            if s.startswith("*sqrt", pos) or s.startswith("sqrt", pos):
                while pos < n and s[pos] != ")":
                    pos += 1
                if pos >= n:
                    raise ExprSyntaxError("unterminated sqrt(...)", start + 1)
                pos += 1
            coeff = parse_scalar(s[start:pos], field)
        if pos < n and s[pos] == "*":
            pos += 1  # tolerated separator before the t-part
        exp = 0
        has_t = pos < n and s[pos] == "t"
        if has_t:
            pos += 1
            exp = 1
            if pos < n and s[pos] == "^":
                pos += 1
                exp = read_int()
        elif coeff is None:
            raise ExprSyntaxError("expected a coefficient or 't'", pos + 1)
        if coeff is None:
            coeff = field.one
        c = coeff if sign == 1 else -coeff
        prev = coeffs.get(exp, 0)
        total = prev + c
        if total:
            coeffs[exp] = total
        else:
            coeffs.pop(exp, None)
        skip_ws()
    return LaurentPoly(coeffs)
