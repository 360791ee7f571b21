"""Expression language for algebra elements.

Grammar (full EBNF in docs/grammar.md):

    expr    = term { ("+" | "-") term }
    term    = factor { "*" factor }
    factor  = "-" factor | basis | "[" expr "," expr "]" | "(" expr ")"
            | rational | "sqrt" "(" integer ")"
    basis   = ("L" | "H") "(" integer { "," integer } ";" integer ")"

Evaluation is exact and happens during the parse; scalars and elements
mix through ``*`` (scalar scaling) while ``[x, y]`` demands two elements.
Error positions are 1-based columns.
"""

from __future__ import annotations

from fractions import Fraction

from .algebra import AlgebraElement, bracket
from .errors import BackendMismatch, ExprSyntaxError
from .gamma import GammaConfig
from .scalars import Quad, QuadraticField


class _Scanner:
    def __init__(self, src: str):
        self.src = src
        self.pos = 0

    def col(self) -> int:
        return self.pos + 1

    def skip_ws(self):
        while self.pos < len(self.src) and self.src[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.src[self.pos] if self.pos < len(self.src) else ""

    def take(self, expected: str):
        self.skip_ws()
        if not self.src.startswith(expected, self.pos):
            got = self.src[self.pos] if self.pos < len(self.src) else "end of input"
            raise ExprSyntaxError(f"expected {expected!r}, found {got!r}", self.col())
        self.pos += len(expected)

    def try_take(self, expected: str) -> bool:
        self.skip_ws()
        if self.src.startswith(expected, self.pos):
            self.pos += len(expected)
            return True
        return False

    def integer(self) -> int:
        self.skip_ws()
        start = self.pos
        if self.pos < len(self.src) and self.src[self.pos] in "+-":
            self.pos += 1
        digits = self.pos
        while self.pos < len(self.src) and self.src[self.pos].isdigit():
            self.pos += 1
        if self.pos == digits:
            raise ExprSyntaxError("expected an integer", self.col())
        return int(self.src[start : self.pos])


class _Parser:
    def __init__(self, src: str, cfg: GammaConfig):
        self.sc = _Scanner(src)
        self.cfg = cfg

    def parse(self) -> AlgebraElement:
        value = self.expr()
        self.sc.skip_ws()
        if self.sc.pos != len(self.sc.src):
            raise ExprSyntaxError(
                f"unexpected {self.sc.src[self.sc.pos]!r}", self.sc.col()
            )
        if not isinstance(value, AlgebraElement):
            if not value:  # a bare zero is the zero element
                return AlgebraElement.zero(self.cfg)
            raise ExprSyntaxError("expression does not denote an algebra element", 1)
        return value

    def expr(self):
        value = self.term()
        while True:
            if self.sc.try_take("+"):
                value = self._combine(value, self.term(), 1)
            elif self._minus_ahead():
                self.sc.take("-")
                value = self._combine(value, self.term(), -1)
            else:
                return value

    def _minus_ahead(self) -> bool:
        return self.sc.peek() == "-"

    def _combine(self, left, right, sign: int):
        col = self.sc.col()
        if isinstance(left, AlgebraElement) != isinstance(right, AlgebraElement):
            raise ExprSyntaxError("cannot add a scalar to an algebra element", col)
        return left + right if sign == 1 else left - right

    def term(self):
        value = self.factor()
        while self.sc.try_take("*"):
            col = self.sc.col()
            rhs = self.factor()
            left_elt = isinstance(value, AlgebraElement)
            right_elt = isinstance(rhs, AlgebraElement)
            if left_elt and right_elt:
                raise ExprSyntaxError(
                    "algebra elements have no '*' product; use [x, y]", col
                )
            if left_elt:
                value = value.scaled(rhs)
            elif right_elt:
                value = rhs.scaled(value)
            else:
                value = value * rhs
        return value

    def factor(self):
        sc = self.sc
        ch = sc.peek()
        if ch == "-":
            sc.take("-")
            return -self.factor()
        if ch == "[":
            sc.take("[")
            left = self.expr()
            sc.take(",")
            right = self.expr()
            col = sc.col()
            sc.take("]")
            if not (isinstance(left, AlgebraElement) and isinstance(right, AlgebraElement)):
                raise ExprSyntaxError("[x, y] needs two algebra elements", col)
            return bracket(left, right)
        if ch == "(":
            sc.take("(")
            value = self.expr()
            sc.take(")")
            return value
        if ch in ("L", "H"):
            return self.basis(ch)
        if sc.src.startswith("sqrt", sc.pos):
            sc.take("sqrt")
            sc.take("(")
            col = sc.col()
            d = sc.integer()
            sc.take(")")
            field = self.cfg.field
            if not isinstance(field, QuadraticField):
                raise BackendMismatch("sqrt(...) literal on the rational backend")
            if d != field.d:
                raise BackendMismatch(
                    f"sqrt({d}) literal in a sqrt({field.d}) field"
                )
            return Quad(0, 1, d)
        if ch.isdigit():
            return self.number()
        raise ExprSyntaxError(
            f"expected an expression, found {ch!r}" if ch else "unexpected end of input",
            sc.col(),
        )

    def number(self):
        sc = self.sc
        value = Fraction(sc.integer())
        sc.skip_ws()
        if sc.pos < len(sc.src) and sc.src[sc.pos] == "/":
            sc.pos += 1
            den = sc.integer()
            if den == 0:
                raise ExprSyntaxError("zero denominator", sc.col())
            value = value / den
        return self.cfg.field.coerce(value)

    def basis(self, kind: str):
        sc = self.sc
        sc.take(kind)
        sc.take("(")
        coords = [sc.integer()]
        while sc.try_take(","):
            coords.append(sc.integer())
        sc.take(";")
        degree = sc.integer()
        sc.take(")")
        return AlgebraElement.basis_element(self.cfg, kind, tuple(coords), degree)


def parse_expression(src: str, cfg: GammaConfig) -> AlgebraElement:
    """Evaluate an element expression; exact, with positioned errors."""
    return _Parser(src, cfg).parse()
