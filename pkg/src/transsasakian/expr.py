"""Exact multivariate rational functions over a coordinate chart.

Every tensor component in the engine is an :class:`Expr`: a reduced quotient
of two integer-coefficient polynomials in the chart's coordinates.  The
polynomial arithmetic (including GCD) is delegated to sympy's sparse
``PolyRing``; this module owns the canonical form, the text syntax and
point evaluation.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Mapping, Union

from sympy import ZZ
from sympy.polys.orderings import grlex
from sympy.polys.rings import PolyElement, PolyRing

__all__ = [
    "Chart",
    "Expr",
    "DomainError",
    "EvaluationError",
    "ExprSyntaxError",
    "normalize",
    "parse_expr",
]

Scalar = Union["Expr", int, Fraction]

_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z_0-9]*\Z")


class DomainError(ValueError):
    """An operation was applied outside its mathematical domain."""


class EvaluationError(ArithmeticError):
    """Point evaluation hit a pole."""


class ExprSyntaxError(ValueError):
    def __init__(self, message: str, text: str, column: int):
        super().__init__(f"{message} at column {column}: {text!r}")
        self.text = text
        self.column = column


class Chart:
    """An ordered list of coordinate names plus an optional excluded-locus note.

    The coordinate order fixes the graded-lex monomial order used for the
    canonical form and for printing.
    """

    def __init__(self, coords: Iterable[str], excluded: str | None = None):
        coords = tuple(coords)
        if not coords:
            raise DomainError("a chart needs at least one coordinate")
        if len(set(coords)) != len(coords):
            raise DomainError(f"duplicate coordinate names in {coords}")
        for name in coords:
            if not _NAME_RE.match(name):
                raise DomainError(f"invalid coordinate name {name!r}")
        self.coords = coords
        self.excluded = excluded
        self.ring = PolyRing(",".join(coords), ZZ, grlex)
        self.zero = Expr._raw(self, self.ring.zero, self.ring.one)
        self.one = Expr._raw(self, self.ring.one, self.ring.one)

    @property
    def dim(self) -> int:
        return len(self.coords)

    def index(self, coord: str) -> int:
        try:
            return self.coords.index(coord)
        except ValueError:
            raise DomainError(f"unknown coordinate {coord!r} for chart {self.coords}") from None

    def symbol(self, coord: str) -> Expr:
        return Expr._raw(self, self.ring.gens[self.index(coord)], self.ring.one)

    def const(self, value: int | Fraction) -> Expr:
        value = Fraction(value)
        return normalize(self.ring(value.numerator), self.ring(value.denominator))

    def expr(self, value: Scalar | str) -> Expr:
        """Coerce an int, Fraction, text or Expr into an Expr on this chart."""
        if isinstance(value, Expr):
            if value.chart != self:
                raise DomainError("expression belongs to a different chart")
            return value
        if isinstance(value, str):
            return parse_expr(value, self)
        if isinstance(value, (int, Fraction)):
            return self.const(value)
        raise TypeError(f"cannot convert {type(value).__name__} to Expr")

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Chart) and self.coords == other.coords

    def __hash__(self) -> int:
        return hash(self.coords)

    def __repr__(self) -> str:
        return f"Chart({list(self.coords)!r})"


def _canonical(chart: Chart, n: PolyElement, d: PolyElement) -> Expr:
    if not n:
        return chart.zero
    if d.LC < 0:
        n, d = -n, -d
    return Expr._raw(chart, n, d)


def normalize(n: PolyElement, d: PolyElement, chart: Chart | None = None) -> Expr:
    """Return the canonical Expr for ``n/d``.

    The result has ``gcd(num, den) = 1`` (content included) and a denominator
    whose leading coefficient is positive; zero is ``0/1``.
    """
    if chart is None:
        chart = _chart_of_ring(n.ring)
    if not d:
        raise DomainError("zero denominator")
    if not n:
        return chart.zero
    _, n, d = n.cofactors(d)
    return _canonical(chart, n, d)


_RING_CHARTS: dict[PolyRing, Chart] = {}


def _chart_of_ring(ring: PolyRing) -> Chart:
    chart = _RING_CHARTS.get(ring)
    if chart is None:
        chart = Chart([str(s) for s in ring.symbols])
    return chart


class Expr:
    """Immutable canonical rational function ``num/den``."""

    __slots__ = ("chart", "num", "den", "_hash")

    chart: Chart
    num: PolyElement
    den: PolyElement

    def __init__(self, *args, **kwargs):
        raise TypeError("use Chart.expr, Chart.const or normalize to build an Expr")

    @classmethod
    def _raw(cls, chart: Chart, num: PolyElement, den: PolyElement) -> Expr:
        self = object.__new__(cls)
        object.__setattr__(self, "chart", chart)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)
        object.__setattr__(self, "_hash", None)
        _RING_CHARTS.setdefault(chart.ring, chart)
        return self

    def __setattr__(self, name, value):
        raise AttributeError("Expr is immutable")

    # -- coercion ---------------------------------------------------------

    def _coerce(self, other) -> Expr | None:
        if isinstance(other, Expr):
            if other.chart != self.chart:
                raise DomainError("expressions live on different charts")
            return other
        if isinstance(other, (int, Fraction)):
            return self.chart.const(other)
        return None

    # -- predicates -------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.num

    def __bool__(self) -> bool:
        return bool(self.num)

    def is_constant(self) -> bool:
        return self.num.is_ground and self.den.is_ground

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise DomainError(f"{self} is not constant")
        return Fraction(int(self.num.LC) if self.num else 0, int(self.den.LC))

    # -- arithmetic -------------------------------------------------------

    def __neg__(self) -> Expr:
        return Expr._raw(self.chart, -self.num, self.den)

    def __pos__(self) -> Expr:
        return self

    def __add__(self, other) -> Expr:
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if not other.num:
            return self
        if not self.num:
            return other
        if self.den == other.den:
            return normalize(self.num + other.num, self.den, self.chart)
        return normalize(
            self.num * other.den + other.num * self.den, self.den * other.den, self.chart
        )

    __radd__ = __add__

    def __sub__(self, other) -> Expr:
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> Expr:
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other) -> Expr:
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if not self.num or not other.num:
            return self.chart.zero
        # cross-cancellation keeps the product reduced without a full gcd
        g1, n1, d2 = self.num.cofactors(other.den)
        g2, n2, d1 = other.num.cofactors(self.den)
        return _canonical(self.chart, n1 * n2, d1 * d2)

    __rmul__ = __mul__

    def __truediv__(self, other) -> Expr:
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other) -> Expr:
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other * self.inverse()

    def inverse(self) -> Expr:
        if not self.num:
            raise DomainError("division by the zero expression")
        return _canonical(self.chart, self.den, self.num)

    def __pow__(self, k: int) -> Expr:
        if not isinstance(k, int):
            raise DomainError("only integer exponents are supported")
        if k < 0:
            return self.inverse() ** (-k)
        if k == 0:
            return self.chart.one
        return Expr._raw(self.chart, self.num**k, self.den**k)

    # -- calculus ---------------------------------------------------------

    def diff(self, coord: str | int) -> Expr:
        """Exact partial derivative with respect to a chart coordinate."""
        idx = coord if isinstance(coord, int) else self.chart.index(coord)
        if not 0 <= idx < self.chart.dim:
            raise DomainError(f"coordinate index {idx} out of range")
        x = self.chart.ring.gens[idx]
        if not self.num:
            return self
        dn = self.num.diff(x)
        if self.den.is_ground:
            return normalize(dn, self.den, self.chart)
        dd = self.den.diff(x)
        return normalize(dn * self.den - self.num * dd, self.den**2, self.chart)

    # -- evaluation -------------------------------------------------------

    def eval_at(self, point: Mapping[str, int | Fraction]) -> Fraction:
        """Evaluate exactly at a rational point; raises EvaluationError at a pole."""
        values = []
        for name in self.chart.coords:
            if name not in point:
                raise DomainError(f"no value given for coordinate {name!r}")
            values.append(Fraction(point[name]))
        den = _eval_poly(self.den, values)
        if den == 0:
            raise EvaluationError(f"{self} has a pole at {dict(point)}")
        return _eval_poly(self.num, values) / den

    # -- identity ---------------------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = self.chart.const(other)
        if not isinstance(other, Expr):
            return NotImplemented
        return self.chart == other.chart and self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        h = self._hash
        if h is None:
            h = hash((self.chart.coords, frozenset(self.num.items()), frozenset(self.den.items())))
            object.__setattr__(self, "_hash", h)
        return h

    def __str__(self) -> str:
        num = _poly_text(self.num, self.chart.coords)
        if self.den == 1:
            return num
        den = _poly_text(self.den, self.chart.coords)
        if len(self.num) > 1:
            num = f"({num})"
        if not _is_atomic_factor(self.den):
            den = f"({den})"
        return f"{num}/{den}"

    def __repr__(self) -> str:
        return f"Expr({str(self)!r})"


def _eval_poly(p: PolyElement, values: list[Fraction]) -> Fraction:
    total = Fraction(0)
    for monom, coeff in p.terms():
        term = Fraction(int(coeff))
        for v, e in zip(values, monom):
            if e:
                term *= v**e
        total += term
    return total


def _monomial_text(monom: tuple[int, ...], names: tuple[str, ...]) -> str:
    parts = []
    for name, e in zip(names, monom):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append(f"{name}^{e}")
    return "*".join(parts)


def _poly_text(p: PolyElement, names: tuple[str, ...]) -> str:
    if not p:
        return "0"
    out = []
    for i, (monom, coeff) in enumerate(p.terms()):
        coeff = int(coeff)
        mono = _monomial_text(monom, names)
        mag = abs(coeff)
        if not mono:
            body = str(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{mag}*{mono}"
        if i == 0:
            out.append(f"-{body}" if coeff < 0 else body)
        else:
            out.append(f" - {body}" if coeff < 0 else f" + {body}")
    return "".join(out)


def _is_atomic_factor(p: PolyElement) -> bool:
    # a single positive integer, or a single monomial with one variable and unit coefficient
    if len(p) != 1:
        return False
    (monom, coeff), = p.terms()
    if not any(monom):
        return True
    return coeff == 1 and sum(1 for e in monom if e) == 1


# -- parsing ---------------------------------------------------------------

_TOKEN_RE = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(.))")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None or m.end() == pos:
            break
        if m.group(1) is not None:
            tokens.append(("int", m.group(1), m.start(1)))
        elif m.group(2) is not None:
            tokens.append(("name", m.group(2), m.start(2)))
        elif m.group(3) is not None:
            ch = m.group(3)
            if ch not in "+-*/^()":
                raise ExprSyntaxError(f"unexpected character {ch!r}", text, m.start(3) + 1)
            tokens.append(("op", ch, m.start(3)))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, chart: Chart):
        self.text = text
        self.chart = chart
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self) -> tuple[str, str, int]:
        return self.tokens[self.pos]

    def take(self) -> tuple[str, str, int]:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def error(self, message: str, tok: tuple[str, str, int]) -> ExprSyntaxError:
        return ExprSyntaxError(message, self.text, tok[2] + 1)

    def parse(self) -> Expr:
        if self.peek()[0] == "end":
            raise self.error("empty expression", self.peek())
        value = self.sum()
        tok = self.peek()
        if tok[0] != "end":
            raise self.error(f"unexpected token {tok[1]!r}", tok)
        return value

    def sum(self) -> Expr:
        value = self.product()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.take()[1]
            rhs = self.product()
            value = value + rhs if op == "+" else value - rhs
        return value

    def product(self) -> Expr:
        value = self.unary()
        while self.peek()[1] in ("*", "/") and self.peek()[0] == "op":
            tok = self.take()
            rhs = self.unary()
            if tok[1] == "*":
                value = value * rhs
            else:
                if rhs.is_zero():
                    raise self.error("division by zero", tok)
                value = value / rhs
        return value

    def unary(self) -> Expr:
        tok = self.peek()
        if tok[0] == "op" and tok[1] in ("+", "-"):
            self.take()
            value = self.unary()
            return -value if tok[1] == "-" else value
        return self.power()

    def power(self) -> Expr:
        base = self.atom()
        tok = self.peek()
        if tok[0] == "op" and tok[1] == "^":
            self.take()
            paren = self.peek()[0] == "op" and self.peek()[1] == "("
            if paren:
                self.take()
            sign = 1
            if self.peek()[0] == "op" and self.peek()[1] in ("+", "-"):
                sign = -1 if self.take()[1] == "-" else 1
            exp_tok = self.take()
            if exp_tok[0] != "int":
                raise self.error("exponent must be an integer literal", exp_tok)
            if paren:
                close = self.take()
                if close[1] != ")":
                    raise self.error("expected ')' after exponent", close)
            k = sign * int(exp_tok[1])
            if k < 0 and base.is_zero():
                raise self.error("negative power of zero", exp_tok)
            return base**k
        return base

    def atom(self) -> Expr:
        tok = self.take()
        kind, value, _ = tok
        if kind == "int":
            return self.chart.const(int(value))
        if kind == "name":
            if value not in self.chart.coords:
                raise self.error(f"unknown coordinate {value!r}", tok)
            return self.chart.symbol(value)
        if kind == "op" and value == "(":
            inner = self.sum()
            close = self.take()
            if close[1] != ")":
                raise self.error("expected ')'", close)
            return inner
        raise self.error(f"unexpected token {value!r}" if value else "unexpected end", tok)


def parse_expr(text: str, chart: Chart) -> Expr:
    """Parse ``+ - * / ^`` expressions over integers and chart coordinates."""
    return _Parser(str(text), chart).parse()
