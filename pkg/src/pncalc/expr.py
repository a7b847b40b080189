"""Exact multivariate rational functions over a coordinate chart.

Polynomials are held in sympy's sparse ring over QQ with graded-lex order;
every result is reduced to a canonical form (coprime numerator and
denominator, monic denominator, unique zero) so that equality and
zero-testing are syntactic.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from numbers import Integral, Rational

from sympy.polys.domains import QQ
from sympy.polys.orderings import grlex
from sympy.polys.rings import ring

from .errors import (
    ChartMismatch,
    DivisionByZero,
    DivisionByZeroConstant,
    ExprSyntaxError,
    IndexOutOfRange,
    PoleAtPoint,
    UnknownIdentifier,
)

__all__ = [
    "Chart",
    "RatFunc",
    "parse_expr",
    "ratfunc_arith",
    "partial_deriv",
    "is_zero",
    "eval_at",
]


@lru_cache(maxsize=None)
def _poly_ring(names):
    R, *_ = ring(",".join(names), QQ, grlex)
    return R


@dataclass(frozen=True)
class Chart:
    """Ordered coordinate names of a local chart; indices are 1-based."""

    coord_names: tuple

    def __post_init__(self):
        names = tuple(self.coord_names)
        object.__setattr__(self, "coord_names", names)
        if not names:
            raise ValueError("a chart needs at least one coordinate")
        for name in names:
            if not isinstance(name, str) or not name.isidentifier():
                raise ValueError(f"invalid coordinate name {name!r}")
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate coordinate names in {names}")

    @property
    def dim(self):
        return len(self.coord_names)

    @property
    def ring(self):
        return _poly_ring(self.coord_names)

    def check_index(self, i):
        if not isinstance(i, Integral) or not 1 <= i <= self.dim:
            raise IndexOutOfRange(f"coordinate index {i} outside 1..{self.dim}")

    def coord(self, i):
        """The i-th coordinate function (1-based)."""
        self.check_index(i)
        return RatFunc._raw(self, self.ring.gens[i - 1], self.ring.one)

    def coords(self):
        return [self.coord(i) for i in range(1, self.dim + 1)]

    def const(self, c):
        return RatFunc.const(self, c)

    @property
    def zero(self):
        return RatFunc.const(self, 0)

    @property
    def one(self):
        return RatFunc.const(self, 1)

    def index_of(self, name):
        return self.coord_names.index(name) + 1

    def parse(self, text):
        return parse_expr(text, self)


def _to_qq(c):
    if isinstance(c, Integral):
        return QQ(int(c))
    if isinstance(c, Rational):
        return QQ(int(c.numerator), int(c.denominator))
    raise TypeError(f"not an exact rational: {c!r}")


def _to_fraction(q):
    return Fraction(int(q.numerator), int(q.denominator))


class RatFunc:
    """Canonical quotient of two polynomials in the chart coordinates.

    Instances are immutable. Arithmetic accepts other RatFuncs on the same
    chart as well as Python integers and Fractions.
    """

    __slots__ = ("chart", "num", "den", "_hash")

    def __init__(self, chart, num, den=None):
        R = chart.ring
        num = R(num)
        den = R.one if den is None else R(den)
        if not den:
            raise DivisionByZero("denominator is identically zero")
        self._set(chart, *_canonical(num, den, R))

    @classmethod
    def _raw(cls, chart, num, den):
        obj = cls.__new__(cls)
        obj._set(chart, num, den)
        return obj

    def _set(self, chart, num, den):
        object.__setattr__(self, "chart", chart)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("RatFunc is immutable")

    @classmethod
    def const(cls, chart, c):
        R = chart.ring
        return cls._raw(chart, R(_to_qq(c)), R.one)

    # -- coercion -------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, RatFunc):
            if other.chart != self.chart:
                raise ChartMismatch(
                    f"charts differ: {self.chart.coord_names} vs {other.chart.coord_names}"
                )
            return other
        if isinstance(other, (Integral, Rational)):
            return RatFunc.const(self.chart, other)
        return NotImplemented

    # -- predicates -----------------------------------------------------
    def is_zero(self):
        return not self.num

    def is_constant(self):
        return self.den == 1 and self.num.is_ground

    def is_polynomial(self):
        return self.den == 1

    def constant_value(self):
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return _to_fraction(self.num.LC) if self.num else Fraction(0)

    def __bool__(self):
        return bool(self.num)

    def __eq__(self, other):
        other = self._coerce(other) if not isinstance(other, RatFunc) else other
        if other is NotImplemented:
            return NotImplemented
        return (
            self.chart == other.chart and self.num == other.num and self.den == other.den
        )

    def __hash__(self):
        if self._hash is None:
            h = hash((self.chart, frozenset(self.num.items()), frozenset(self.den.items())))
            object.__setattr__(self, "_hash", h)
        return self._hash

    # -- field operations ----------------------------------------------
    def __neg__(self):
        return RatFunc._raw(self.chart, -self.num, self.den)

    def __pos__(self):
        return self

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if not other.num:
            return self
        if not self.num:
            return other
        if self.den == other.den:
            if self.den == 1:
                return RatFunc._raw(self.chart, self.num + other.num, self.den)
            return self._make(self.num + other.num, self.den)
        return self._make(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if not self.num or not other.num:
            return RatFunc._raw(self.chart, self.chart.ring.zero, self.chart.ring.one)
        if self.den == 1 and other.den == 1:
            return RatFunc._raw(self.chart, self.num * other.num, self.den)
        return self._make(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if not other.num:
            raise DivisionByZero("division by the zero function")
        return self._make(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other / self

    def __pow__(self, k):
        if not isinstance(k, Integral):
            raise TypeError("exponent must be an integer")
        k = int(k)
        if k < 0:
            if not self.num:
                raise DivisionByZero("negative power of the zero function")
            return self._make(self.den**-k, self.num**-k)
        return RatFunc._raw(self.chart, self.num**k, self.den**k)

    def _make(self, num, den):
        return RatFunc._raw(self.chart, *_canonical(num, den, self.chart.ring))

    # -- calculus -------------------------------------------------------
    def diff(self, i):
        """Partial derivative with respect to the i-th coordinate (1-based)."""
        self.chart.check_index(i)
        x = self.chart.ring.gens[i - 1]
        dn = self.num.diff(x)
        if self.den == 1:
            return RatFunc._raw(self.chart, dn, self.den)
        dd = self.den.diff(x)
        if not dd:
            return self._make(dn, self.den)
        return self._make(dn * self.den - self.num * dd, self.den**2)

    def eval_at(self, point):
        if len(point) != self.chart.dim:
            raise ValueError(f"point has {len(point)} entries, chart has {self.chart.dim}")
        vals = [_to_qq(c) for c in point]
        d = self.den(*vals) if self.chart.dim > 1 else self.den(vals[0])
        if d == 0:
            raise PoleAtPoint(f"denominator {self.den} vanishes at {tuple(point)}")
        n = self.num(*vals) if self.chart.dim > 1 else self.num(vals[0])
        return _to_fraction(QQ(n) / QQ(d))

    def degree(self):
        """Total degree of the numerator (−1 for zero)."""
        return max((sum(m) for m in self.num.keys()), default=-1)

    # -- printing -------------------------------------------------------
    def __str__(self):
        names = self.chart.coord_names
        if self.den == 1:
            return _poly_str(self.num, names)
        num = _poly_str(self.num, names)
        if len(self.num) > 1:
            num = f"({num})"
        return f"{num}/({_poly_str(self.den, names)})"

    def __repr__(self):
        return f"RatFunc({str(self)!r})"


def _canonical(num, den, R):
    if not num:
        return R.zero, R.one
    if den != 1:
        _, num, den = num.cofactors(den)
    lc = den.LC
    if lc != 1:
        inv = QQ(1) / lc
        num = num.mul_ground(inv)
        den = den.mul_ground(inv)
    return num, den


def _coeff_str(c):
    c = _to_fraction(c)
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _poly_str(p, names):
    if not p:
        return "0"
    parts = []
    for monom, coeff in p.terms():
        mono = "*".join(
            name if e == 1 else f"{name}^{e}" for name, e in zip(names, monom) if e
        )
        neg = coeff < 0
        mag = -coeff if neg else coeff
        if not mono:
            body = _coeff_str(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{_coeff_str(mag)}*{mono}"
        if not parts:
            parts.append(("-" if neg else "") + body)
        else:
            parts.append((" - " if neg else " + ") + body)
    return "".join(parts)


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

_TOKEN_RE = re.compile(r"(\s+)|(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(.)")


def _tokenize(text):
    tokens = []
    for m in _TOKEN_RE.finditer(text):
        if m.group(1):
            continue
        pos = m.start()
        if m.group(2):
            tokens.append(("int", m.group(2), pos))
        elif m.group(3):
            tokens.append(("ident", m.group(3), pos))
        elif m.group(4) in "+-*/^()":
            tokens.append((m.group(4), m.group(4), pos))
        else:
            raise ExprSyntaxError(text, pos, ["number", "identifier", "operator", "("])
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text, chart):
        self.text = text
        self.chart = chart
        self.tokens = _tokenize(text)
        self.i = 0

    @property
    def tok(self):
        return self.tokens[self.i]

    def advance(self):
        t = self.tokens[self.i]
        self.i += 1
        return t

    def fail(self, expected):
        raise ExprSyntaxError(self.text, self.tok[2], expected)

    def parse(self):
        value = self.expr()
        if self.tok[0] != "end":
            self.fail(["+", "-", "*", "/", "^", "end of input"])
        return value

    def expr(self):
        value = self.term()
        while self.tok[0] in ("+", "-"):
            op = self.advance()[0]
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self):
        value = self.factor()
        while self.tok[0] in ("*", "/"):
            op = self.advance()[0]
            rhs = self.factor()
            if op == "*":
                value = value * rhs
            else:
                if rhs.is_zero():
                    raise DivisionByZeroConstant("division by a zero constant")
                value = value / rhs
        return value

    def factor(self):
        neg = False
        if self.tok[0] == "-":
            self.advance()
            neg = True
        value = self.base()
        if self.tok[0] == "^":
            self.advance()
            sign = 1
            if self.tok[0] == "-":
                self.advance()
                sign = -1
            if self.tok[0] != "int":
                self.fail(["integer exponent"])
            value = value ** (sign * int(self.advance()[1]))
        return -value if neg else value

    def base(self):
        kind, text, pos = self.tok
        if kind == "int":
            self.advance()
            # "p/q" is left to the term rule, which keeps x/2/3 == x/6
            return RatFunc.const(self.chart, int(text))
        if kind == "ident":
            self.advance()
            if text not in self.chart.coord_names:
                raise UnknownIdentifier(text, pos)
            return self.chart.coord(self.chart.index_of(text))
        if kind == "(":
            self.advance()
            value = self.expr()
            if self.tok[0] != ")":
                self.fail([")"])
            self.advance()
            return value
        self.fail(["number", "identifier", "("])


def parse_expr(text, chart):
    """Parse a component expression into a canonical RatFunc on `chart`."""
    return _Parser(text, chart).parse()


_OPS = {
    "add": lambda a, b: a + b,
    "sub": lambda a, b: a - b,
    "mul": lambda a, b: a * b,
    "div": lambda a, b: a / b,
    "pow": lambda a, b: a**b,
}


def ratfunc_arith(op, a, b):
    try:
        fn = _OPS[op]
    except KeyError:
        raise ValueError(f"unknown operation {op!r}") from None
    return fn(a, b)


def partial_deriv(f, i):
    return f.diff(i)


def is_zero(f):
    return f.is_zero()


def eval_at(f, point):
    return f.eval_at(point)
