"""A small closed-form language for symmetric 2-differentials.

Input files look like::

    # monodromy of the exact decomposition
    param alpha : irrational
    chart z1 z2
    w = (1+z2)^alpha * d(z1) * d(z1*(1+z2))

Every subexpression has a differential degree: constants and chart variables
have degree 0, ``d(e)`` has degree 1, products add degrees and sums require
equal degrees.  A differential statement must have degree 2.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from gmpy2 import mpq

from .coeff import ONE, parse_rational, scalar
from .errors import (
    ExpansionError,
    IrrationalConstant,
    NonUnitBase,
    NotAUnit,
    ParseError,
    SymbolicExponentInNumericContext,
)
from .series import DEFAULT_ORDER, NoExactRoot, Series2, ps_exp, ps_inv, ps_pow
from .surface import OneForm2, SymDiff2

__all__ = [
    "Expr",
    "Num",
    "Var",
    "Add",
    "Mul",
    "Pow",
    "ParamRef",
    "Exp",
    "D",
    "ParamDecl",
    "Document",
    "parse_expr",
    "parse_document",
    "degree",
    "expand_expr_at",
    "expand_scalar_at",
    "substitute_power",
]


# ---------------------------------------------------------------------------
# AST


class Expr:
    """Base class for expression nodes."""

    pos: tuple


@dataclass(frozen=True)
class Num(Expr):
    value: object
    pos: tuple = field(default=(0, 0), compare=False, repr=False)

    def __str__(self):
        v = self.value
        return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


@dataclass(frozen=True)
class Var(Expr):
    index: int
    name: str = ""
    pos: tuple = field(default=(0, 0), compare=False, repr=False)

    def __str__(self):
        return self.name or f"z{self.index}"


@dataclass(frozen=True)
class ParamRef:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Add(Expr):
    terms: tuple  # of (sign, Expr)
    pos: tuple = field(default=(0, 0), compare=False, repr=False)

    def __str__(self):
        out = ""
        for k, (sign, t) in enumerate(self.terms):
            if k == 0:
                out = ("-" if sign < 0 else "") + _paren(t, Add)
            else:
                out += (" - " if sign < 0 else " + ") + _paren(t, Add)
        return out


@dataclass(frozen=True)
class Mul(Expr):
    factors: tuple
    pos: tuple = field(default=(0, 0), compare=False, repr=False)

    def __str__(self):
        return "*".join(_paren(f, Mul) for f in self.factors)


@dataclass(frozen=True)
class Pow(Expr):
    base: Expr
    exponent: object  # mpq or ParamRef
    pos: tuple = field(default=(0, 0), compare=False, repr=False)

    def __str__(self):
        e = self.exponent
        if isinstance(e, ParamRef):
            es = e.name
        elif e.denominator == 1 and e >= 0:
            es = str(e.numerator)
        else:
            es = f"({e.numerator}/{e.denominator})" if e.denominator != 1 else f"({e.numerator})"
        return f"{_paren(self.base, Pow)}^{es}"


@dataclass(frozen=True)
class Exp(Expr):
    arg: Expr
    pos: tuple = field(default=(0, 0), compare=False, repr=False)

    def __str__(self):
        return f"exp({self.arg})"


@dataclass(frozen=True)
class D(Expr):
    arg: Expr
    pos: tuple = field(default=(0, 0), compare=False, repr=False)

    def __str__(self):
        return f"d({self.arg})"


def _paren(e: Expr, ctx) -> str:
    if isinstance(e, Add) or (ctx is Pow and isinstance(e, (Mul, Pow))):
        return f"({e})"
    if ctx is Pow and isinstance(e, Num) and (e.value < 0 or e.value.denominator != 1):
        return f"({e})"
    return str(e)


@dataclass(frozen=True)
class ParamDecl:
    name: str
    value: object = None  # mpq, or None when irrational

    @property
    def irrational(self) -> bool:
        return self.value is None


@dataclass(frozen=True)
class Document:
    expr: Expr
    params: dict
    chart: tuple = ("z1", "z2")

    def __str__(self):
        lines = []
        for name in sorted(self.params):
            d = self.params[name]
            lines.append(f"param {name} : irrational" if d.irrational else f"param {name} : = {d.value}")
        lines.append(f"chart {self.chart[0]} {self.chart[1]}")
        lines.append(f"w = {self.expr}")
        return "\n".join(lines)


# ---------------------------------------------------------------------------
# tokenizer and parser

_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+)|(?P<ident>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*/^():=,]))"
)
_NORMALIZE = str.maketrans({"−": "-", "·": "*", "×": "*"})


@dataclass
class _Tok:
    kind: str
    text: str
    line: int
    col: int


def _tokenize(text: str, line: int = 1) -> list:
    text = text.translate(_NORMALIZE)
    toks = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            col = pos + len(text[pos:]) - len(text[pos:].lstrip()) + 1
            raise ParseError(f"unexpected character {text[col - 1]!r}", line, col)
        kind = m.lastgroup
        col = m.start(kind) + 1
        toks.append(_Tok(kind, m.group(kind), line, col))
        pos = m.end()
    toks.append(_Tok("end", "", line, len(text) + 1))
    return toks


class _Parser:
    def __init__(self, toks, params: dict, chart: tuple):
        self.toks = toks
        self.i = 0
        self.params = params
        self.chart = chart

    def peek(self) -> _Tok:
        return self.toks[self.i]

    def next(self) -> _Tok:
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, text: str) -> _Tok:
        t = self.next()
        if t.text != text:
            raise ParseError(f"expected {text!r}, found {t.text or 'end of line'!r}", t.line, t.col)
        return t

    def error(self, msg, tok=None):
        tok = tok or self.peek()
        return ParseError(msg, tok.line, tok.col)

    def expr(self) -> Expr:
        start = self.peek()
        terms = []
        sign = 1
        if start.text in "+-" and start.kind == "op":
            self.next()
            sign = -1 if start.text == "-" else 1
        terms.append((sign, self.term()))
        while self.peek().kind == "op" and self.peek().text in "+-":
            sign = -1 if self.next().text == "-" else 1
            terms.append((sign, self.term()))
        if len(terms) == 1 and terms[0][0] > 0:
            return terms[0][1]
        if len(terms) == 1:
            t = terms[0][1]
            return Mul((Num(mpq(-1)),) + (t.factors if isinstance(t, Mul) else (t,)), (start.line, start.col))
        return Add(tuple(terms), (start.line, start.col))

    def term(self) -> Expr:
        start = self.peek()
        factors = [self.factor()]
        while self.peek().text in ("*", "/") and self.peek().kind == "op":
            op = self.next()
            f = self.factor()
            if op.text == "/":
                f = Pow(f, mpq(-1), (op.line, op.col))
            factors.append(f)
        if len(factors) == 1:
            return factors[0]
        return Mul(tuple(factors), (start.line, start.col))

    def factor(self) -> Expr:
        start = self.peek()
        base = self.base()
        if self.peek().text == "^":
            self.next()
            return Pow(base, self.exponent(), (start.line, start.col))
        return base

    def rational(self) -> mpq:
        sign = 1
        t = self.peek()
        if t.text == "-":
            self.next()
            sign = -1
        t = self.next()
        if t.kind != "num":
            raise ParseError(f"expected an integer, found {t.text or 'end of line'!r}", t.line, t.col)
        num = int(t.text)
        den = 1
        if self.peek().text == "/" and self.toks[self.i + 1].kind == "num":
            self.next()
            d = self.next()
            if d.kind != "num" or int(d.text) == 0:
                raise ParseError("expected a positive integer denominator", d.line, d.col)
            den = int(d.text)
        return mpq(sign * num, den)

    def exponent(self):
        t = self.peek()
        if t.kind == "ident":
            self.next()
            if t.text not in self.params:
                raise self.error(f"undeclared parameter {t.text!r}", t)
            return ParamRef(t.text)
        if t.text == "(":
            self.next()
            if self.peek().kind == "ident":
                inner = self.exponent()
            else:
                inner = self.rational()
            self.expect(")")
            return inner
        return self.rational()

    def base(self) -> Expr:
        t = self.peek()
        pos = (t.line, t.col)
        if t.kind == "num":
            return Num(self.rational(), pos)
        if t.text == "(":
            self.next()
            e = self.expr()
            self.expect(")")
            return e
        if t.kind == "ident":
            self.next()
            if t.text in ("exp", "d") and self.peek().text == "(":
                self.next()
                arg = self.expr()
                self.expect(")")
                return Exp(arg, pos) if t.text == "exp" else D(arg, pos)
            if t.text == self.chart[0]:
                return Var(1, t.text, pos)
            if t.text == self.chart[1]:
                return Var(2, t.text, pos)
            if t.text in self.params:
                raise self.error(f"parameter {t.text!r} may only appear as an exponent", t)
            raise self.error(f"unknown identifier {t.text!r}", t)
        raise self.error(f"unexpected {t.text or 'end of line'!r}", t)


def degree(e: Expr) -> int:
    """Differential degree; raises ParseError when the expression is ill-formed."""
    if isinstance(e, (Num, Var)):
        return 0
    if isinstance(e, D):
        if degree(e.arg) != 0:
            raise ParseError("d() of a differential", *e.pos)
        return 1
    if isinstance(e, Exp):
        if degree(e.arg) != 0:
            raise ParseError("exp() of a differential", *e.pos)
        return 0
    if isinstance(e, Mul):
        return sum(degree(f) for f in e.factors)
    if isinstance(e, Add):
        degs = {degree(t) for _, t in e.terms}
        if len(degs) != 1:
            raise ParseError(f"sum mixes differential degrees {sorted(degs)}", *e.pos)
        return degs.pop()
    if isinstance(e, Pow):
        db = degree(e.base)
        if db == 0:
            return 0
        ex = e.exponent
        if isinstance(ex, ParamRef) or ex.denominator != 1 or ex < 0:
            raise ParseError("a differential may only be raised to a nonnegative integer power", *e.pos)
        return db * int(ex)
    raise TypeError(f"not an expression node: {e!r}")


def parse_expr(text: str, params: dict | None = None, chart=("z1", "z2"), expect_degree: int | None = 2, line: int = 1) -> Expr:
    """Parse one expression; by default it must be a 2-differential."""
    params = params or {}
    p = _Parser(_tokenize(text, line), params, tuple(chart))
    e = p.expr()
    t = p.peek()
    if t.kind != "end":
        raise ParseError(f"unexpected {t.text!r}", t.line, t.col)
    if expect_degree is not None:
        deg = degree(e)
        if deg != expect_degree:
            raise ParseError(
                f"expression has differential degree {deg}; a {expect_degree}-differential needs "
                f"exactly {expect_degree} d() factors per term",
                line,
                1,
            )
    return e


_IDENT = re.compile(r"[A-Za-z_][A-Za-z_0-9]*\Z")


def parse_document(text: str) -> Document:
    """Parse a whole input file: parameter declarations, chart, and ``w = ...``."""
    params: dict = {}
    chart = ("z1", "z2")
    expr = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].translate(_NORMALIZE)
        stripped = line.strip()
        if not stripped:
            continue
        head = stripped.split(None, 1)[0]
        col0 = line.index(head) + 1
        if head == "param":
            m = re.match(r"\s*param\s+([A-Za-z_][A-Za-z_0-9]*)\s*(?::\s*)?(.*)$", line)
            if not m:
                raise ParseError("malformed parameter declaration", lineno, col0)
            name, rest = m.group(1), m.group(2).strip()
            if name in params:
                raise ParseError(f"parameter {name!r} declared twice", lineno, col0)
            if name in chart or name in ("exp", "d", "w"):
                raise ParseError(f"reserved name {name!r}", lineno, col0)
            if rest == "irrational":
                params[name] = ParamDecl(name, None)
            elif rest.startswith("="):
                try:
                    value = parse_rational(rest[1:])
                except ValueError as exc:
                    raise ParseError(str(exc), lineno, line.index("=") + 2) from None
                params[name] = ParamDecl(name, value)
            else:
                raise ParseError("expected ': irrational' or '= RATIONAL'", lineno, col0)
        elif head == "chart":
            parts = stripped.split()
            if len(parts) != 3 or not all(_IDENT.match(x) for x in parts[1:]) or parts[1] == parts[2]:
                raise ParseError("chart needs two distinct variable names", lineno, col0)
            chart = (parts[1], parts[2])
        elif head == "w" or head.startswith("w="):
            m = re.match(r"(\s*w\s*=)", line)
            if not m:
                raise ParseError("expected 'w = expression'", lineno, col0)
            if expr is not None:
                raise ParseError("more than one differential statement", lineno, col0)
            body = " " * len(m.group(1)) + line[m.end():]
            expr = parse_expr(body, params, chart, 2, lineno)
        else:
            raise ParseError(f"unknown statement {head!r}", lineno, col0)
    if expr is None:
        raise ParseError("no 'w = ...' statement found", 0, 0)
    return Document(expr, params, chart)


# ---------------------------------------------------------------------------
# expansion into series


def _exponent_value(ex, params: dict):
    if isinstance(ex, ParamRef):
        decl = params.get(ex.name)
        if decl is None:
            raise ExpansionError(f"undeclared parameter {ex.name!r}")
        if decl.irrational:
            raise SymbolicExponentInNumericContext(
                f"parameter {ex.name!r} is irrational; it has no numeric expansion"
            )
        return decl.value
    return ex


def expand_scalar_at(e: Expr, point, order: int, params: dict | None = None) -> Series2:
    """Taylor expansion of a degree-0 expression at ``point`` (in recentered coordinates)."""
    params = params or {}
    p1, p2 = scalar(point[0]), scalar(point[1])
    return _scalar(e, (p1, p2), order, params)


def _scalar(e: Expr, pt, n: int, params) -> Series2:
    if isinstance(e, Num):
        return Series2.const(e.value, n)
    if isinstance(e, Var):
        return Series2.var(e.index, n) + pt[e.index - 1]
    if isinstance(e, Add):
        total = Series2.zero(n)
        for sign, t in e.terms:
            s = _scalar(t, pt, n, params)
            total = total + s if sign > 0 else total - s
        return total
    if isinstance(e, Mul):
        out = Series2.const(1, n)
        for f in e.factors:
            out = out * _scalar(f, pt, n, params)
        return out
    if isinstance(e, Pow):
        base = _scalar(e.base, pt, n, params)
        r = _exponent_value(e.exponent, params)
        if r.denominator == 1 and r >= 0:
            return base ** int(r)
        if not base.is_unit():
            raise NonUnitBase(f"base {e.base} vanishes at the point; cannot raise it to {r}")
        if r.denominator == 1:
            return ps_inv(base) ** int(-r)
        try:
            return ps_pow(base, r)
        except NoExactRoot as exc:
            raise IrrationalConstant(str(exc)) from None
    if isinstance(e, Exp):
        arg = _scalar(e.arg, pt, n, params)
        if arg.constant:
            raise IrrationalConstant(f"exp({e.arg}) has value e^({arg.constant}) at the point")
        return ps_exp(arg)
    if isinstance(e, D):
        raise ExpansionError("d() in a scalar context")
    raise TypeError(f"not an expression node: {e!r}")


def _form(e: Expr, pt, n: int, params):
    """Expand to Series2 (degree 0), OneForm2 (degree 1) or SymDiff2 (degree 2)."""
    deg = degree(e)
    if deg == 0:
        return _scalar(e, pt, n, params)
    if isinstance(e, D):
        s = _scalar(e.arg, pt, n, params)
        return OneForm2(s.deriv(1), s.deriv(2))
    if isinstance(e, Add):
        total = None
        for sign, t in e.terms:
            f = _form(t, pt, n, params)
            if sign < 0:
                f = f.scale(-1)
            total = f if total is None else total + f
        return total
    if isinstance(e, Mul):
        acc = Series2.const(1, n)
        for fac in e.factors:
            acc = _mul_forms(acc, _form(fac, pt, n, params))
        return acc
    if isinstance(e, Pow):
        base = _form(e.base, pt, n, params)
        acc = Series2.const(1, n)
        for _ in range(int(e.exponent)):
            acc = _mul_forms(acc, base)
        return acc
    raise ExpansionError(f"cannot expand {e}")


def _add_forms(a, b):
    if isinstance(a, OneForm2):
        return OneForm2(a.p + b.p, a.q + b.q)
    return a + b


OneForm2.__add__ = _add_forms  # sums of 1-forms are needed only while expanding


def _mul_forms(a, b):
    if isinstance(a, Series2):
        return b * a if isinstance(b, Series2) else b.scale(a)
    if isinstance(b, Series2):
        return a.scale(b)
    if isinstance(a, OneForm2) and isinstance(b, OneForm2):
        return a * b
    raise ExpansionError("product exceeds differential degree 2")


def expand_expr_at(e: Expr, point=(0, 0), order: int = DEFAULT_ORDER, params: dict | None = None) -> SymDiff2:
    """Exact expansion of a 2-differential expression at ``point`` to ``order``.

    Scalars are expanded one degree further so that ``d()`` loses nothing.
    """
    params = params or {}
    if degree(e) != 2:
        raise ExpansionError("expression is not a 2-differential")
    pt = (scalar(point[0]), scalar(point[1]))
    w = _form(e, pt, order + 1, params)
    return w.truncate(order).truncate(order)


def substitute_power(e: Expr, var: int, q: int) -> Expr:
    """Replace chart variable ``var`` by ``var^q`` everywhere (a ramified cover)."""
    if isinstance(e, Var):
        return Pow(e, mpq(q), e.pos) if e.index == var else e
    if isinstance(e, Num):
        return e
    if isinstance(e, Add):
        return Add(tuple((s, substitute_power(t, var, q)) for s, t in e.terms), e.pos)
    if isinstance(e, Mul):
        return Mul(tuple(substitute_power(f, var, q) for f in e.factors), e.pos)
    if isinstance(e, Pow):
        return Pow(substitute_power(e.base, var, q), e.exponent, e.pos)
    if isinstance(e, Exp):
        return Exp(substitute_power(e.arg, var, q), e.pos)
    if isinstance(e, D):
        return D(substitute_power(e.arg, var, q), e.pos)
    raise TypeError(f"not an expression node: {e!r}")
