"""Expression language: parsing, printing and lowering to exact classes.

Grammar, lowest precedence first::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := '-' unary | power
    power  := atom ['^' exponent]
    exponent := ['-'] INT | '{' ['-'] NUMBER '}'
    atom   := NUMBER | 's' | 'l' | 'h' | 'i' | '(' expr ')'
            | ('T' | 'tau' | 'sigma') '[' param ']' '(' expr ')'
            | ('dds' | 'D' | 'Dp') '(' expr ')'

A number with a trailing ``i`` is imaginary.  ``h^x`` (bare ``h`` only)
is a translation by the real ``x``; every other base takes an integer
exponent.
"""

import math
import re
from dataclasses import dataclass

import numpy as np

from . import delay as _delay
from . import poly as _poly
from . import series as _series
from .delay import DelayElement
from .errors import ClassOverflowError, DomainError, ParseError
from .poly import RatFun
from .series import SeriesH, SeriesL

DEFAULT_ORDER = 16

# --- AST ------------------------------------------------------------------------


@dataclass(frozen=True)
class Num:
    value: complex


@dataclass(frozen=True)
class Sym:
    name: str  # 's', 'l' or 'h'


@dataclass(frozen=True)
class HPow:
    exponent: float


@dataclass(frozen=True)
class BinOp:
    op: str
    left: object
    right: object


@dataclass(frozen=True)
class Neg:
    child: object


@dataclass(frozen=True)
class Pow:
    base: object
    exponent: int


@dataclass(frozen=True)
class Apply:
    op: str
    param: object  # complex or None
    child: object


PARAM_OPS = ("T", "tau", "sigma")
PLAIN_OPS = ("dds", "D", "Dp")

# --- lexer ----------------------------------------------------------------------

_NUMBER = re.compile(r"(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?")
_IDENT = re.compile(r"[A-Za-z_][A-Za-z_0-9]*")
_PUNCT = set("+-*/^()[]{},")


@dataclass(frozen=True)
class _Tok:
    kind: str  # 'num', 'ident', a punctuation char, or 'eof'
    text: str
    pos: int
    value: complex = 0j


def _tokenize(src):
    toks = []
    i, n = 0, len(src)
    while i < n:
        ch = src[i]
        if ch.isspace():
            i += 1
            continue
        m = _NUMBER.match(src, i)
        if m:
            text = m.group(0)
            val = float(text)
            if not math.isfinite(val):
                raise ParseError("number out of range", _bytepos(src, i))
            end = m.end()
            if end < n and src[end] == "i" and not (end + 1 < n and (src[end + 1].isalnum() or src[end + 1] == "_")):
                toks.append(_Tok("num", src[i:end + 1], i, complex(0, val)))
                i = end + 1
            else:
                toks.append(_Tok("num", text, i, complex(val)))
                i = end
            continue
        m = _IDENT.match(src, i)
        if m:
            toks.append(_Tok("ident", m.group(0), i))
            i = m.end()
            continue
        if ch in _PUNCT:
            toks.append(_Tok(ch, ch, i))
            i += 1
            continue
        raise ParseError(f"unexpected character {ch!r}", _bytepos(src, i))
    toks.append(_Tok("eof", "", n))
    return toks


def _bytepos(src, i):
    return len(src[:i].encode("utf-8"))


# --- parser ---------------------------------------------------------------------

_ATOM_START = {"number", "'s'", "'l'", "'h'", "'i'", "'('", "'-'"} | {
    f"'{o}'" for o in PARAM_OPS + PLAIN_OPS}


class _Parser:
    def __init__(self, src):
        self.src = src
        self.toks = _tokenize(src)
        self.k = 0

    @property
    def tok(self):
        return self.toks[self.k]

    def fail(self, expected, message=None):
        t = self.tok
        what = "end of input" if t.kind == "eof" else repr(t.text)
        raise ParseError(message or f"unexpected {what}", _bytepos(self.src, t.pos), expected)

    def take(self, kind):
        if self.tok.kind != kind:
            self.fail({f"'{kind}'"})
        t = self.tok
        self.k += 1
        return t

    def parse(self):
        e = self.expr()
        if self.tok.kind != "eof":
            self.fail({"'+'", "'-'", "'*'", "'/'", "'^'", "end of input"})
        return e

    def expr(self):
        e = self.term()
        while self.tok.kind in "+-" and self.tok.kind != "eof":
            op = self.take(self.tok.kind).kind
            e = BinOp(op, e, self.term())
        return e

    def term(self):
        e = self.unary()
        while self.tok.kind in ("*", "/"):
            op = self.take(self.tok.kind).kind
            e = BinOp(op, e, self.unary())
        return e

    def unary(self):
        if self.tok.kind == "-":
            self.take("-")
            return Neg(self.unary())
        return self.power()

    def power(self):
        raw_h = self.tok.kind == "ident" and self.tok.text == "h"
        base = self.atom()
        if self.tok.kind != "^":
            return base
        self.take("^")
        if self.tok.kind == "{":
            self.take("{")
            sign = self._sign()
            t = self.tok
            if t.kind != "num" or t.value.imag != 0:
                self.fail({"real number"} if raw_h else {"integer"})
            self.k += 1
            self.take("}")
        else:
            sign = self._sign()
            t = self.tok
            if t.kind != "num" or not t.text.isdigit():
                self.fail({"integer", "'{'"})
            self.k += 1
        value = sign * t.value.real
        if raw_h:
            return HPow(float(value))
        if not t.text.isdigit():
            raise ParseError("exponent must be an integer literal",
                             _bytepos(self.src, t.pos), {"integer"})
        return Pow(base, int(sign) * int(t.text))

    def _sign(self):
        if self.tok.kind == "-":
            self.take("-")
            return -1
        return 1

    def atom(self):
        t = self.tok
        if t.kind == "num":
            self.k += 1
            return Num(t.value)
        if t.kind == "(":
            self.take("(")
            e = self.expr()
            self.take(")")
            return e
        if t.kind == "ident":
            name = t.text
            if name in ("s", "l", "h"):
                self.k += 1
                return Sym(name)
            if name == "i":
                self.k += 1
                return Num(1j)
            if name in PARAM_OPS:
                self.k += 1
                self.take("[")
                p = self.param()
                self.take("]")
                return Apply(name, p, self._paren())
            if name in PLAIN_OPS:
                self.k += 1
                return Apply(name, None, self._paren())
        self.fail(_ATOM_START)

    def _paren(self):
        self.take("(")
        e = self.expr()
        self.take(")")
        return e

    def param(self):
        sign = self._sign()
        t = self.tok
        if t.kind != "num":
            self.fail({"number"})
        self.k += 1
        value = sign * t.value
        if value.imag == 0 and t.value.imag == 0 and self.tok.kind in "+-" and self.tok.kind != "eof":
            s2 = 1 if self.take(self.tok.kind).kind == "+" else -1
            u = self.tok
            if u.kind != "num" or u.value.imag == 0:
                self.fail({"imaginary number"})
            self.k += 1
            value = complex(value.real, s2 * u.value.imag)
        return complex(value)


def parse(src):
    """Parse expression text into an AST."""
    return _Parser(src).parse()


# --- printer --------------------------------------------------------------------

def _fmt_float(x):
    return repr(float(x))


def _fmt_param(z):
    z = complex(z)
    if z.imag == 0:
        return _fmt_float(z.real)
    if z.real == 0:
        return _fmt_float(z.imag) + "i"
    sign = "-" if z.imag < 0 else "+"
    return f"{_fmt_float(z.real)}{sign}{_fmt_float(abs(z.imag))}i"


def _fmt_num(z):
    z = complex(z)
    if z.imag == 0 and z.real >= 0 and math.copysign(1, z.real) > 0:
        return _fmt_float(z.real)
    if z.real == 0 and z.imag > 0 and math.copysign(1, z.real) > 0:
        return _fmt_float(z.imag) + "i"
    return f"({_fmt_param(z)})"


def to_text(e):
    """Fully parenthesized text that parses back to the same tree."""
    if isinstance(e, Num):
        return _fmt_num(e.value)
    if isinstance(e, Sym):
        return e.name
    if isinstance(e, HPow):
        return f"h^{{{_fmt_float(e.exponent)}}}"
    if isinstance(e, BinOp):
        return f"({to_text(e.left)} {e.op} {to_text(e.right)})"
    if isinstance(e, Neg):
        return f"(-{to_text(e.child)})"
    if isinstance(e, Pow):
        return f"({to_text(e.base)})^{{{e.exponent}}}"
    if isinstance(e, Apply):
        head = e.op if e.param is None else f"{e.op}[{_fmt_param(e.param)}]"
        return f"{head}({to_text(e.child)})"
    raise TypeError(f"not an expression node: {e!r}")


# --- conversions between classes ------------------------------------------------

def ratfun_to_series_l(r, order):
    """Expand ``r(1/l)`` as a power series in l.

    Requires ``deg num <= deg den``: an element with a pole at ``l = 0``
    (such as s itself) has no power series in l.
    """
    r = _poly.ratfun(r)
    m = r.den.degree
    if r.num.degree > m:
        raise ClassOverflowError("element is not a power series in l")
    num = np.zeros(m + 1, dtype=complex)
    if not r.num.is_zero:
        num[m - r.num.degree: m + 1] = r.num.coeffs[::-1]
    den = r.den.coeffs[::-1]
    n = np.zeros(order + 1, dtype=complex)
    d = np.zeros(order + 1, dtype=complex)
    n[: min(m + 1, order + 1)] = num[: order + 1]
    d[: min(m + 1, order + 1)] = den[: order + 1]
    return SeriesL(_poly._series_div(n, d, order + 1))


def to_series_h(x, order):
    """View a constant-coefficient polynomial in h as a SeriesH."""
    if isinstance(x, SeriesH):
        return x
    e = DelayElement.of(x)
    c = e.h_coefficients()
    if c is None:
        raise ClassOverflowError("not a polynomial in h with constant coefficients")
    if len(c) > order + 1 and any(v != 0 for v in c[order + 1:]):
        order = len(c) - 1
    return SeriesH(c, order)


def series_h_to_delay(a):
    """Embed a truncated h-series as the corresponding finite DelayElement."""
    return DelayElement((float(n), RatFun(c)) for n, c in enumerate(a.coeffs) if c != 0)


def _as_delay(x):
    if isinstance(x, (RatFun, DelayElement)):
        return DelayElement.of(x)
    return None


# --- lowering -------------------------------------------------------------------

def lower(e, order=DEFAULT_ORDER):
    """Evaluate an AST to a RatFun, DelayElement, SeriesL or SeriesH.

    RatFun results stay RatFun; anything touching a translation becomes a
    DelayElement; division by a multi-term polynomial in h goes through a
    SeriesH truncated at ``order``.
    """
    return _simplify(_Lower(order).run(e))


def _simplify(x):
    # a DelayElement living entirely at delay 0 is a plain rational function
    if isinstance(x, DelayElement) and x.delays in ((), (0.0,)):
        return x.part(0.0)
    return x


class _Lower:
    def __init__(self, order):
        self.order = int(order)

    def run(self, e):
        if isinstance(e, Num):
            return RatFun(e.value)
        if isinstance(e, Sym):
            if e.name == "s":
                return _poly.S_OP
            if e.name == "l":
                return _poly.L_OP
            return _delay.h_pow(1.0)
        if isinstance(e, HPow):
            return _delay.h_pow(e.exponent)
        if isinstance(e, Neg):
            x = self.run(e.child)
            return -x
        if isinstance(e, BinOp):
            return self.binop(e.op, self.run(e.left), self.run(e.right))
        if isinstance(e, Pow):
            return self.power(self.run(e.base), e.exponent)
        if isinstance(e, Apply):
            return self.apply(e.op, e.param, self.run(e.child))
        raise TypeError(f"not an expression node: {e!r}")

    # arithmetic

    def binop(self, op, a, b):
        if isinstance(a, RatFun) and isinstance(b, RatFun):
            return {"+": a.__add__, "-": a.__sub__, "*": a.__mul__,
                    "/": a.__truediv__}[op](b)
        if isinstance(a, SeriesL) or isinstance(b, SeriesL):
            return self._series_l_op(op, a, b)
        if isinstance(a, SeriesH) or isinstance(b, SeriesH):
            return self._series_h_op(op, a, b)
        a, b = DelayElement.of(a), DelayElement.of(b)
        if op == "+":
            return _simplify(a + b)
        if op == "-":
            return _simplify(a - b)
        if op == "*":
            return _simplify(a * b)
        if b.is_zero:
            raise DomainError("division by zero")
        if len(b.parts) == 1:
            return _simplify(a / b)
        # a multi-term divisor: only a unit polynomial in h is invertible
        return self._series_h_op("/", a, b)

    def _series_h_op(self, op, a, b):
        a, b = to_series_h(a, self.order), to_series_h(b, self.order)
        if op == "+":
            return a + b
        if op == "-":
            return a - b
        if op == "*":
            return a * b
        if b.coeffs[0] == 0:
            raise ClassOverflowError("divisor is not a unit power series in h")
        return a * _series.invert_unit(b)

    def _series_l_op(self, op, a, b):
        def conv(x):
            if isinstance(x, SeriesL):
                return x
            if isinstance(x, RatFun):
                return ratfun_to_series_l(x, self.order)
            raise ClassOverflowError("cannot combine a series in l with this element")
        a, b = conv(a), conv(b)
        if op == "+":
            return a + b
        if op == "-":
            return a - b
        if op == "*":
            return a * b
        if b.coeffs[0] == 0:
            raise ClassOverflowError("divisor is not a unit power series in l")
        return a * _series.invert_unit(b)

    def power(self, x, n):
        if isinstance(x, RatFun):
            if n < 0 and x.is_zero:
                raise DomainError("division by zero")
            return x ** n
        if isinstance(x, DelayElement):
            if n < 0 and len(x.parts) != 1:
                return self.binop("/", RatFun(1.0), self.power(x, -n))
            return _simplify(x ** n)
        out = type(x)([1.0], x.order)
        base = x if n >= 0 else _series.invert_unit(x)
        for _ in range(abs(n)):
            out = out * base
        return out

    # operators

    def apply(self, op, param, x):
        if op == "T":
            return self._exp_shift(complex(param), x)
        if op == "tau":
            return self._qscale(_real_param(param, "tau"), x)
        if op == "sigma":
            return self._mahler(_int_param(param), x)
        if op == "dds":
            return self._dds(x)
        if op == "D":
            return self._ddl(x)
        if op == "Dp":
            return self._ddh(x)
        raise DomainError(f"unknown operator {op!r}")

    def _exp_shift(self, alpha, x):
        if isinstance(x, RatFun):
            return _poly.substitute(x, shift=alpha)
        if isinstance(x, DelayElement):
            return _delay.exp_shift(alpha, x)
        return _series.exp_shift(alpha, x)

    def _qscale(self, q, x):
        if q <= 0:
            raise DomainError("tau needs a positive real parameter")
        if isinstance(x, RatFun):
            return _poly.substitute(x, scale=q)
        if isinstance(x, DelayElement):
            return _simplify(_delay.qscale(q, x))
        if isinstance(x, SeriesL):
            return _series.qscale(q, x)
        d = 1 / q
        if abs(d - round(d)) < 1e-12 and round(d) >= 2:
            return _series.mahler(round(d), x)
        if abs(q - 1) < 1e-15:
            return x
        raise ClassOverflowError("tau with 1/q not an integer leaves the h-series class")

    def _mahler(self, d, x):
        if isinstance(x, RatFun):
            return _poly.substitute(x, scale=1.0 / d)
        if isinstance(x, DelayElement):
            return _simplify(_delay.mahler(d, x))
        if isinstance(x, SeriesL):
            return _series.qscale(1.0 / d, x)
        return _series.mahler(d, x)

    def _dds(self, x):
        if isinstance(x, RatFun):
            return _poly.dds(x)
        if isinstance(x, DelayElement):
            return _simplify(_delay.dds(x))
        return _series.dds(x)

    def _ddl(self, x):
        minus_s2 = RatFun(_poly.Poly([0, 0, -1.0]))
        if isinstance(x, RatFun):
            return minus_s2 * _poly.dds(x)
        if isinstance(x, DelayElement):
            return _simplify(_delay.dds(x) * minus_s2)
        if isinstance(x, SeriesL):
            return _series.ddl(x)
        raise ClassOverflowError("D leaves the h-series class")

    def _ddh(self, x):
        if isinstance(x, (RatFun, DelayElement)):
            return _simplify(_delay.ddh(x))
        if isinstance(x, SeriesH):
            return _series.ddh(x)
        raise ClassOverflowError("Dp is not defined on series in l")


def _real_param(p, name):
    p = complex(p)
    if p.imag != 0:
        raise DomainError(f"{name} needs a real parameter")
    return p.real


def _int_param(p):
    d = _real_param(p, "sigma")
    if d != int(d) or d < 2:
        raise DomainError("sigma needs an integer parameter >= 2")
    return int(d)


def evaluate(src, order=DEFAULT_ORDER):
    """Parse and lower in one step."""
    return lower(parse(src), order)


def distance(a, b):
    """Exact-class distance, or None when the classes are incomparable."""
    if isinstance(a, SeriesL) or isinstance(b, SeriesL):
        try:
            order = min(x.order for x in (a, b) if isinstance(x, SeriesL))
            a2 = a if isinstance(a, SeriesL) else ratfun_to_series_l(a, order)
            b2 = b if isinstance(b, SeriesL) else ratfun_to_series_l(b, order)
        except (ClassOverflowError, AttributeError):
            return None
        return a2.distance(b2)
    if isinstance(a, SeriesH) or isinstance(b, SeriesH):
        try:
            order = min(x.order for x in (a, b) if isinstance(x, SeriesH))
            return to_series_h(a, order).distance(to_series_h(b, order))
        except ClassOverflowError:
            return None
    return DelayElement.of(a).distance(DelayElement.of(b))
