"""A small expression language for symbols, e.g. ``exp(sin(z))`` or ``e^(2 pi i/5) z``.

Expressions are parsed with :mod:`ast` after light rewriting (``^`` to
``**``, ``i`` as the imaginary unit, implicit multiplication).  Rational
expressions are tracked exactly and returned as a linear fractional map or
a :class:`~wco.symbols.RationalFunction`; anything involving ``exp``,
``sin`` or ``cos`` becomes an :class:`~wco.symbols.AnalyticFunction`.
"""

from __future__ import annotations

import ast
import cmath
import io
import math
import re
import tokenize

import numpy as np
from numpy.polynomial import polynomial as P

from .errors import ConstraintError
from .series import TruncatedSeries, series_div, series_exp, series_sin
from .symbols import AnalyticFunction, LinearFractionalMap, RationalFunction

_CONSTANTS = {"pi": math.pi, "e": math.e, "i": 1j, "j": 1j}


class _Expr:
    """Evaluator, series builder and (when rational) exact numerator/denominator."""

    def __init__(self, fn, series, rat=None, radius=math.inf):
        self.fn, self.series, self.rat, self.radius = fn, series, rat, radius

    @classmethod
    def const(cls, v):
        v = complex(v)
        return cls(lambda z: np.full(np.shape(z), v, dtype=complex),
                   lambda n: TruncatedSeries.constant(v, n),
                   (np.array([v]), np.array([1.0 + 0j])))

    @classmethod
    def var(cls):
        return cls(lambda z: np.asarray(z, dtype=complex),
                   lambda n: TruncatedSeries.identity(n),
                   (np.array([0j, 1.0]), np.array([1.0 + 0j])))

    @property
    def constant_value(self):
        if self.rat is not None and self.rat[0].size <= 1 and self.rat[1].size <= 1:
            return complex(self.rat[0][0] / self.rat[1][0])
        return None

    def __add__(self, o):
        rat = None
        if self.rat and o.rat:
            (a, b), (c, d) = self.rat, o.rat
            rat = _trim(P.polyadd(P.polymul(a, d), P.polymul(c, b)), P.polymul(b, d))
        return _Expr(lambda z: self.fn(z) + o.fn(z), lambda n: self.series(n) + o.series(n),
                     rat, min(self.radius, o.radius))

    def __neg__(self):
        rat = None if self.rat is None else (-self.rat[0], self.rat[1])
        return _Expr(lambda z: -self.fn(z), lambda n: -self.series(n), rat, self.radius)

    def __mul__(self, o):
        rat = None
        if self.rat and o.rat:
            rat = _trim(P.polymul(self.rat[0], o.rat[0]), P.polymul(self.rat[1], o.rat[1]))
        return _Expr(lambda z: self.fn(z) * o.fn(z), lambda n: self.series(n) * o.series(n),
                     rat, min(self.radius, o.radius))

    def __truediv__(self, o):
        if o.rat is None:
            raise ValueError("division is only supported by rational expressions")
        num, den = o.rat
        if not np.any(num):
            raise ValueError("division by zero")
        rat = None
        if self.rat:
            rat = _trim(P.polymul(self.rat[0], den), P.polymul(self.rat[1], num))
        roots = P.polyroots(num) if num.size > 1 else np.zeros(0)
        radius = min(self.radius, float(np.abs(roots).min()) if roots.size else math.inf)

        def series(n):
            return self.series(n) * series_div(TruncatedSeries.from_coeffs(den, n),
                                               TruncatedSeries.from_coeffs(num, n))

        return _Expr(lambda z: self.fn(z) / o.fn(z), series, rat, radius)

    def power(self, k):
        if k < 0:
            return _Expr.const(1.0) / self.power(-k)
        out = _Expr.const(1.0)
        for _ in range(k):
            out = out * self
        return out


def _trim(num, den):
    num = np.trim_zeros(np.asarray(num, dtype=complex), "b")
    den = np.trim_zeros(np.asarray(den, dtype=complex), "b")
    return (num if num.size else np.zeros(1, dtype=complex)), den


def _unary(name, x):
    if name == "exp":
        return _Expr(lambda z: np.exp(x.fn(z)), lambda n: series_exp(x.series(n)), None, x.radius)
    if name == "sin":
        return _Expr(lambda z: np.sin(x.fn(z)), lambda n: series_sin(x.series(n)), None, x.radius)
    if name == "cos":
        def series(n):
            s = x.series(n)
            return (series_exp(s * 1j) + series_exp(s * -1j)) * 0.5
        return _Expr(lambda z: np.cos(x.fn(z)), series, None, x.radius)
    raise ValueError(f"unknown function {name!r}")


_FUNCTIONS = ("exp", "sin", "cos")


def _preprocess(text):
    s = text.strip()
    for a, b in (("^", "**"), ("·", "*"), ("−", "-"), ("π", " pi "), ("{", "("), ("}", ")")):
        s = s.replace(a, b)
    # a numeric literal followed by i, e.g. 2i or 0.5i
    s = re.sub(r"(?<![\w.])(\d+\.?\d*|\.\d+)i\b", r"\1j", s)
    try:
        toks = list(tokenize.generate_tokens(io.StringIO(s).readline))
    except (tokenize.TokenError, IndentationError) as exc:
        raise ValueError(f"cannot tokenize {text!r}") from exc
    out, prev = [], None
    for tok in toks:
        if tok.type in (tokenize.NEWLINE, tokenize.NL, tokenize.ENDMARKER):
            continue
        operand_start = tok.type in (tokenize.NUMBER, tokenize.NAME) or tok.string == "("
        if prev is not None and operand_start:
            operand_end = prev.type == tokenize.NUMBER or prev.string == ")" or (
                prev.type == tokenize.NAME and prev.string not in _FUNCTIONS)
            if operand_end:
                out.append("*")
        out.append(tok.string)
        prev = tok
    return " ".join(out)


def _walk(node):
    if isinstance(node, ast.Expression):
        return _walk(node.body)
    if isinstance(node, ast.Constant) and isinstance(node.value, (int, float, complex)) \
            and not isinstance(node.value, bool):
        return _Expr.const(node.value)
    if isinstance(node, ast.Name):
        if node.id == "z":
            return _Expr.var()
        if node.id in _CONSTANTS:
            return _Expr.const(_CONSTANTS[node.id])
        raise ValueError(f"unknown name {node.id!r}")
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        x = _walk(node.operand)
        return -x if isinstance(node.op, ast.USub) else x
    if isinstance(node, ast.BinOp):
        left, right = _walk(node.left), _walk(node.right)
        if isinstance(node.op, ast.Add):
            return left + right
        if isinstance(node.op, ast.Sub):
            return left + (-right)
        if isinstance(node.op, ast.Mult):
            return left * right
        if isinstance(node.op, ast.Div):
            return left / right
        if isinstance(node.op, ast.Pow):
            k = right.constant_value
            if k is None:
                base = left.constant_value
                if base is None or base == 0:
                    raise ValueError("non-constant exponents need a constant base")
                return _unary("exp", right * _Expr.const(cmath.log(base)))
            if abs(k.imag) == 0 and float(k.real).is_integer():
                return left.power(int(k.real))
            base = left.constant_value
            if base is None:
                raise ValueError("only integer powers of non-constant expressions are supported")
            return _Expr.const(base ** k)
    if isinstance(node, ast.Call) and isinstance(node.func, ast.Name) and len(node.args) == 1 \
            and not node.keywords:
        return _unary(node.func.id, _walk(node.args[0]))
    raise ValueError(f"unsupported syntax: {ast.dump(node)[:60]}")


def parse_symbol(text):
    """Parse an expression in ``z`` into the most specific closed-form symbol.

    Raises :class:`ValueError` on malformed or unsupported input.
    """
    try:
        tree = ast.parse(_preprocess(text), mode="eval")
    except SyntaxError as exc:
        raise ValueError(f"cannot parse {text!r}: {exc.msg}") from None
    expr = _walk(tree)
    if expr.rat is None:
        return AnalyticFunction(expr.fn, expr.series, expr.radius, text)
    num, den = expr.rat
    scale = den[np.argmax(np.abs(den))]
    num, den = num / scale, den / scale
    if num.size <= 2 and den.size <= 2 and (num.size == 2 or den.size == 2):
        n = np.pad(num, (0, 2 - num.size))
        d = np.pad(den, (0, 2 - den.size))
        try:
            return LinearFractionalMap(n[1], n[0], d[1], d[0])
        except ConstraintError:
            pass
    return RationalFunction(num, den)
