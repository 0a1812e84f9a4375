"""
Expression language for analytic functions on the unit disk.

Grammar (whitespace insensitive)::

    expr    := term (('+' | '-') term)*
    term    := unary (('*' | '/') unary)*
    unary   := ('-' | '+') unary | power
    power   := atom ('^' exponent)*          # exponent must be constant
    atom    := NUMBER ['i'] | 'i' | 'z' | 'pi' | '(' expr ')'
             | exp(expr) | log(expr) | sqrt(expr) | pow(expr, expr)
             | mobius(expr, expr, expr, expr)

``mobius(a, b, c, d)`` denotes ``(a*z + b)/(c*z + d)``.  ``^`` and ``pow``
only accept exponents that fold to a constant, so every expression is
single-valued up to the principal branches of ``log``, ``sqrt`` and
non-integer powers.

Trees are immutable.  Python operators on nodes build new trees, which is
how the catalog functions in the tests are written.
"""
import math
from dataclasses import dataclass, field

import numpy as np

from . import jets
from .errors import DomainError, ExprSyntaxError, NonConstantExponent
from .jets import Jet

SHEAR_ORDER = 64


class Expr:
    """Base class for expression nodes."""

    name = None

    def __add__(self, other):
        return Add(self, as_expr(other))

    def __radd__(self, other):
        return Add(as_expr(other), self)

    def __sub__(self, other):
        return Sub(self, as_expr(other))

    def __rsub__(self, other):
        return Sub(as_expr(other), self)

    def __mul__(self, other):
        return Mul(self, as_expr(other))

    def __rmul__(self, other):
        return Mul(as_expr(other), self)

    def __truediv__(self, other):
        return Div(self, as_expr(other))

    def __rtruediv__(self, other):
        return Div(as_expr(other), self)

    def __neg__(self):
        return Neg(self)

    def __pow__(self, exponent):
        if isinstance(exponent, Expr):
            value = constant_value(exponent)
            if value is None:
                raise NonConstantExponent("exponent is not constant", 0)
            exponent = value
        return Pow(self, complex(exponent))

    def __call__(self, inner):
        """``f(g)`` builds the composition ``f o g``."""
        return Compose(self, as_expr(inner))

    def __str__(self):
        return to_text(self)


@dataclass(frozen=True, eq=True, repr=True)
class Const(Expr):
    value: complex


@dataclass(frozen=True)
class Var(Expr):
    pass


@dataclass(frozen=True)
class Add(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Sub(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Mul(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Div(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Neg(Expr):
    arg: Expr


@dataclass(frozen=True)
class Pow(Expr):
    base: Expr
    exponent: complex


@dataclass(frozen=True)
class Exp(Expr):
    arg: Expr


@dataclass(frozen=True)
class Log(Expr):
    arg: Expr


@dataclass(frozen=True)
class Sqrt(Expr):
    arg: Expr


@dataclass(frozen=True)
class Compose(Expr):
    outer: Expr
    inner: Expr


@dataclass(frozen=True)
class Diff(Expr):
    """Derivative of ``arg`` with respect to its own variable."""
    arg: Expr


@dataclass(frozen=True, eq=False)
class Series(Expr):
    series: "PowerSeries"


@dataclass(frozen=True)
class Deflate(Expr):
    """``arg / z**m`` continued analytically through ``z = 0``."""
    arg: Expr
    m: int
    series_order: int = 48


@dataclass(frozen=True)
class Named(Expr):
    """Carries a display name without changing the value."""
    arg: Expr
    label: str


Z = Var()


def as_expr(x):
    if isinstance(x, Expr):
        return x
    if isinstance(x, PowerSeries):
        return Series(x)
    if isinstance(x, str):
        return parse(x)
    return Const(complex(x))


# -- power series ----------------------------------------------------------

@dataclass(frozen=True, eq=False)
class PowerSeries:
    """Truncated series ``sum c_k z**k`` at center 0."""
    coeffs: np.ndarray = field(default_factory=lambda: np.zeros(1, dtype=complex))

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=complex).reshape(-1)
        if c.size == 0:
            c = np.zeros(1, dtype=complex)
        object.__setattr__(self, "coeffs", c)

    @property
    def order(self):
        return self.coeffs.size - 1

    def __call__(self, z):
        return horner(self.coeffs, z)

    def derivative(self):
        if self.order == 0:
            return PowerSeries([0.0])
        return PowerSeries(self.coeffs[1:] * np.arange(1, self.order + 1))

    def antiderivative(self, constant=0.0):
        return series_antiderivative(self, constant)

    def trimmed(self, rel=1e-15):
        c = self.coeffs
        scale = np.max(np.abs(c))
        keep = np.nonzero(np.abs(c) > rel * scale)[0]
        last = keep[-1] if keep.size else 0
        return PowerSeries(c[:last + 1])

    def tail_estimate(self, r):
        """Geometric tail bound ``max|c_k| r^(M+1) / (1 - r)`` over the last quarter."""
        m = self.order
        tail = np.abs(self.coeffs[max(0, 3 * m // 4):])
        return float(np.max(tail) * r ** (m + 1) / (1.0 - r))

    def to_pairs(self):
        return [[float(c.real), float(c.imag)] for c in self.coeffs]

    def __repr__(self):
        return f"PowerSeries(order={self.order})"


def horner(coeffs, z):
    z = np.asarray(z, dtype=complex)
    acc = np.zeros_like(z) + coeffs[-1]
    for c in coeffs[-2::-1]:
        acc = acc * z + c
    return acc if acc.ndim else complex(acc)


def series_antiderivative(s, constant=0.0):
    c = np.empty(s.order + 2, dtype=complex)
    c[0] = constant
    c[1:] = s.coeffs / np.arange(1, s.order + 2)
    return PowerSeries(c)


def series_mul(a, b, order=None):
    n = min(a.order, b.order) if order is None else order
    return PowerSeries(np.convolve(a.coeffs, b.coeffs)[:n + 1])


def series_div(a, b, order=None):
    n = min(a.order, b.order) if order is None else order
    ja = Jet(0.0, _padded(a.coeffs, n))
    jb = Jet(0.0, _padded(b.coeffs, n))
    return PowerSeries(jets.jet_div(ja, jb).coeffs)


def _padded(c, n):
    out = np.zeros(n + 1, dtype=complex)
    m = min(n + 1, c.size)
    out[:m] = c[:m]
    return out


def _recenter(coeffs, z0, order):
    """First ``order + 1`` Taylor coefficients at ``z0`` of the polynomial ``coeffs``."""
    z0 = np.asarray(z0, dtype=complex)
    work = [np.zeros_like(z0) + c for c in coeffs]
    out = np.zeros((order + 1,) + z0.shape, dtype=complex)
    for k in range(order + 1):
        if len(work) == 0:
            break
        acc = work[-1]
        quotient = [acc]
        for c in work[-2::-1]:
            acc = acc * z0 + c
            quotient.append(acc)
        out[k] = quotient.pop()
        work = quotient[::-1]
    return out


# -- evaluation ------------------------------------------------------------

def eval_jet(e, z0, order=jets.DEFAULT_ORDER):
    """Jet of ``e`` at ``z0`` (scalar or array of points in the open disk)."""
    z0 = z0 if np.ndim(z0) else complex(z0)
    if np.any(np.abs(z0) >= 1.0):
        raise DomainError("evaluation point outside the open unit disk")
    return _jet(e, z0, order)


def evaluate(e, z):
    """Value of ``e`` at ``z`` without the unit-disk check."""
    v = _jet(e, z if np.ndim(z) else complex(z), 0).coeffs[0]
    return v if np.ndim(v) else complex(v)


def _jet(e, z0, n, var=None):
    # ``var`` maps an order to the jet substituted for ``z``; compositions
    # are evaluated by substitution so that the outer function never has to
    # be expanded around the inner value
    t = type(e)
    if t is Var:
        return Jet.variable(z0, n) if var is None else var(n)
    if t is Const:
        return Jet.constant(e.value, z0, n)
    if t is Add:
        return jets.jet_add(_jet(e.left, z0, n, var), _jet(e.right, z0, n, var))
    if t is Sub:
        return jets.jet_sub(_jet(e.left, z0, n, var), _jet(e.right, z0, n, var))
    if t is Mul:
        return jets.jet_mul(_jet(e.left, z0, n, var), _jet(e.right, z0, n, var))
    if t is Div:
        return jets.jet_div(_jet(e.left, z0, n, var), _jet(e.right, z0, n, var))
    if t is Neg:
        return -_jet(e.arg, z0, n, var)
    if t is Pow:
        return jets.jet_pow(_jet(e.base, z0, n, var), e.exponent)
    if t is Exp:
        return jets.jet_exp(_jet(e.arg, z0, n, var))
    if t is Log:
        return jets.jet_log(_jet(e.arg, z0, n, var))
    if t is Sqrt:
        return jets.jet_sqrt(_jet(e.arg, z0, n, var))
    if t is Compose:
        return _jet(e.outer, z0, n, _substitution(e.inner, z0, var))
    if t is Named:
        return _jet(e.arg, z0, n, var)
    if t is Diff:
        if var is None:
            return _jet(e.arg, z0, n + 1).deriv()
        dv = var(n + 1).deriv()
        if not np.any(jets._small_lead(dv.coeffs)):
            # chain rule: (a o v)' / v'
            return jets.jet_div(_jet(e.arg, z0, n + 1, var).deriv(), dv)
    if t not in (Diff, Series, Deflate):
        raise TypeError(f"not an expression node: {e!r}")
    if var is not None:
        inner = var(n)
        return jets.jet_compose(_jet(e, inner.coeffs[0], n), inner)
    if t is Series:
        return Jet(z0, _recenter(e.series.coeffs, z0, n))
    return _deflate_jet(e, z0, n)


def _substitution(inner, z0, var):
    cache = {}

    def at(k):
        if k not in cache:
            cache[k] = _jet(inner, z0, k, var)
        return cache[k]
    return at


_DEFLATE_RADIUS = 0.05


def _deflate_jet(e, z0, n):
    z0a = np.asarray(z0, dtype=complex)
    near = np.abs(z0a) < _DEFLATE_RADIUS
    out = np.empty((n + 1,) + z0a.shape, dtype=complex)
    if np.any(~near):
        far = z0a[~near] if z0a.ndim else z0a
        num = _jet(e.arg, far, n)
        den = jets.jet_pow(Jet.variable(far, n), e.m)
        q = jets.jet_div(num, den).coeffs
        if z0a.ndim:
            out[:, ~near] = q
        else:
            out[:] = q
    if np.any(near):
        base = _jet(e.arg, 0.0, e.series_order + e.m).coeffs[e.m:]
        close = z0a[near] if z0a.ndim else z0a
        q = _recenter(base, close, n)
        if z0a.ndim:
            out[:, near] = q
        else:
            out[:] = q
    return Jet(z0, out)


def taylor_expand(e, order):
    """Taylor series of ``e`` at 0."""
    return PowerSeries(eval_jet(e, 0.0, order).coeffs)


def constant_value(e):
    """Value of an expression that does not depend on ``z``; ``None`` otherwise."""
    if _has_var(e):
        return None
    return complex(_jet(e, 0.0, 0).coeffs[0])


def _has_var(e):
    if isinstance(e, Var):
        return True
    if isinstance(e, (Const,)):
        return False
    if isinstance(e, Series):
        return e.series.order > 0
    if isinstance(e, Compose):
        return _has_var(e.inner) and _has_var(e.outer)
    return any(_has_var(getattr(e, f)) for f in ("left", "right", "arg", "base")
               if isinstance(getattr(e, f, None), Expr))


def compose(outer, inner):
    return Compose(as_expr(outer), as_expr(inner))


def diff(e):
    return Diff(as_expr(e))


# -- printing --------------------------------------------------------------

def _num(c):
    c = complex(c)
    if c.imag == 0:
        return f"({c.real!r})" if c.real < 0 or math.copysign(1, c.real) < 0 else repr(c.real)
    if c.real == 0:
        return f"({c.imag!r}i)"
    sign = "+" if c.imag >= 0 else "-"
    return f"({c.real!r}{sign}{abs(c.imag)!r}i)"


def to_text(e):
    """Fully parenthesized text that :func:`parse` maps back to an equivalent tree."""
    t = type(e)
    if t is Var:
        return "z"
    if t is Const:
        return _num(e.value)
    if t in (Add, Sub, Mul, Div):
        op = {Add: "+", Sub: "-", Mul: "*", Div: "/"}[t]
        return f"({to_text(e.left)}{op}{to_text(e.right)})"
    if t is Neg:
        return f"(-{to_text(e.arg)})"
    if t is Pow:
        return f"pow({to_text(e.base)},{_num(e.exponent)})"
    if t in (Exp, Log, Sqrt):
        return f"{t.__name__.lower()}({to_text(e.arg)})"
    if t is Named:
        return to_text(e.arg)
    if t is Series:
        terms = [f"{_num(c)}*pow(z,{k})" for k, c in enumerate(e.series.coeffs)]
        return "(" + "+".join(terms) + ")"
    raise ValueError(f"{t.__name__} nodes have no textual form")


# -- parsing ---------------------------------------------------------------

_FUNCS = {"exp": 1, "log": 1, "sqrt": 1, "pow": 2, "mobius": 4}


class _Parser:
    def __init__(self, text):
        self.text = text
        self.toks = self._tokenize(text)
        self.i = 0

    def _offset(self, pos):
        return len(self.text[:pos].encode("utf-8"))

    def error(self, msg, pos, cls=ExprSyntaxError):
        raise cls(msg, self._offset(pos), self.text)

    def _tokenize(self, s):
        toks = []
        i = 0
        n = len(s)
        while i < n:
            ch = s[i]
            if ch.isspace():
                i += 1
            elif ch.isdigit() or (ch == "." and i + 1 < n and s[i + 1].isdigit()):
                j = i
                while j < n and (s[j].isdigit() or s[j] == "."):
                    j += 1
                if j < n and s[j] in "eE":
                    k = j + 1
                    if k < n and s[k] in "+-":
                        k += 1
                    if k < n and s[k].isdigit():
                        while k < n and s[k].isdigit():
                            k += 1
                        j = k
                try:
                    val = float(s[i:j])
                except ValueError:
                    raise ExprSyntaxError("malformed number", self._offset(i), s) from None
                if j < n and s[j] == "i" and not (j + 1 < n and (s[j + 1].isalnum() or s[j + 1] == "_")):
                    toks.append(("num", complex(0, val), i))
                    j += 1
                else:
                    toks.append(("num", complex(val), i))
                i = j
            elif ch.isalpha() or ch == "_":
                j = i
                while j < n and (s[j].isalnum() or s[j] == "_"):
                    j += 1
                toks.append(("name", s[i:j], i))
                i = j
            elif ch in "+-*/^(),":
                toks.append((ch, ch, i))
                i += 1
            else:
                raise ExprSyntaxError(f"unexpected character {ch!r}", self._offset(i), s)
        toks.append(("end", None, n))
        return toks

    def peek(self):
        return self.toks[self.i]

    def take(self, kind=None):
        tok = self.toks[self.i]
        if kind is not None and tok[0] != kind:
            what = "end of input" if tok[0] == "end" else repr(tok[1])
            self.error(f"expected {kind!r}, found {what}", tok[2])
        self.i += 1
        return tok

    def parse(self):
        e = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            self.error(f"unexpected {tok[1]!r}", tok[2])
        return e

    def expr(self):
        e = self.term()
        while self.peek()[0] in "+-":
            op = self.take()[0]
            r = self.term()
            e = Add(e, r) if op == "+" else Sub(e, r)
        return e

    def term(self):
        e = self.unary()
        while self.peek()[0] in ("*", "/"):
            op = self.take()[0]
            r = self.unary()
            e = Mul(e, r) if op == "*" else Div(e, r)
        return e

    def unary(self):
        kind = self.peek()[0]
        if kind == "-":
            self.take()
            return Neg(self.unary())
        if kind == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        e = self.atom()
        while self.peek()[0] == "^":
            self.take()
            pos = self.peek()[2]
            sign = 1
            while self.peek()[0] in "+-":
                if self.take()[0] == "-":
                    sign = -sign
            ex = self.atom()
            value = constant_value(ex)
            if value is None:
                self.error("exponent must be constant", pos, NonConstantExponent)
            e = Pow(e, sign * value)
        return e

    def atom(self):
        tok = self.peek()
        kind, val, pos = tok
        if kind == "num":
            self.take()
            return Const(val)
        if kind == "(":
            self.take()
            e = self.expr()
            self.take(")")
            return e
        if kind == "name":
            self.take()
            if val == "z":
                return Var()
            if val == "i":
                return Const(1j)
            if val == "pi":
                return Const(math.pi)
            if val in _FUNCS:
                return self.call(val, pos)
            self.error(f"unknown name {val!r}", pos)
        what = "end of input" if kind == "end" else repr(val)
        self.error(f"expected an operand, found {what}", pos)

    def call(self, fname, pos):
        self.take("(")
        args = [self.expr()]
        arg_pos = [pos]
        while self.peek()[0] == ",":
            self.take()
            arg_pos.append(self.peek()[2])
            args.append(self.expr())
        self.take(")")
        if len(args) != _FUNCS[fname]:
            self.error(f"{fname} takes {_FUNCS[fname]} argument(s), got {len(args)}", pos)
        if fname == "exp":
            return Exp(args[0])
        if fname == "log":
            return Log(args[0])
        if fname == "sqrt":
            return Sqrt(args[0])
        if fname == "pow":
            value = constant_value(args[1])
            if value is None:
                self.error("exponent must be constant", arg_pos[1], NonConstantExponent)
            return Pow(args[0], value)
        a, b, c, d = args
        return Div(Add(Mul(a, Var()), b), Add(Mul(c, Var()), d))


def parse(text):
    """Parse expression ``text`` into a tree."""
    return _Parser(text).parse()
