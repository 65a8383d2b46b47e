"""Exact right-hand sides built from symbolic constants.

Harmonic and Euler numbers feed the rational identities, while Dirichlet beta
at odd integers gives the paperfolding closed forms.

:class:`SymbolicConstant` values are small expression trees over rationals,
``pi``, ``i``, ``log(q)`` and ``sqrt(q)`` for rational ``q``, and ``sin``/``cos``
of rational multiples of ``pi``.  Trees are built through normalizing
constructors (rational subtrees fold, scalar factors are pulled to the front),
so printing and re-parsing any constant gives back an equal tree.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from mpmath import libmp

from ._parser import parse_with
from .ball import Ball, ComplexBall, mp_serialized
from .errors import InadmissibleJob, PoleError
from .rational_expr import RationalFn, analyze_decay, compose_affine
from .terms import LogTerm

__all__ = [
    "SymbolicConstant",
    "parse_constant",
    "rational",
    "harmonic",
    "euler_number",
    "beta_odd",
    "beta_numeric",
    "paperfold_rhs",
    "reduction_factor",
    "shap_combination",
]


# expression trees -------------------------------------------------------------

# precedence levels used by the printer
_P_ADD, _P_MUL, _P_NEG, _P_ATOM = 1, 2, 3, 5


class SymbolicConstant:
    """Base class; concrete nodes are frozen dataclasses below."""

    __slots__ = ()

    @mp_serialized
    def evaluate(self, prec: int = 128) -> ComplexBall:
        """Ball enclosure with radius at most 2**(8 - prec) times the magnitude."""
        work = prec + 24 + 4 * self.depth()
        v = self._eval(work)
        return ComplexBall(v.re.with_prec(prec), v.im.with_prec(prec))

    def depth(self) -> int:
        return 1

    def __str__(self) -> str:
        return self._str()[0]

    def __repr__(self) -> str:
        return f"SymbolicConstant({str(self)!r})"

    # arithmetic through the normalizing constructors
    def __add__(self, other):
        return _add(self, _lift(other))

    def __radd__(self, other):
        return _add(_lift(other), self)

    def __sub__(self, other):
        return _add(self, _neg(_lift(other)))

    def __rsub__(self, other):
        return _add(_lift(other), _neg(self))

    def __mul__(self, other):
        return _mul(self, _lift(other))

    def __rmul__(self, other):
        return _mul(_lift(other), self)

    def __truediv__(self, other):
        return _div(self, _lift(other))

    def __rtruediv__(self, other):
        return _div(_lift(other), self)

    def __neg__(self):
        return _neg(self)

    def __pow__(self, k: int):
        return _pow(self, k)


def _frac_str(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _wrap(node: SymbolicConstant, level: int) -> str:
    text, p = node._str()
    return f"({text})" if p < level else text


@dataclass(frozen=True)
class Rat(SymbolicConstant):
    q: Fraction

    def _eval(self, prec):
        return ComplexBall(_ball_of(self.q, prec), Ball(0, 0, prec))

    def _str(self):
        if self.q < 0:
            return "-" + _frac_str(-self.q), (_P_NEG if self.q.denominator == 1 else _P_ADD)
        return _frac_str(self.q), (_P_ATOM if self.q.denominator == 1 else _P_MUL)


@dataclass(frozen=True)
class Pi(SymbolicConstant):
    def _eval(self, prec):
        return ComplexBall(Ball.pi(prec), Ball(0, 0, prec))

    def _str(self):
        return "pi", _P_ATOM


@dataclass(frozen=True)
class ImagUnit(SymbolicConstant):
    def _eval(self, prec):
        return ComplexBall(Ball(0, 0, prec), Ball(1, 0, prec))

    def _str(self):
        return "i", _P_ATOM


@dataclass(frozen=True)
class Log(SymbolicConstant):
    q: Fraction

    def _eval(self, prec):
        return ComplexBall(_ball_of(self.q, prec + 8).log().with_prec(prec), Ball(0, 0, prec))

    def _str(self):
        return f"log({_frac_str(self.q)})", _P_ATOM


@dataclass(frozen=True)
class Sqrt(SymbolicConstant):
    q: Fraction

    def _eval(self, prec):
        return ComplexBall(_ball_of(self.q, prec + 8).sqrt().with_prec(prec), Ball(0, 0, prec))

    def _str(self):
        return f"sqrt({_frac_str(self.q)})", _P_ATOM


@dataclass(frozen=True)
class Trig(SymbolicConstant):
    """``sin(q*pi)`` or ``cos(q*pi)``."""

    fn: str
    q: Fraction

    def _eval(self, prec):
        c, s = Ball.cos_sin_pi(self.q, prec)
        return ComplexBall(c if self.fn == "cos" else s, Ball(0, 0, prec))

    def _str(self):
        return f"{self.fn}({_scaled_str(self.q, Pi())})", _P_ATOM


@dataclass(frozen=True)
class Scaled(SymbolicConstant):
    """``c * x`` for a rational ``c`` not in {0, 1} and a non-rational ``x``."""

    c: Fraction
    x: SymbolicConstant

    def _eval(self, prec):
        return self.x._eval(prec) * _ball_of(self.c, prec)

    def depth(self):
        return 1 + self.x.depth()

    def _str(self):
        if self.c == -1:
            return "-" + _wrap(self.x, _P_NEG), _P_ADD
        return _scaled_str(self.c, self.x), (_P_ADD if self.c < 0 else _P_MUL)


def _scaled_str(c: Fraction, x: SymbolicConstant) -> str:
    sign = "-" if c < 0 else ""
    a, b = abs(c.numerator), c.denominator
    body = _wrap(x, _P_NEG)
    if a != 1:
        body = f"{a}*{body}"
    if b != 1:
        body = f"{body}/{b}"
    return sign + body


@dataclass(frozen=True)
class Sum(SymbolicConstant):
    a: SymbolicConstant
    b: SymbolicConstant

    def _eval(self, prec):
        return self.a._eval(prec) + self.b._eval(prec)

    def depth(self):
        return 1 + max(self.a.depth(), self.b.depth())

    def _str(self):
        left = _wrap(self.a, _P_ADD)
        c, x = _split(self.b)
        if c < 0:
            return f"{left} - {_wrap(_scale(-c, x), _P_MUL)}", _P_ADD
        return f"{left} + {_wrap(self.b, _P_MUL)}", _P_ADD


@dataclass(frozen=True)
class Product(SymbolicConstant):
    a: SymbolicConstant
    b: SymbolicConstant

    def _eval(self, prec):
        return self.a._eval(prec) * self.b._eval(prec)

    def depth(self):
        return 1 + max(self.a.depth(), self.b.depth())

    def _str(self):
        return f"{_wrap(self.a, _P_MUL)}*{_wrap(self.b, _P_NEG)}", _P_MUL


@dataclass(frozen=True)
class Quotient(SymbolicConstant):
    a: SymbolicConstant
    b: SymbolicConstant

    def _eval(self, prec):
        return self.a._eval(prec) / self.b._eval(prec)

    def depth(self):
        return 1 + max(self.a.depth(), self.b.depth())

    def _str(self):
        return f"{_wrap(self.a, _P_MUL)}/{_wrap(self.b, _P_NEG)}", _P_MUL


@dataclass(frozen=True)
class Power(SymbolicConstant):
    x: SymbolicConstant
    k: int

    def _eval(self, prec):
        base = self.x._eval(prec + 2 * self.k.bit_length())
        out = None
        for _ in range(self.k):
            out = base if out is None else out * base
        return out

    def depth(self):
        return self.k.bit_length() + self.x.depth()

    def _str(self):
        return f"{_wrap(self.x, _P_ATOM)}^{self.k}", _P_NEG


def _ball_of(q: Fraction, prec: int) -> Ball:
    if q.denominator == 1:
        return Ball(int(q), 0, prec)
    m = libmp.from_rational(q.numerator, q.denominator, prec + 4, "n")
    return Ball(q, 0, prec) if m is None else Ball._rounded(m, prec)


# normalizing constructors ------------------------------------------------------


def rational(q) -> SymbolicConstant:
    return Rat(Fraction(q))


def _lift(x) -> SymbolicConstant:
    if isinstance(x, SymbolicConstant):
        return x
    if isinstance(x, (int, Fraction)):
        return Rat(Fraction(x))
    raise TypeError(f"cannot use {type(x).__name__} in a symbolic constant")


def _split(x: SymbolicConstant) -> tuple[Fraction, SymbolicConstant | None]:
    if isinstance(x, Rat):
        return x.q, None
    if isinstance(x, Scaled):
        return x.c, x.x
    return Fraction(1), x


def _scale(c: Fraction, x: SymbolicConstant | None) -> SymbolicConstant:
    if x is None or c == 0:
        return Rat(c)
    if c == 1:
        return x
    return Scaled(c, x)


def _add(a: SymbolicConstant, b: SymbolicConstant) -> SymbolicConstant:
    if isinstance(a, Rat) and isinstance(b, Rat):
        return Rat(a.q + b.q)
    if isinstance(b, Rat) and b.q == 0:
        return a
    if isinstance(a, Rat) and a.q == 0:
        return b
    return Sum(a, b)


def _neg(a: SymbolicConstant) -> SymbolicConstant:
    c, x = _split(a)
    return _scale(-c, x)


def _mul(a: SymbolicConstant, b: SymbolicConstant) -> SymbolicConstant:
    ca, xa = _split(a)
    cb, xb = _split(b)
    if xa is None:
        core = xb
    elif xb is None:
        core = xa
    else:
        core = Product(xa, xb)
    return _scale(ca * cb, core)


def _div(a: SymbolicConstant, b: SymbolicConstant) -> SymbolicConstant:
    ca, xa = _split(a)
    cb, xb = _split(b)
    if cb == 0:
        raise ZeroDivisionError("division by zero in a constant")
    if xb is None:
        core = xa
    elif xa is None:
        core = Quotient(Rat(Fraction(1)), xb)
    else:
        core = Quotient(xa, xb)
    return _scale(ca / cb, core)


def _pow(a: SymbolicConstant, k: int) -> SymbolicConstant:
    if not isinstance(k, int) or k < 0:
        raise ValueError("exponent must be a nonnegative integer")
    c, x = _split(a)
    if k == 0:
        return Rat(Fraction(1))
    if x is None:
        return Rat(c**k)
    return _scale(c**k, x if k == 1 else Power(x, k))


def _pi_multiple(x: SymbolicConstant) -> Fraction:
    c, core = _split(x)
    if core == Pi():
        return c
    if core is None and c == 0:
        return Fraction(0)
    raise ValueError("sin and cos need a rational multiple of pi")


def _as_rational(x: SymbolicConstant) -> Fraction:
    if isinstance(x, Rat):
        return x.q
    raise ValueError("log and sqrt need a rational argument")


class _ConstantAlgebra:
    def number(self, text: str):
        return Rat(Fraction(text))

    def name(self, ident: str):
        if ident == "pi":
            return Pi()
        if ident == "i":
            return ImagUnit()
        raise ValueError(f"unknown constant {ident!r}")

    def call(self, ident: str, args):
        if len(args) != 1:
            raise ValueError(f"{ident} takes one argument")
        (arg,) = args
        if ident == "log":
            q = _as_rational(arg)
            if q <= 0:
                raise ValueError("log needs a positive argument")
            return Rat(Fraction(0)) if q == 1 else Log(q)
        if ident == "sqrt":
            q = _as_rational(arg)
            if q < 0:
                raise ValueError("sqrt needs a nonnegative argument")
            num, den = q.numerator, q.denominator
            rn, rd = math.isqrt(num), math.isqrt(den)
            if rn * rn == num and rd * rd == den:
                return Rat(Fraction(rn, rd))
            return Sqrt(q)
        if ident in ("sin", "cos"):
            q = _pi_multiple(arg)
            c, s = _exact_trig(q)
            v = c if ident == "cos" else s
            return Rat(Fraction(v)) if v is not None else Trig(ident, q)
        raise ValueError(f"unknown function {ident!r}")

    add = staticmethod(_add)
    neg = staticmethod(_neg)
    mul = staticmethod(_mul)
    div = staticmethod(_div)
    pow = staticmethod(_pow)

    @staticmethod
    def sub(a, b):
        return _add(a, _neg(b))


def _exact_trig(q: Fraction):
    """(cos, sin) of q*pi when both are in {-1, 0, 1}, else (None, None)."""
    if (2 * q).denominator != 1:
        return None, None
    k = int(2 * q) % 4
    return [(1, 0), (0, 1), (-1, 0), (0, -1)][k]


def parse_constant(text: str) -> SymbolicConstant:
    """Parse e.g. ``"-5/12"``, ``"pi^3/28"``, ``"-log(2)/2"``, ``"1/sqrt(2)"``,
    ``"sin(2*pi/5)"``.  Decimal literals are read as exact rationals."""
    return parse_with(text, _ConstantAlgebra())


def sin_pi(q) -> SymbolicConstant:
    return _ConstantAlgebra().call("sin", [_scale(Fraction(q), Pi())])


def cos_pi(q) -> SymbolicConstant:
    return _ConstantAlgebra().call("cos", [_scale(Fraction(q), Pi())])


def log_of(q) -> SymbolicConstant:
    return _ConstantAlgebra().call("log", [Rat(Fraction(q))])


# numbers --------------------------------------------------------------------------


def harmonic(n: int, alternating: bool = False) -> Fraction:
    if n < 0:
        raise ValueError("n must be nonnegative")
    if alternating:
        return sum((Fraction((-1) ** (k - 1), k) for k in range(1, n + 1)), Fraction(0))
    return sum((Fraction(1, k) for k in range(1, n + 1)), Fraction(0))


@lru_cache(maxsize=None)
def _euler_table(k: int) -> tuple[int, ...]:
    table = [1]
    for m in range(1, k + 1):
        # sum_{j<=m} binom(2m, 2j) E_{2j} = 0
        table.append(-sum(math.comb(2 * m, 2 * j) * table[j] for j in range(m)))
    return tuple(table)


def euler_number(m: int) -> int:
    """E_m, the Taylor coefficients of 1/cosh t times m!."""
    if m < 0 or m % 2:
        raise ValueError("Euler numbers are indexed by even nonnegative integers")
    return _euler_table(m // 2)[m // 2]


def beta_odd(d: int) -> SymbolicConstant:
    """beta(2d+1) = (pi/2)**(2d+1) * |E_2d| / (2 * (2d)!)."""
    if d < 0:
        raise ValueError("d must be nonnegative")
    c = Fraction(abs(euler_number(2 * d)), 2 * math.factorial(2 * d) * 2 ** (2 * d + 1))
    return _scale(c, _pow(Pi(), 2 * d + 1))


def paperfold_rhs(d: int) -> SymbolicConstant:
    """Closed form of sum_{n>=0} v(n)/(n+1)**(2d+1) for paperfolding v."""
    if d < 0:
        raise ValueError("d must be nonnegative")
    c = Fraction(abs(euler_number(2 * d)), (2 ** (2 * d + 2) - 2) * math.factorial(2 * d))
    return _scale(c, _pow(Pi(), 2 * d + 1))


def reduction_factor(s: int) -> Fraction:
    """2**s / (2**s - 1), linking the paperfolding series to beta(s)."""
    if s < 1:
        raise ValueError("s must be a positive integer")
    return Fraction(2**s, 2**s - 1)


_CVZ_RATE = math.log2(3 + math.sqrt(8))


@mp_serialized
def beta_numeric(s, prec: int = 128) -> Ball:
    """Dirichlet beta by the Cohen-Villegas-Zagier alternating-series scheme.

    The terms 1/(2k+1)**s are moments of a positive measure on [0, 1], so the
    n-term error is at most 2 * a_0 / (3 + sqrt 8)**n = 2 / (3 + sqrt 8)**n,
    which gives a rigorous radius.  The CVZ weights are exact integers here.
    """
    s_frac = Fraction(s) if not isinstance(s, float) else Fraction(s).limit_denominator(10**12)
    if s_frac <= 0:
        raise ValueError("s must be positive")
    n = math.ceil((prec + 8) / _CVZ_RATE) + 1
    work = prec + 2 * n.bit_length() + 40
    # d = ((3+sqrt8)^n + (3-sqrt8)^n)/2, an integer
    t0, t1 = 2, 6
    for _ in range(n - 1):
        t0, t1 = t1, 6 * t1 - t0
    d = t1 // 2 if n >= 1 else 1
    b, c = Fraction(-1), Fraction(-d)
    weights = []
    for k in range(n):
        c = b - c
        weights.append(c)
        b = b * (k + n) * (k - n) / ((k + Fraction(1, 2)) * (k + 1))
    integral = s_frac.denominator == 1
    total = Ball(0, 0, work)
    exact_total = Fraction(0)
    for k, w in enumerate(weights):
        if integral:
            exact_total += w / (2 * k + 1) ** int(s_frac)
        else:
            ak = (Ball(2 * k + 1, 0, work).log() * _ball_of(-s_frac, work)).exp()
            total = total + ak * _ball_of(w, work)
    if integral:
        total = _ball_of(exact_total, work)
    value = total / Ball(d, 0, work)
    # truncation: 2 / (3 + sqrt 8)**n <= 2 * 2**(-n * _CVZ_RATE) (rounded up)
    err = libmp.from_man_exp(1, 1 - math.floor(n * _CVZ_RATE * (1 - 1e-12)))
    return value.add_error(err).with_prec(prec)


# Golay-Shapiro-Rudin combination ------------------------------------------------------


def shap_combination(R):
    """Return (term, rhs) with term(n) = R(n) - R(2n) + R(2n+1) - 2R(4n+1).

    Summed against r(n) for n >= 1 this gives R(1).  ``R`` is a RationalFn or a
    LogTerm (then the combination is taken inside the logarithm).  Overrides of
    the result below n = 1 are dropped since the sum starts at 1.  Degenerate
    inputs (constant R, R not tending to 0, R(1) undefined) are rejected.
    """
    if isinstance(R, LogTerm):
        q = R.q
        rep = analyze_decay(q)
        if q.is_constant() and not q.overrides:
            raise InadmissibleJob("constant R gives a degenerate identity")
        if rep.limit != 1:
            raise InadmissibleJob("log R needs q(n) -> 1 so that R(n) -> 0")
        q1 = q.value_at(1)
        if q1 is None:
            raise PoleError(1)
        if q1 <= 0:
            raise InadmissibleJob("R(1) = log q(1) needs q(1) > 0")
        combined = q * compose_affine(q, 2, 1) / (compose_affine(q, 2, 0) * compose_affine(q, 4, 1) ** 2)
        term = LogTerm(_drop_below(combined, 1))
        return term, log_of(q1)
    if not isinstance(R, RationalFn):
        raise TypeError("R must be a RationalFn or LogTerm")
    if R.is_constant() and not R.overrides:
        raise InadmissibleJob("constant R gives a degenerate identity")
    if not analyze_decay(R).decays_to_zero:
        raise InadmissibleJob("R must tend to 0 for the combined series to converge")
    r1 = R.value_at(1)
    if r1 is None:
        raise PoleError(1)
    combined = R - compose_affine(R, 2, 0) + compose_affine(R, 2, 1) - compose_affine(R, 4, 1).scale(2)
    return _drop_below(combined, 1), Rat(r1)


def _drop_below(f: RationalFn, start: int) -> RationalFn:
    return RationalFn.make(f.num, f.den, {m: v for m, v in f.overrides if m >= start})
