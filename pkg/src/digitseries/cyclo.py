"""Exact values in cyclotomic fields, with a complex-ball fallback.

An exact :class:`CycloValue` is a finite sum ``sum c_e * zeta_N**e`` with
rational ``c_e`` and ``zeta_N = exp(2*pi*i/N)``.  Products and sums stay exact
(orders are lifted to a common multiple).  Equality reduces modulo the
cyclotomic polynomial, so ``zeta(3,1) + zeta(3,2) == -1`` holds.  Values that
are not cyclotomic (``cis(1/3)``, ``sqrt(2)``) are carried as complex balls.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

import mpmath

from ._parser import parse_with
from .ball import DEFAULT_PREC, Ball, ComplexBall, mp_serialized

__all__ = ["CycloValue", "parse_cyclo", "cyclotomic_poly"]


@lru_cache(maxsize=None)
def cyclotomic_poly(n: int) -> tuple[int, ...]:
    """Integer coefficients of the n-th cyclotomic polynomial, constant first."""
    num = [-1] + [0] * (n - 1) + [1]  # x^n - 1
    for d in range(1, n):
        if n % d == 0:
            num = _exact_div(num, cyclotomic_poly(d))
    return tuple(num)


def _exact_div(p: list[int], q: tuple[int, ...]) -> list[int]:
    p = list(p)
    dq = len(q) - 1
    out = [0] * (len(p) - dq)
    for k in range(len(p) - 1, dq - 1, -1):
        c = p[k] // q[-1]
        out[k - dq] = c
        for i, b in enumerate(q):
            p[k - dq + i] -= c * b
    return out


def _reduce(coeffs: dict[int, Fraction], order: int) -> tuple[Fraction, ...]:
    """Canonical coordinates modulo the cyclotomic polynomial of ``order``."""
    phi = cyclotomic_poly(order)
    deg = len(phi) - 1
    work = [Fraction(0)] * max(order, deg + 1)
    for e, c in coeffs.items():
        work[e % order] += c
    for k in range(len(work) - 1, deg - 1, -1):
        c = work[k]
        if c:
            # phi is monic
            for i, b in enumerate(phi):
                work[k - deg + i] -= c * b
    return tuple(work[:deg])


class CycloValue:
    """An exact cyclotomic number or, as a fallback, a complex ball."""

    __slots__ = ("order", "coeffs", "ball", "_mono")

    def __init__(self, coeffs=None, order: int = 1, ball: ComplexBall | None = None):
        self.ball = ball
        self._mono = None
        if ball is not None:
            self.order = 0
            self.coeffs = {}
            return
        self.order = int(order)
        clean = {}
        for e, c in (coeffs or {}).items():
            c = Fraction(c)
            if c:
                key = e % self.order
                clean[key] = clean.get(key, Fraction(0)) + c
        self.coeffs = {e: c for e, c in clean.items() if c}

    # constructors -----------------------------------------------------------

    @classmethod
    def rational(cls, q) -> CycloValue:
        return cls({0: Fraction(q)}, 1)

    @classmethod
    def root(cls, order: int, k: int = 1, scale=1) -> CycloValue:
        if order < 1:
            raise ValueError("root-of-unity order must be positive")
        return cls({k % order: Fraction(scale)}, order)

    @classmethod
    def gaussian(cls, re, im) -> CycloValue:
        return cls({0: Fraction(re), 1: Fraction(im)}, 4)

    @classmethod
    def from_ball(cls, ball: ComplexBall) -> CycloValue:
        return cls(ball=ball)

    @staticmethod
    def coerce(x) -> CycloValue:
        if isinstance(x, CycloValue):
            return x
        if isinstance(x, (int, Fraction)):
            return CycloValue.rational(x)
        if isinstance(x, complex):
            return CycloValue.gaussian(Fraction(x.real), Fraction(x.imag))
        if isinstance(x, ComplexBall):
            return CycloValue.from_ball(x)
        raise TypeError(f"cannot convert {type(x).__name__} to CycloValue")

    # representation queries ---------------------------------------------------

    @property
    def kind(self) -> str:
        return "ball" if self.ball is not None else "exact"

    @property
    def is_exact(self) -> bool:
        return self.ball is None

    def lifted(self, order: int) -> dict[int, Fraction]:
        step = order // self.order
        return {e * step: c for e, c in self.coeffs.items()}

    def reduced(self) -> tuple[Fraction, ...]:
        return _reduce(self.coeffs, self.order)

    def monomial(self) -> tuple[Fraction, int, int] | None:
        """``(q, e, N)`` with value ``q * zeta_N**e`` if one exists, else None."""
        if self.ball is not None:
            return None
        if self._mono is None:
            self._mono = self._find_monomial()
        return self._mono or None

    def _find_monomial(self):
        if not self.coeffs:
            return (Fraction(0), 0, 1)
        if len(self.coeffs) == 1:
            (e, c), = self.coeffs.items()
            g = math.gcd(e, self.order)
            return (c, e // g, self.order // g)
        for e in range(self.order):
            red = _reduce({k - e: c for k, c in self.coeffs.items()}, self.order)
            if all(c == 0 for c in red[1:]):
                g = math.gcd(e, self.order)
                return (red[0], e // g, self.order // g)
        return False

    def is_zero(self) -> bool:
        if self.ball is not None:
            return False
        return all(c == 0 for c in self.reduced())

    def to_fraction(self) -> Fraction:
        mono = self.monomial()
        if mono is not None:
            q, e, n = mono
            if q == 0 or n == 1:
                return q
            if n == 2:
                return -q if e % 2 else q
        raise ValueError(f"{self} is not rational")

    def is_rational(self) -> bool:
        try:
            self.to_fraction()
        except ValueError:
            return False
        return True

    # arithmetic ---------------------------------------------------------------

    def _lift_pair(self, other: CycloValue):
        order = self.order * other.order // math.gcd(self.order, other.order)
        return order, self.lifted(order), other.lifted(order)

    def __add__(self, other) -> CycloValue:
        other = CycloValue.coerce(other)
        if self.ball is not None or other.ball is not None:
            return CycloValue(ball=self.to_ball() + other.to_ball(self._prec(other)))
        order, a, b = self._lift_pair(other)
        out = dict(a)
        for e, c in b.items():
            out[e] = out.get(e, Fraction(0)) + c
        return CycloValue(out, order)

    __radd__ = __add__

    def __neg__(self) -> CycloValue:
        if self.ball is not None:
            return CycloValue(ball=-self.ball)
        return CycloValue({e: -c for e, c in self.coeffs.items()}, self.order)

    def __sub__(self, other) -> CycloValue:
        return self + (-CycloValue.coerce(other))

    def __rsub__(self, other) -> CycloValue:
        return CycloValue.coerce(other) - self

    def __mul__(self, other) -> CycloValue:
        other = CycloValue.coerce(other)
        if self.ball is not None or other.ball is not None:
            p = self._prec(other)
            return CycloValue(ball=self.to_ball(p) * other.to_ball(p))
        order, a, b = self._lift_pair(other)
        out: dict[int, Fraction] = {}
        for e1, c1 in a.items():
            for e2, c2 in b.items():
                k = (e1 + e2) % order
                out[k] = out.get(k, Fraction(0)) + c1 * c2
        return CycloValue(out, order)

    __rmul__ = __mul__

    def __truediv__(self, other) -> CycloValue:
        other = CycloValue.coerce(other)
        mono = other.monomial()
        if mono is not None and mono[0] != 0:
            q, e, n = mono
            return self * CycloValue.root(n, -e, 1 / q)
        if other.is_zero():
            raise ZeroDivisionError("division by zero")
        p = self._prec(other)
        return CycloValue(ball=self.to_ball(p) / other.to_ball(p))

    def __rtruediv__(self, other) -> CycloValue:
        return CycloValue.coerce(other) / self

    def __pow__(self, k: int) -> CycloValue:
        if k < 0:
            return CycloValue.rational(1) / (self ** (-k))
        out = CycloValue.rational(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def conjugate(self) -> CycloValue:
        if self.ball is not None:
            return CycloValue(ball=self.ball.conjugate())
        return CycloValue({-e: c for e, c in self.coeffs.items()}, self.order)

    def _prec(self, other=None) -> int:
        precs = [v.ball.prec for v in (self, other) if v is not None and v.ball is not None]
        return max(precs) if precs else DEFAULT_PREC

    # comparisons and magnitudes ---------------------------------------------

    def __eq__(self, other) -> bool:
        try:
            other = CycloValue.coerce(other)
        except TypeError:
            return NotImplemented
        if self.ball is not None or other.ball is not None:
            return False  # inexact values never compare equal
        return (self - other).is_zero()

    __hash__ = None

    def abs_squared(self) -> CycloValue:
        return self * self.conjugate()

    def abs_is_one(self) -> bool:
        if self.ball is not None:
            return False
        mono = self.monomial()
        if mono is not None:
            return abs(mono[0]) == 1
        return self.abs_squared() == 1

    def abs_le_one(self) -> bool:
        """``|value| <= 1``; exact when possible, otherwise via a 128-bit ball."""
        if self.ball is None:
            mono = self.monomial()
            if mono is not None:
                return abs(mono[0]) <= 1
            sq = self.abs_squared()
            if sq.is_rational():
                return sq.to_fraction() <= 1
            b = sq.to_ball(DEFAULT_PREC).re
        else:
            b = self.ball.re * self.ball.re + self.ball.im * self.ball.im
        return b.upper() <= 1

    def to_ball(self, prec: int = DEFAULT_PREC) -> ComplexBall:
        if self.ball is not None:
            return self.ball
        acc = ComplexBall(Ball(0, 0, prec), Ball(0, 0, prec))
        for e, c in sorted(self.coeffs.items()):
            acc = acc + ComplexBall.root_of_unity(self.order, e, prec) * Ball(c, 0, prec)
        return acc

    def __complex__(self) -> complex:
        return complex(self.to_ball(64))

    def __repr__(self) -> str:
        return f"CycloValue({self})"

    def __str__(self) -> str:
        if self.ball is not None:
            return f"ball({complex(self.ball)})"
        mono = self.monomial()
        if mono is not None:
            return _monomial_str(*mono)
        out = ""
        for e, c in sorted(self.coeffs.items()):
            g = math.gcd(e, self.order)
            t = _monomial_str(c, e // g, self.order // g)
            if not out:
                out = t
            elif t.startswith("-"):
                out += " - " + t[1:]
            else:
                out += " + " + t
        return out



def _monomial_str(q: Fraction, e: int, n: int) -> str:
    """Format q * zeta(n, e) with e/n in lowest terms."""
    if q == 0:
        return "0"
    if n == 1 or e == 0:
        return str(q)
    if n == 2:
        return str(-q)
    if n == 4:
        base = "i" if e == 1 else "-i"
    else:
        base = f"zeta({n},{e})"
    if q == 1:
        return base
    if q == -1:
        return base[1:] if base.startswith("-") else "-" + base
    return f"{q}*{base}" if q > 0 else f"-{-q}*{base}"

class _CycloAlgebra:
    def __init__(self, prec: int):
        self.prec = prec

    def number(self, text: str) -> CycloValue:
        return CycloValue.rational(Fraction(text))

    def name(self, ident: str) -> CycloValue:
        if ident == "i":
            return CycloValue.root(4, 1)
        raise ValueError(f"unknown symbol {ident!r}")

    def call(self, ident: str, args) -> CycloValue:
        if ident == "zeta":
            if len(args) != 2:
                raise ValueError("zeta(d, m) takes two integer arguments")
            d, m = (a.to_fraction() for a in args)
            if d.denominator != 1 or m.denominator != 1 or d < 1:
                raise ValueError("zeta(d, m) needs integers with d >= 1")
            return CycloValue.root(int(d), int(m))
        if ident == "cis":
            q = args[0].to_fraction()
            with mpmath.workprec(self.prec + 20):
                val = mpmath.expj(mpmath.mpf(q.numerator) / q.denominator)
            re = Ball(val.real, 0, self.prec).add_error(mpmath.mpf(2) ** (-self.prec))
            im = Ball(val.imag, 0, self.prec).add_error(mpmath.mpf(2) ** (-self.prec))
            return CycloValue.from_ball(ComplexBall(re, im))
        if ident == "sqrt":
            (x,) = args
            root = Ball(x.to_fraction(), 0, self.prec).sqrt()
            return CycloValue.from_ball(ComplexBall(root, Ball(0, 0, self.prec)))
        raise ValueError(f"unknown function {ident!r}")

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def div(self, a, b):
        return a / b

    def neg(self, a):
        return -a

    def pow(self, a, k):
        return a**k


@mp_serialized
def parse_cyclo(text: str, prec: int = DEFAULT_PREC) -> CycloValue:
    """Parse literals like ``-1``, ``1/2``, ``i``, ``zeta(5,1)``, ``(1+i)/2``."""
    return parse_with(text, _CycloAlgebra(prec))
