"""Exact rational functions of ``n`` with finitely many value overrides.

Polynomials are tuples of coefficients, constant term first.  A
:class:`RationalFn` is kept in canonical form: numerator and denominator are
coprime integer polynomials, the gcd of all their coefficients is 1 and the
denominator's leading coefficient is positive.  Canonical forms compare equal
exactly when the functions (and their overrides) are equal.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from typing import Iterable, Mapping, Sequence

from ._parser import parse_with
from .errors import OverrideConflict, PoleError

__all__ = [
    "RationalFn",
    "DecayReport",
    "parse",
    "eval_exact",
    "analyze_decay",
    "compose_affine",
    "rf_arith",
]

Poly = tuple  # tuple[Fraction | int, ...], constant term first


# polynomial helpers ---------------------------------------------------------


def _trim(p: Sequence) -> tuple:
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return tuple(p)


def _padd(p: Poly, q: Poly) -> Poly:
    n = max(len(p), len(q))
    return _trim(
        (p[i] if i < len(p) else 0) + (q[i] if i < len(q) else 0) for i in range(n)
    )


def _pneg(p: Poly) -> Poly:
    return tuple(-c for c in p)


def _pmul(p: Poly, q: Poly) -> Poly:
    if not p or not q:
        return ()
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return _trim(out)


def _pscale(p: Poly, c) -> Poly:
    return _trim(c * a for a in p)


def _pdivmod(p: Poly, q: Poly) -> tuple[Poly, Poly]:
    """Division with remainder over the rationals."""
    if not q:
        raise ZeroDivisionError("polynomial division by zero")
    r = [Fraction(c) for c in p]
    lead = Fraction(q[-1])
    dq = len(q) - 1
    quot = [Fraction(0)] * max(len(r) - dq, 0)
    for k in range(len(r) - 1, dq - 1, -1):
        c = r[k] / lead
        if c:
            quot[k - dq] = c
            for i, b in enumerate(q):
                r[k - dq + i] -= c * b
    return _trim(quot), _trim(r[:dq])


def _pgcd(p: Poly, q: Poly) -> Poly:
    a, b = _trim(p), _trim(q)
    while b:
        _, r = _pdivmod(a, b)
        a, b = b, r
    if not a:
        return (Fraction(1),)
    lead = Fraction(a[-1])
    return tuple(Fraction(c) / lead for c in a)


def _peval(p: Poly, x):
    acc = 0
    for c in reversed(p):
        acc = acc * x + c
    return acc


def _pcompose_affine(p: Poly, a: int, b: int) -> Poly:
    """p(a*n + b) as a polynomial in n."""
    lin = (b, a) if a else (b,)
    acc: Poly = ()
    for c in reversed(p):
        acc = _padd(_pmul(acc, _trim(lin)), (c,) if c else ())
    return acc


def _content_normalize(num: Poly, den: Poly) -> tuple[tuple[int, ...], tuple[int, ...]]:
    coeffs = [Fraction(c) for c in num + den]
    lcm = reduce(lambda x, y: x * y // math.gcd(x, y), (c.denominator for c in coeffs), 1)
    n_int = [int(Fraction(c) * lcm) for c in num]
    d_int = [int(Fraction(c) * lcm) for c in den]
    g = reduce(math.gcd, n_int + d_int, 0) or 1
    if d_int[-1] < 0:
        g = -g
    return tuple(c // g for c in n_int), tuple(c // g for c in d_int)


def _poly_str(p: tuple[int, ...]) -> str:
    if not p:
        return "0"
    parts = []
    for k in range(len(p) - 1, -1, -1):
        c = p[k]
        if c == 0:
            continue
        mag = abs(c)
        if k == 0:
            body = str(mag)
        else:
            mono = "n" if k == 1 else f"n^{k}"
            body = mono if mag == 1 else f"{mag}*{mono}"
        if not parts:
            parts.append(("-" if c < 0 else "") + body)
        else:
            parts.append((" - " if c < 0 else " + ") + body)
    return "".join(parts)


def _nonneg_integer_roots(p: tuple[int, ...]) -> list[int]:
    """Distinct nonnegative integer roots of an integer polynomial."""
    p = _trim(p)
    if len(p) <= 1:
        return []
    roots = []
    k = 0
    while k < len(p) and p[k] == 0:
        k += 1
    if k:
        roots.append(0)
    q = p[k:]
    if len(q) <= 1:
        return roots
    a0, lead = abs(q[0]), abs(q[-1])
    bound = 1 + max(abs(c) for c in q[:-1]) // lead
    limit = min(bound, a0)
    for r in range(1, limit + 1):
        if a0 % r == 0 and _peval(q, r) == 0:
            roots.append(r)
    return roots


# the rational function type -------------------------------------------------


@dataclass(frozen=True)
class DecayReport:
    decays_to_zero: bool
    difference_order: float  # math.inf for constant functions
    pole_list: tuple[int, ...]
    limit: Fraction | None = None  # lim f(n) when finite


@dataclass(frozen=True)
class RationalFn:
    """``num(n)/den(n)`` with integer coefficient tuples (constant term first)."""

    num: tuple[int, ...]
    den: tuple[int, ...]
    overrides: tuple[tuple[int, Fraction], ...] = field(default=())

    @classmethod
    def make(cls, num: Iterable, den: Iterable = (1,), overrides: Mapping | None = None) -> RationalFn:
        num, den = _trim(tuple(num)), _trim(tuple(den))
        if not den:
            raise ZeroDivisionError("denominator is the zero polynomial")
        if not num:
            num_i, den_i = (), (1,)
        else:
            g = _pgcd(num, den)
            if len(g) > 1:
                num, _ = _pdivmod(num, g)
                den, _ = _pdivmod(den, g)
            num_i, den_i = _content_normalize(num, den)
        f = cls(num_i, den_i, ())
        if overrides:
            kept = []
            for m, v in sorted(overrides.items()):
                v = Fraction(v)
                if m < 0:
                    raise ValueError("override index must be nonnegative")
                d = _peval(den_i, m)
                if d != 0 and Fraction(_peval(num_i, m), d) == v:
                    continue  # redundant
                kept.append((int(m), v))
            f = cls(num_i, den_i, tuple(kept))
        return f

    @classmethod
    def constant(cls, c) -> RationalFn:
        c = Fraction(c)
        return cls.make((c,), (1,))

    @classmethod
    def identity(cls) -> RationalFn:
        return cls((0, 1), (1,), ())

    # basic properties -------------------------------------------------------

    @property
    def deg_num(self) -> int:
        return len(self.num) - 1  # -1 for the zero function

    @property
    def deg_den(self) -> int:
        return len(self.den) - 1

    @property
    def override_map(self) -> dict[int, Fraction]:
        return dict(self.overrides)

    def is_zero(self) -> bool:
        return not self.num and not self.overrides

    def is_constant(self) -> bool:
        return self.deg_den == 0 and self.deg_num <= 0

    def with_overrides(self, overrides: Mapping) -> RationalFn:
        merged = self.override_map
        merged.update({int(k): Fraction(v) for k, v in overrides.items()})
        return RationalFn.make(self.num, self.den, merged)

    def without_overrides(self) -> RationalFn:
        return RationalFn(self.num, self.den, ())

    # evaluation -------------------------------------------------------------

    def value_at(self, n: int) -> Fraction | None:
        """Exact value at ``n``, or ``None`` at an unoverridden pole."""
        for m, v in self.overrides:
            if m == n:
                return v
        d = _peval(self.den, n)
        if d == 0:
            return None
        return Fraction(_peval(self.num, n), d)

    def __call__(self, n) -> Fraction:
        return eval_exact(self, n)

    def int_pair(self, n: int) -> tuple[int, int]:
        """(num(n), den(n)) as integers; overrides are not consulted."""
        return _peval(self.num, n), _peval(self.den, n)

    def poles(self) -> tuple[int, ...]:
        return tuple(_nonneg_integer_roots(self.den))

    def unoverridden_poles(self, start: int = 0) -> tuple[int, ...]:
        over = self.override_map
        return tuple(p for p in self.poles() if p >= start and p not in over)

    # arithmetic -------------------------------------------------------------

    def _combine(self, other: RationalFn, num: Poly, den: Poly, op) -> RationalFn:
        idx = set(self.override_map) | set(other.override_map)
        merged = {}
        for m in idx:
            a, b = self.value_at(m), other.value_at(m)
            if a is None or b is None:
                raise OverrideConflict(
                    f"override at n = {m} on one side meets an unoverridden pole on the other"
                )
            merged[m] = op(a, b)
        return RationalFn.make(num, den, merged)

    def __add__(self, other) -> RationalFn:
        other = _as_rf(other)
        num = _padd(_pmul(self.num, other.den), _pmul(other.num, self.den))
        return self._combine(other, num, _pmul(self.den, other.den), lambda a, b: a + b)

    __radd__ = __add__

    def __neg__(self) -> RationalFn:
        return RationalFn.make(_pneg(self.num), self.den, {m: -v for m, v in self.overrides})

    def __sub__(self, other) -> RationalFn:
        other = _as_rf(other)
        num = _padd(_pmul(self.num, other.den), _pneg(_pmul(other.num, self.den)))
        return self._combine(other, num, _pmul(self.den, other.den), lambda a, b: a - b)

    def __rsub__(self, other) -> RationalFn:
        return _as_rf(other) - self

    def __mul__(self, other) -> RationalFn:
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        other = _as_rf(other)
        return self._combine(
            other, _pmul(self.num, other.num), _pmul(self.den, other.den), lambda a, b: a * b
        )

    __rmul__ = __mul__

    def __truediv__(self, other) -> RationalFn:
        if isinstance(other, (int, Fraction)):
            return self.scale(1 / Fraction(other))
        other = _as_rf(other)
        if not other.num:
            raise ZeroDivisionError("division by the zero rational function")

        def div(a, b):
            if b == 0:
                raise OverrideConflict("override quotient divides by zero")
            return a / b

        return self._combine(other, _pmul(self.num, other.den), _pmul(self.den, other.num), div)

    def __pow__(self, k: int) -> RationalFn:
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a nonnegative integer")
        out = RationalFn.constant(1)
        for _ in range(k):
            out = out * self
        return out

    def scale(self, c) -> RationalFn:
        c = Fraction(c)
        return RationalFn.make(
            _pscale(self.num, c), self.den, {m: v * c for m, v in self.overrides}
        )

    def compose_affine(self, a: int, b: int) -> RationalFn:
        return compose_affine(self, a, b)

    # display ----------------------------------------------------------------

    def __str__(self) -> str:
        top = _poly_str(self.num)
        if self.den == (1,):
            return top
        bottom = _poly_str(self.den)
        if len([c for c in self.num if c]) > 1:
            top = f"({top})"
        if len([c for c in self.den if c]) > 1 or self.den[-1] != 1:
            bottom = f"({bottom})"
        return f"{top}/{bottom}"

    def describe(self) -> str:
        text = str(self)
        if self.overrides:
            text += " with " + ", ".join(f"f({m}) = {v}" for m, v in self.overrides)
        return text


def _as_rf(x) -> RationalFn:
    if isinstance(x, RationalFn):
        return x
    if isinstance(x, (int, Fraction)):
        return RationalFn.constant(x)
    raise TypeError(f"cannot use {type(x).__name__} as a rational function")


class _RationalAlgebra:
    def number(self, text: str) -> RationalFn:
        if "." in text:
            raise ValueError("only integer literals are allowed")
        return RationalFn.constant(int(text))

    def name(self, ident: str) -> RationalFn:
        if ident != "n":
            raise ValueError(f"unknown symbol {ident!r}; the only variable is 'n'")
        return RationalFn.identity()

    def call(self, ident: str, args):
        raise ValueError(f"function calls are not allowed in rational expressions ({ident})")

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def div(self, a, b):
        if not b.num:
            raise ValueError("division by the zero polynomial")
        return a / b

    def neg(self, a):
        return -a

    def pow(self, a, k):
        return a**k


def parse(text: str, overrides: Mapping | None = None) -> RationalFn:
    """Parse a rational expression in ``n`` into canonical form."""
    f = parse_with(text, _RationalAlgebra())
    return f.with_overrides(overrides) if overrides else f


def eval_exact(f: RationalFn, n: int) -> Fraction:
    v = f.value_at(n)
    if v is None:
        raise PoleError(n)
    return v


def analyze_decay(f: RationalFn) -> DecayReport:
    """Degree arithmetic for the convergence preconditions.

    ``difference_order`` is the exponent e with |f(n+1) - f(n)| of exact order
    n**-e.  It is computed after removing the limit of f, so a function tending
    to a nonzero constant still reports its true difference order.
    """
    poles = f.poles()
    if f.is_constant() or not f.num:
        limit = Fraction(f.num[0], f.den[0]) if f.num else Fraction(0)
        return DecayReport(limit == 0, math.inf, poles, limit)
    dn, dd = f.deg_num, f.deg_den
    if dn < dd:
        return DecayReport(True, dd - dn + 1, poles, Fraction(0))
    if dn > dd:
        return DecayReport(False, dd - dn + 1, poles, None)
    limit = Fraction(f.num[-1], f.den[-1])
    rest = _padd(f.num, _pneg(_pscale(f.den, limit)))
    return DecayReport(False, dd - (len(rest) - 1) + 1, poles, limit)


def compose_affine(f: RationalFn, a: int, b: int) -> RationalFn:
    """g(n) = f(a*n + b); overrides at indices a*k + b survive at k."""
    if a <= 0 or b < 0:
        raise ValueError("need a > 0 and b >= 0")
    num = _pcompose_affine(f.num, a, b)
    den = _pcompose_affine(f.den, a, b)
    over = {(m - b) // a: v for m, v in f.overrides if m >= b and (m - b) % a == 0}
    return RationalFn.make(num, den, over)


def rf_arith(f: RationalFn, g, op: str) -> RationalFn:
    """``op`` is ``"add"``, ``"sub"`` or ``"scale"`` (then ``g`` is a rational)."""
    if op == "add":
        return f + g
    if op == "sub":
        return f - g
    if op == "scale":
        return f.scale(g)
    raise ValueError(f"unknown operation {op!r}")
