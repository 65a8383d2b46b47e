"""Midpoint-radius arithmetic on top of ``mpmath.libmp``.

A :class:`Ball` holds a binary floating-point midpoint rounded to ``prec`` bits
and a nonnegative radius. Every operation returns a ball that contains the exact
result whenever the inputs contain theirs. Midpoints are rounded to nearest and
the rounding error (one ulp, generously) is added to the radius. Radii are
combined with upward rounding at a short fixed precision.

Transcendental functions are evaluated with 20 guard bits before rounding to
``prec``. Their last-ulp error is covered by an extra ulp of radius.
"""

from __future__ import annotations

import functools
import threading
from fractions import Fraction
from numbers import Rational

import mpmath
from mpmath import libmp

__all__ = ["Ball", "ComplexBall", "DEFAULT_PREC", "mp_serialized"]

DEFAULT_PREC = 128
_RP = 40  # precision of radius arithmetic
_GUARD = 20

_ZERO = libmp.fzero
_ONE = libmp.fone

# mpmath keeps one process-wide working precision.  Code that touches it runs
# under this lock, with the precision pinned, so concurrent callers (and callers
# that changed mp.prec themselves) all see the same bits.
_MP_LOCK = threading.RLock()


def mp_serialized(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        with _MP_LOCK, mpmath.workprec(53):
            return fn(*args, **kwargs)

    return wrapper


def _up_add(a, b):
    return libmp.mpf_add(a, b, _RP, "u")


def _up_mul(a, b):
    return libmp.mpf_mul(a, b, _RP, "u")


def _up_div(a, b):
    return libmp.mpf_div(a, b, _RP, "u")


def _up_abs(a):
    return libmp.mpf_abs(a, _RP, "u")


def _down_abs(a):
    return libmp.mpf_abs(a, _RP, "d")


def _ulp(x, prec):
    """An upper bound on one unit in the last place of ``x`` at ``prec`` bits."""
    sign, man, exp, bc = x
    if not man:
        return _ZERO
    return (0, 1, exp + bc - prec, 1)


def _to_mpf(x, prec: int):
    if isinstance(x, int):
        return libmp.from_int(x, prec, "n")
    if isinstance(x, Rational):
        return libmp.from_rational(int(x.numerator), int(x.denominator), prec, "n")
    if isinstance(x, float):
        return libmp.from_float(x)
    if isinstance(x, mpmath.mpf):
        return x._mpf_
    if isinstance(x, str):
        return libmp.from_str(x, prec, "n")
    raise TypeError(f"cannot convert {type(x).__name__} to a ball")


def _mpf_fraction(x) -> Fraction:
    sign, man, exp, _ = x
    if not man:
        return Fraction(0)
    v = Fraction(man) * Fraction(2) ** exp
    return -v if sign else v


def _exact_in(x, value, prec: int) -> bool:
    """True when ``value`` (already rounded at ``prec``) equals ``x`` exactly."""
    if isinstance(x, int):
        return libmp.from_int(x) == value
    if isinstance(x, Rational):
        d = int(x.denominator)
        return d & (d - 1) == 0 and _mpf_fraction(value) == x
    return isinstance(x, float) or isinstance(x, mpmath.mpf)


class Ball:
    """A real number enclosed as ``mid +/- rad``."""

    __slots__ = ("_mid", "_rad", "prec")

    def __init__(self, mid=0, rad=0, prec: int = DEFAULT_PREC):
        self.prec = int(prec)
        if isinstance(mid, tuple):
            m = mid
            exact = True
        else:
            m = _to_mpf(mid, self.prec)
            exact = _exact_in(mid, m, self.prec)
        r = rad if isinstance(rad, tuple) else _to_mpf(rad, _RP)
        r = _up_abs(r)
        if not exact:
            r = _up_add(r, _ulp(m, self.prec))
        self._mid = m
        self._rad = r

    # construction helpers ---------------------------------------------------

    @classmethod
    def exact(cls, man: int, exp: int, prec: int = DEFAULT_PREC) -> Ball:
        """The ball ``man * 2**exp`` with zero radius (no rounding)."""
        return cls(libmp.from_man_exp(man, exp), _ZERO, prec)

    @classmethod
    def pi(cls, prec: int = DEFAULT_PREC) -> Ball:
        m = libmp.mpf_pi(prec + _GUARD, "n")
        return cls._rounded(m, prec)

    @classmethod
    def cos_sin_pi(cls, q, prec: int = DEFAULT_PREC) -> tuple[Ball, Ball]:
        """Enclosures of ``cos(pi*q)`` and ``sin(pi*q)`` for rational ``q``."""
        q = Fraction(q)
        if q.denominator <= 2:
            k = q.numerator % (2 * q.denominator)
            table = {(0, 1): (1, 0), (1, 1): (-1, 0), (1, 2): (0, 1), (3, 2): (0, -1)}
            c, s = table[(k, q.denominator)]
            return cls(c, 0, prec), cls(s, 0, prec)
        x = libmp.from_rational(q.numerator, q.denominator, prec + 2 * _GUARD, "n")
        c, s = libmp.mpf_cos_sin_pi(x, prec + _GUARD, "n")
        # argument rounding error times pi bounds the derivative contribution
        arg_err = _up_mul(_ulp(x, prec + 2 * _GUARD), (0, 1, 2, 1))
        cb, sb = cls._rounded(c, prec), cls._rounded(s, prec)
        cb._rad = _up_add(cb._rad, arg_err)
        sb._rad = _up_add(sb._rad, arg_err)
        return cb, sb

    @classmethod
    def _rounded(cls, m_guarded, prec: int) -> Ball:
        m = libmp.mpf_pos(m_guarded, prec, "n")
        rad = _up_add(_up_mul(_ulp(m, prec), (0, 1, 1, 1)), _ulp(m_guarded, prec + _GUARD))
        return cls(m, rad, prec)

    # accessors --------------------------------------------------------------

    # make_mpf wraps the tuple as is; mpmath.mpf(tuple) would round it to the
    # global context precision.

    @property
    def mid(self) -> mpmath.mpf:
        return mpmath.mp.make_mpf(self._mid)

    @property
    def rad(self) -> mpmath.mpf:
        return mpmath.mp.make_mpf(self._rad)

    @property
    def mid_raw(self):
        return self._mid

    @property
    def rad_raw(self):
        return self._rad

    def upper(self) -> mpmath.mpf:
        return mpmath.mpf(libmp.mpf_add(self._mid, self._rad, self.prec + _RP, "u"))

    def lower(self) -> mpmath.mpf:
        return mpmath.mpf(libmp.mpf_sub(self._mid, self._rad, self.prec + _RP, "d"))

    def abs_upper(self):
        return _up_add(_up_abs(self._mid), self._rad)

    def abs_lower(self):
        d = libmp.mpf_sub(_down_abs(self._mid), self._rad, _RP, "d")
        return d if libmp.mpf_sign(d) > 0 else _ZERO

    def is_exact(self) -> bool:
        return self._rad == _ZERO

    def contains_zero(self) -> bool:
        return libmp.mpf_le(_down_abs(self._mid), self._rad)

    def contains(self, other) -> bool:
        """True if the exact value (or whole ball) ``other`` lies inside ``self``."""
        if not isinstance(other, Ball):
            q = Fraction(other)
            # exact rational comparison |q - mid| <= rad
            return abs(q - _mpf_fraction(self._mid)) <= _mpf_fraction(self._rad)
        gap = libmp.mpf_sub(self._rad, other._rad, self.prec + _RP, "d")
        if libmp.mpf_sign(gap) < 0:
            return False
        dist = libmp.mpf_abs(libmp.mpf_sub(self._mid, other._mid, self.prec + _RP, "u"))
        return libmp.mpf_le(dist, gap)

    def overlaps(self, other: Ball) -> bool:
        dist = libmp.mpf_abs(libmp.mpf_sub(self._mid, other._mid, self.prec + _RP, "d"))
        return libmp.mpf_le(dist, _up_add(self._rad, other._rad))

    # arithmetic -------------------------------------------------------------

    def _coerce(self, other) -> Ball:
        if isinstance(other, Ball):
            return other
        return Ball(other, 0, self.prec)

    def _finish(self, m, rad, prec) -> Ball:
        return Ball(m, _up_add(rad, _ulp(m, prec)), prec)

    def __add__(self, other) -> Ball:
        other = self._coerce(other)
        p = max(self.prec, other.prec)
        m = libmp.mpf_add(self._mid, other._mid, p, "n")
        return self._finish(m, _up_add(self._rad, other._rad), p)

    __radd__ = __add__

    def __neg__(self) -> Ball:
        return Ball(libmp.mpf_neg(self._mid), self._rad, self.prec)

    def __pos__(self) -> Ball:
        return self

    def __sub__(self, other) -> Ball:
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> Ball:
        return self._coerce(other) - self

    def __mul__(self, other) -> Ball:
        other = self._coerce(other)
        p = max(self.prec, other.prec)
        m = libmp.mpf_mul(self._mid, other._mid, p, "n")
        rad = _up_add(
            _up_add(_up_mul(_up_abs(self._mid), other._rad), _up_mul(_up_abs(other._mid), self._rad)),
            _up_mul(self._rad, other._rad),
        )
        return self._finish(m, rad, p)

    __rmul__ = __mul__

    def __truediv__(self, other) -> Ball:
        other = self._coerce(other)
        if other.contains_zero():
            raise ZeroDivisionError("division by a ball containing zero")
        p = max(self.prec, other.prec)
        m = libmp.mpf_div(self._mid, other._mid, p, "n")
        num = _up_add(_up_mul(_up_abs(self._mid), other._rad), _up_mul(_up_abs(other._mid), self._rad))
        low = libmp.mpf_sub(_down_abs(other._mid), other._rad, _RP, "d")
        den = libmp.mpf_mul(_down_abs(other._mid), low, _RP, "d")
        return self._finish(m, _up_div(num, den), p)

    def __rtruediv__(self, other) -> Ball:
        return self._coerce(other) / self

    def __pow__(self, k: int) -> Ball:
        if not isinstance(k, int):
            raise TypeError("only integer powers are supported")
        if k < 0:
            return Ball(1, 0, self.prec) / (self ** (-k))
        result = Ball(1, 0, self.prec)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def scale2(self, e: int) -> Ball:
        """Exact multiplication by ``2**e``."""
        return Ball(libmp.mpf_shift(self._mid, e), libmp.mpf_shift(self._rad, e), self.prec)

    def with_prec(self, prec: int) -> Ball:
        m = libmp.mpf_pos(self._mid, prec, "n")
        return Ball(m, _up_add(self._rad, _ulp(m, prec) if m != self._mid else _ZERO), prec)

    def add_error(self, err) -> Ball:
        """Widen the radius by ``err`` (an upper bound, any real type)."""
        e = err if isinstance(err, tuple) else _to_mpf(err, _RP)
        return Ball(self._mid, _up_add(self._rad, _up_abs(e)), self.prec)

    # elementary functions ----------------------------------------------------

    def exp(self) -> Ball:
        p = self.prec
        m = libmp.mpf_exp(self._mid, p + _GUARD, "n")
        out = Ball._rounded(m, p)
        if self._rad != _ZERO:
            # |exp(x) - exp(mid)| <= exp(mid) * (exp(rad) - 1)
            if libmp.mpf_le(self._rad, (0, 1, -1, 1)):
                er = _up_mul(self._rad, (0, 1, 1, 1))  # expm1(r) <= 2r for r <= 1/2
            else:
                er = libmp.mpf_sub(libmp.mpf_exp(self._rad, _RP, "u"), _ONE, _RP, "u")
                er = _up_mul(er, (0, 1, 1, 1))
            out._rad = _up_add(out._rad, _up_mul(_up_mul(_up_abs(m), (0, 1, 1, 1)), er))
        return out

    def log(self) -> Ball:
        if libmp.mpf_sign(self._mid) <= 0 or self.contains_zero():
            raise ValueError("log of a ball that is not strictly positive")
        p = self.prec
        m = libmp.mpf_log(self._mid, p + _GUARD, "n")
        out = Ball._rounded(m, p)
        if self._rad != _ZERO:
            low = libmp.mpf_sub(self._mid, self._rad, _RP, "d")
            out._rad = _up_add(out._rad, _up_div(self._rad, low))
        return out

    def sqrt(self) -> Ball:
        if libmp.mpf_sign(self._mid) < 0 or (self._rad != _ZERO and self.contains_zero()):
            raise ValueError("sqrt of a ball that is not strictly positive")
        p = self.prec
        m = libmp.mpf_sqrt(self._mid, p + _GUARD, "n")
        out = Ball._rounded(m, p)
        if self._rad != _ZERO:
            low = libmp.mpf_sub(self._mid, self._rad, _RP, "d")
            out._rad = _up_add(out._rad, _up_div(self._rad, libmp.mpf_sqrt(low, _RP, "d")))
        return out

    # display ----------------------------------------------------------------

    def __float__(self) -> float:
        return libmp.to_float(self._mid)

    def __repr__(self) -> str:
        return f"Ball({libmp.to_str(self._mid, 20)} +/- {libmp.to_str(self._rad, 3)})"

    def __eq__(self, other) -> bool:
        return isinstance(other, Ball) and self._mid == other._mid and self._rad == other._rad

    def __hash__(self):
        return hash((self._mid, self._rad))


class ComplexBall:
    """A rectangle ``re + i*im`` of two real balls."""

    __slots__ = ("re", "im")

    def __init__(self, re, im=0, prec: int = DEFAULT_PREC):
        self.re = re if isinstance(re, Ball) else Ball(re, 0, prec)
        self.im = im if isinstance(im, Ball) else Ball(im, 0, self.re.prec)

    @property
    def prec(self) -> int:
        return max(self.re.prec, self.im.prec)

    @classmethod
    def root_of_unity(cls, order: int, k: int, prec: int = DEFAULT_PREC) -> ComplexBall:
        """``exp(2*pi*i*k/order)``."""
        c, s = Ball.cos_sin_pi(Fraction(2 * k, order), prec)
        return cls(c, s)

    def _coerce(self, other) -> ComplexBall:
        if isinstance(other, ComplexBall):
            return other
        if isinstance(other, Ball):
            return ComplexBall(other, Ball(0, 0, other.prec))
        if isinstance(other, complex):
            return ComplexBall(Ball(other.real, 0, self.prec), Ball(other.imag, 0, self.prec))
        return ComplexBall(Ball(other, 0, self.prec), Ball(0, 0, self.prec))

    def __add__(self, other) -> ComplexBall:
        o = self._coerce(other)
        return ComplexBall(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self) -> ComplexBall:
        return ComplexBall(-self.re, -self.im)

    def __sub__(self, other) -> ComplexBall:
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> ComplexBall:
        return self._coerce(other) - self

    def __mul__(self, other) -> ComplexBall:
        o = self._coerce(other)
        if o.im.is_exact() and o.im.mid_raw == _ZERO:
            return ComplexBall(self.re * o.re, self.im * o.re)
        return ComplexBall(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other) -> ComplexBall:
        o = self._coerce(other)
        den = o.re * o.re + o.im * o.im
        num = self * o.conjugate()
        return ComplexBall(num.re / den, num.im / den)

    def conjugate(self) -> ComplexBall:
        return ComplexBall(self.re, -self.im)

    def exp(self) -> ComplexBall:
        if not (self.im.is_exact() and self.im.mid_raw == _ZERO):
            raise NotImplementedError("complex exponent")
        return ComplexBall(self.re.exp(), Ball(0, 0, self.prec))

    def rad_upper(self):
        """Upper bound on the modulus of (value - midpoint)."""
        return _up_add(self.re.rad_raw, self.im.rad_raw)

    def abs_upper(self):
        return _up_add(self.re.abs_upper(), self.im.abs_upper())

    def contains(self, other) -> bool:
        o = self._coerce(other)
        return self.re.contains(o.re) and self.im.contains(o.im)

    def overlaps(self, other) -> bool:
        o = self._coerce(other)
        return self.re.overlaps(o.re) and self.im.overlaps(o.im)

    def mid_complex(self) -> mpmath.mpc:
        return mpmath.mpc(self.re.mid, self.im.mid)

    def __complex__(self) -> complex:
        return complex(float(self.re), float(self.im))

    def __repr__(self) -> str:
        return f"ComplexBall({self.re!r}, {self.im!r})"
