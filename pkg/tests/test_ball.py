from fractions import Fraction

import mpmath
import pytest
from hypothesis import assume, given, strategies as st

from digitseries import Ball, ComplexBall

fractions = st.fractions(min_value=-10**6, max_value=10**6, max_denominator=10**6)
precs = st.sampled_from([32, 53, 64, 100])


def reference(fn, x, prec=600):
    with mpmath.workprec(prec):
        return Ball(fn(mpmath.mpf(x.numerator) / x.denominator), mpmath.mpf(2) ** (-prec + 40), prec)


@given(fractions, fractions, precs)
def test_arithmetic_inclusion(a, b, p):
    A, B = Ball(a, 0, p), Ball(b, 0, p)
    assert A.contains(a) and B.contains(b)
    assert (A + B).contains(a + b)
    assert (A - B).contains(a - b)
    assert (A * B).contains(a * b)
    if b != 0 and not B.contains_zero():
        assert (A / B).contains(a / b)
    assert (A**3).contains(a**3)


@given(fractions, fractions, precs)
def test_chained_inclusion(a, b, p):
    A, B = Ball(a, 0, p), Ball(b, 0, p)
    x = (A * A - B) * (A + 3) - B * B * B
    assert x.contains((a * a - b) * (a + 3) - b**3)


@given(st.fractions(min_value=Fraction(1, 1000), max_value=1000, max_denominator=1000), precs)
def test_transcendental_inclusion(x, p):
    X = Ball(x, 0, p)
    assert X.log().overlaps(reference(mpmath.log, x))
    assert X.sqrt().overlaps(reference(mpmath.sqrt, x))
    y = x / 100
    assert Ball(y, 0, p).exp().overlaps(reference(mpmath.exp, y))


@given(st.fractions(min_value=-4, max_value=4, max_denominator=97), precs)
def test_trig_pi_inclusion(q, p):
    c, s = Ball.cos_sin_pi(q, p)
    with mpmath.workprec(600):
        arg = mpmath.pi * mpmath.mpf(q.numerator) / q.denominator
        assert c.overlaps(Ball(mpmath.cos(arg), mpmath.mpf(2) ** -560, 600))
        assert s.overlaps(Ball(mpmath.sin(arg), mpmath.mpf(2) ** -560, 600))


def test_pi_and_radius_grows_under_rounding():
    with mpmath.workprec(300):
        assert Ball.pi(64).overlaps(Ball(+mpmath.pi, mpmath.mpf(2) ** -290, 300))
    third = Ball(Fraction(1, 3), 0, 53)
    assert third.rad > 0
    total = third + third + third
    assert total.rad >= third.rad and total.contains(1)


def test_exact_values_stay_exact():
    assert Ball(5, 0, 32).is_exact()
    assert (Ball(3, 0, 64) * Ball(7, 0, 64)).contains(21)
    assert Ball(Fraction(1, 4), 0, 32).is_exact()


def test_division_by_ball_containing_zero():
    with pytest.raises(ZeroDivisionError):
        Ball(1) / Ball(0, 1)


def test_complex_ball_basics():
    z = ComplexBall(Ball(1), Ball(2))
    w = z * z.conjugate()
    assert w.re.contains(5) and w.im.contains(0)
    r = ComplexBall.root_of_unity(8, 1, 128)
    sq = r * r
    assert sq.re.contains(0) is True or sq.re.overlaps(Ball(0))
    assert sq.im.overlaps(Ball(1))
    q = z / ComplexBall(Ball(0), Ball(1))
    assert q.re.contains(2) and q.im.contains(-1)


@given(fractions, st.integers(0, 40))
def test_with_prec_keeps_inclusion(a, k):
    A = Ball(a, 0, 200)
    assert A.with_prec(20 + k).contains(a)
    assert A.add_error(mpmath.mpf(2) ** -10).contains(a + Fraction(1, 2048))
