import math
from fractions import Fraction

import mpmath
import pytest
import sympy
from hypothesis import given, strategies as st

from digitseries import (
    Ball,
    InadmissibleJob,
    PoleError,
    RationalFn,
    SeriesJob,
    StrongMultSeq,
    beta_numeric,
    beta_odd,
    euler_number,
    harmonic,
    paperfold_rhs,
    parse,
    parse_constant,
    parse_sequence,
    reduction_factor,
    shap_combination,
    sum_accelerated,
    verify_identity,
)
from digitseries.catalog import IdentityRecord
from digitseries.closed_forms import cos_pi, log_of, rational, sin_pi
from digitseries.terms import LogTerm


def hi(x, prec=400):
    with mpmath.workprec(prec):
        return Ball(x(), mpmath.mpf(2) ** (40 - prec), prec)


# --- harmonic numbers ------------------------------------------------------------------


def test_harmonic_examples():
    assert harmonic(3) == Fraction(11, 6)
    assert harmonic(2, alternating=True) == Fraction(1, 2)
    assert harmonic(3, alternating=True) == Fraction(5, 6)
    assert harmonic(0) == harmonic(0, alternating=True) == 0


@pytest.mark.parametrize("n", range(1, 30, 4))
def test_harmonic_against_sympy(n):
    assert harmonic(n) == Fraction(str(sympy.harmonic(n)))


# --- Euler numbers ---------------------------------------------------------------------


def sech_series_exact(K):
    # 1/cosh t = sum a_k t^(2k): invert c_k = 1/(2k)! term by term
    c = [Fraction(1, math.factorial(2 * k)) for k in range(K + 1)]
    a = [Fraction(1)]
    for k in range(1, K + 1):
        a.append(-sum(c[j] * a[k - j] for j in range(1, k + 1)))
    return a


def sech_series_ball(K, prec=256):
    c = [Ball(1, 0, prec) / Ball(math.factorial(2 * k), 0, prec) for k in range(K + 1)]
    a = [Ball(1, 0, prec)]
    for k in range(1, K + 1):
        acc = Ball(0, 0, prec)
        for j in range(1, k + 1):
            acc = acc + c[j] * a[k - j]
        a.append(-acc)
    return a


def test_euler_examples():
    assert euler_number(0) == 1
    assert euler_number(2) == -1
    assert euler_number(4) == 5
    with pytest.raises(ValueError):
        euler_number(3)


def test_euler_matches_sech_coefficients():
    exact = sech_series_exact(10)
    balls = sech_series_ball(10)
    for k in range(11):
        E = euler_number(2 * k)
        assert E == exact[k] * math.factorial(2 * k)
        assert (balls[k] * math.factorial(2 * k)).contains(E)
        assert E == sympy.euler(2 * k)


# --- Dirichlet beta -------------------------------------------------------------------------


def test_beta_odd_forms():
    assert str(beta_odd(0)) == "pi/4"
    assert str(beta_odd(1)) == "pi^3/32"
    assert str(beta_odd(2)) == "5*pi^5/1536"
    assert beta_odd(2) == parse_constant("5*pi^5/1536")


@pytest.mark.parametrize("d", range(6))
def test_beta_numeric_contains_closed_form(d):
    b = beta_numeric(2 * d + 1, 128)
    closed = beta_odd(d).evaluate(200).re
    assert b.overlaps(closed)
    assert b.rad < 1e-35
    with mpmath.workprec(300):
        assert b.overlaps(hi(lambda: mpmath.dirichlet(2 * d + 1, [0, 1, 0, -1])))


def test_beta_two_is_catalan():
    b = beta_numeric(2, 128)
    assert b.overlaps(hi(lambda: +mpmath.catalan))
    assert abs(float(b.mid) - 0.9159655941772190) < 1e-15


def test_beta_fractional_argument():
    b = beta_numeric(Fraction(1, 2), 96)
    assert b.overlaps(hi(lambda: mpmath.dirichlet(mpmath.mpf(1) / 2, [0, 1, 0, -1])))


# --- paperfolding ---------------------------------------------------------------------------


def test_paperfold_forms():
    assert str(paperfold_rhs(0)) == "pi/2"
    assert str(paperfold_rhs(1)) == "pi^3/28"
    assert str(paperfold_rhs(2)) == "5*pi^5/1488"
    assert reduction_factor(2) == Fraction(4, 3)


@pytest.mark.parametrize("d", range(4))
def test_paperfold_rhs_is_reduced_beta(d):
    s = 2 * d + 1
    lhs = paperfold_rhs(d).evaluate(128).re
    rhs = beta_odd(d).evaluate(128).re * Ball(reduction_factor(s), 0, 128)
    assert lhs.overlaps(rhs)


@pytest.mark.parametrize("s", [1, 2, 3])
def test_paperfold_reduction(s):
    res = sum_accelerated(SeriesJob(parse_sequence("paperfold"), parse(f"1/(n+1)^{s}"), 0, 1e-12))
    red = beta_numeric(s, 128) * Ball(reduction_factor(s), 0, 128)
    assert abs(float(res.value.re.mid - red.mid)) <= float(res.radius) + float(red.rad)


# --- relations between S1 and S2 --------------------------------------------------------------


def S(seq, k, second, tol=1e-12):
    B = seq.base
    start = 1 if k == 0 else 0
    expr = f"1/(({B}*n+{k})*({B}*n+{k}+1))" if second else f"1/({B}*n+{k})"
    res = sum_accelerated(SeriesJob(seq, parse(expr), start, tol))
    return res.value.re


def random_seq(rng):
    choices = [Fraction(k, 4) for k in range(-4, 5)]
    while True:
        B = rng.randint(2, 5)
        seq = StrongMultSeq(B, (1,) + tuple(rng.choice(choices) for _ in range(B - 1)))
        if seq.lemma_ok and abs(seq.sigma.to_fraction()) <= Fraction(B, 2):
            return seq


def test_first_theorem_relations(rng):
    for _ in range(8):
        seq = random_seq(rng)
        B = seq.base
        u = [v.to_fraction() for v in seq.values]
        S1 = [S(seq, k, False) for k in range(B)]
        S2 = [S(seq, k, True) for k in range(B)]
        first = S1[0] * (B - 1)
        for k in range(1, B):
            first = first - S1[k] * u[k]
        assert abs(float(first.mid)) < 1e-10, u
        second = Ball(0, 0, 128)
        for k in range(B):
            second = second + S2[k] * (B - u[k])
        assert abs(float(second.mid) - (B - 1)) < 1e-10, u
        for k in range(B - 1):
            delta = 1 if k == 0 else 0
            gap = S2[k] - (S1[k] - (S1[k + 1] - delta))
            assert abs(float(gap.mid)) < 1e-10, (u, k)


# --- the GSR combination -------------------------------------------------------------------


def test_shap_reciprocal():
    term, rhs = shap_combination(parse("1/n", {0: 1}))
    assert term == parse("(8*n^2+4*n+1)/(2*n*(2*n+1)*(4*n+1))")
    assert rhs == rational(1)


def test_shap_log():
    term, rhs = shap_combination(LogTerm(parse("n/(n+1)", {0: 1})))
    assert isinstance(term, LogTerm)
    assert term.q == parse("(2*n+1)^4/((n+1)^2*(4*n+1)^2)")
    assert rhs.evaluate(128).re.overlaps(parse_constant("-log(2)").evaluate(128).re)


@pytest.mark.parametrize(
    "R, err",
    [(parse("7"), InadmissibleJob), (parse("1/(n-1)"), PoleError), (parse("n/(n+2)"), InadmissibleJob)],
)
def test_shap_rejects_degenerate(R, err):
    with pytest.raises(err):
        shap_combination(R)


def random_shap_R(rng):
    dd = rng.randint(1, 3)
    dn = rng.randint(0, dd - 1)
    num = [rng.randint(-9, 9) for _ in range(dn)] + [rng.randint(1, 9)]
    den = [rng.randint(1, 9) for _ in range(dd + 1)]  # positive: no pole at n >= 0
    return RationalFn.make(num, den)


def test_shap_property(rng):
    for i in range(20):
        R = random_shap_R(rng)
        term, rhs = shap_combination(R)
        rec = IdentityRecord(f"shap-{i}", "gsr", str(term), 1, str(rhs), 1e-8)
        report = verify_identity(rec)
        assert report["status"] == "pass", (str(R), report)


# --- symbolic constants ----------------------------------------------------------------------


def test_constant_builders():
    assert str(sin_pi(Fraction(2, 5))) == "sin(2*pi/5)"
    assert cos_pi(Fraction(1, 2)) == rational(0)
    assert cos_pi(1) == rational(-1)
    assert log_of(1) == rational(0)
    assert parse_constant("sqrt(4)") == rational(2)
    assert parse_constant("0.25") == rational(Fraction(1, 4))


@pytest.mark.parametrize(
    "text, value",
    [
        ("pi/2", lambda: mpmath.pi / 2),
        ("-log(2)/2", lambda: -mpmath.log(2) / 2),
        ("1/sqrt(2)", lambda: 1 / mpmath.sqrt(2)),
        ("sin(2*pi/5)", lambda: mpmath.sin(2 * mpmath.pi / 5)),
        ("cos(pi/8)^2 - 1/3", lambda: mpmath.cos(mpmath.pi / 8) ** 2 - mpmath.mpf(1) / 3),
        ("5*pi^5/1488", lambda: 5 * mpmath.pi**5 / 1488),
        ("(1+sqrt(5))/4", lambda: (1 + mpmath.sqrt(5)) / 4),
    ],
)
def test_constant_values_and_radius(text, value):
    c = parse_constant(text)
    assert parse_constant(str(c)) == c
    for p in (64, 128, 256):
        b = c.evaluate(p).re
        ref = hi(value)
        assert b.overlaps(ref)
        assert b.rad <= abs(b.mid) * mpmath.mpf(2) ** (8 - p)


def test_constant_parse_errors():
    for bad in ["log(0)", "sqrt(-2)", "foo", "log(pi)", "pi^(1/2)"]:
        with pytest.raises(ValueError):
            parse_constant(bad)


ATOMS = ["1/3", "pi", "log(2)", "sqrt(2)", "sin(2*pi/5)", "cos(pi/7)", "i", "-5/12", "log(3/4)"]


@st.composite
def constants(draw, depth=3):
    if depth == 0 or draw(st.booleans()):
        return parse_constant(draw(st.sampled_from(ATOMS)))
    a, b = draw(constants(depth=depth - 1)), draw(constants(depth=depth - 1))
    op = draw(st.sampled_from(["+", "-", "*", "/", "^"]))
    if op == "+":
        return a + b
    if op == "-":
        return a - b
    if op == "*":
        return a * b
    if op == "^":
        return a ** draw(st.integers(0, 3))
    if abs(complex(b.evaluate(64))) < 1e-6:
        return a
    return a / b


@given(constants())
def test_constant_round_trip(c):
    again = parse_constant(str(c))
    assert again == c
    x, y = c.evaluate(128), again.evaluate(128)
    assert x.overlaps(y)
