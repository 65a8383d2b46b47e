import math

import pytest

from digitseries import LinearTerm, LogTerm, parse, parse_term
from digitseries.cyclo import parse_cyclo
from digitseries.terms import decay_exponent, term_to_json


def test_parse_term_kinds():
    assert parse_term("1/(n+1)^2") == parse("1/(n+1)^2")
    t = parse_term("log((2*n+1)^2/((n+1)*(4*n+1)))")
    assert isinstance(t, LogTerm) and t.q == parse("(2*n+1)^2/((n+1)*(4*n+1))")
    lt = parse_term([["1", "1/(2*n)"], ["-i", "1/(2*n+1)"]])
    assert isinstance(lt, LinearTerm)
    assert lt.parts[1][0] == parse_cyclo("-i")


def test_term_json_round_trip():
    for spec in ["(4*n+1)/(n*(n+1))", "log(n/(n+1))", [["1", "1/(2*n)"], ["-zeta(5,1)", "1/(2*n+1)"]]]:
        t = parse_term(spec)
        assert parse_term(term_to_json(t)) == t


def test_log_term_algebra():
    a = LogTerm(parse("(n+2)/(n+1)"))
    b = LogTerm(parse("(n+3)/(n+2)"))
    assert (a + b).q == parse("(n+3)/(n+1)")
    assert (a - a).is_zero()
    assert a.scale(2).q == parse("(n+2)^2/(n+1)^2")
    assert a.scale(-1).q == parse("(n+1)/(n+2)")
    assert a.compose_affine(2, 1).q == parse("(2*n+3)/(2*n+2)")
    assert str(a) == "log((n + 2)/(n + 1))"


def test_decay_exponents():
    assert decay_exponent(parse("1/n")) == 1
    assert decay_exponent(parse("0")) == math.inf
    assert decay_exponent(LogTerm(parse("(n+2)/(n+1)"))) == 1
    assert decay_exponent(LogTerm(parse("(2*n+1)^2/((n+1)*(4*n+1))"))) == 1  # q = 1 - n/(4n^2+5n+1)
    assert decay_exponent(LogTerm(parse("(n+1)^2/(n*(n+2))"))) == 2
    assert decay_exponent(LogTerm(parse("2*n/(n+1)"))) == -math.inf
    assert decay_exponent(parse_term([["1", "1/n^2"], ["i", "1/n"]])) == 1


def test_bad_coefficient_rejected():
    with pytest.raises(ValueError):
        parse_term([["zeta(0,1)", "1/n"]])
