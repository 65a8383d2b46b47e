import threading
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from digitseries import (
    CycloValue,
    DigitCounter,
    RecurrenceSeq,
    StrongMultSeq,
    digit_count,
    kronecker_minus_one,
    parse_sequence,
    partial_sum,
    recurrence_eval,
    strong_mult_eval,
)
from digitseries.cyclo import parse_cyclo


def to_base(n, b):
    out = []
    while n:
        n, d = divmod(n, b)
        out.append(d)
    return out


def pf_oracle(n):
    # v(n) from the odd part: n + 1 = 2^k * m, v(n) = +1 iff m = 1 mod 4
    m = n + 1
    while m % 2 == 0:
        m //= 2
    return 1 if m % 4 == 1 else -1


def gsr_overlap_oracle(n):
    s = bin(n)[2:]
    a = sum(1 for i in range(len(s) - 1) if s[i : i + 2] == "11")
    return -1 if a % 2 else 1


# --- examples ---------------------------------------------------------------


def test_strong_mult_examples():
    s = StrongMultSeq(2, (1, -1))
    assert strong_mult_eval(s, 3) == 1
    assert strong_mult_eval(s, 0) == 1
    si = StrongMultSeq(2, (1, CycloValue.gaussian(0, 1)))
    assert strong_mult_eval(si, 2) == CycloValue.gaussian(0, 1)
    s4 = StrongMultSeq(4, (1, -1, 1, -1))
    # 9 = 21 in base 4: u(2) * u(1) = 1 * -1
    assert strong_mult_eval(s4, 9) == (-1) ** sum(to_base(9, 4))


def test_digit_count_examples():
    assert digit_count(DigitCounter(2, 1), 5) == 2
    assert digit_count(DigitCounter(4, "sum"), 9) == 3
    assert digit_count(DigitCounter(2, "11"), 7) == 2
    assert digit_count(DigitCounter(7, 3), 0) == 0
    assert digit_count(DigitCounter(5, "sum"), 0) == 0


def test_recurrence_prefixes():
    pf = RecurrenceSeq("paperfold")
    gsr = RecurrenceSeq("gsr")
    assert [recurrence_eval(pf, n) for n in range(7)] == [1, 1, -1, 1, 1, -1, -1]
    assert [recurrence_eval(gsr, n) for n in range(8)] == [1, 1, 1, -1, 1, 1, -1, 1]


def test_recurrence_relations_and_sparse_memo():
    pf, gsr = RecurrenceSeq("paperfold"), RecurrenceSeq("gsr")
    for n in list(range(2000)) + [2**20 + 17, 2**33 + 5, 10**12]:
        assert pf(2 * n) == (-1) ** n
        assert pf(2 * n + 1) == pf(n)
        assert gsr(2 * n) == gsr(n)
        assert gsr(2 * n + 1) == (-1) ** n * gsr(n)


def test_kronecker_examples():
    assert kronecker_minus_one(1) == 1
    assert kronecker_minus_one(3) == -1
    assert kronecker_minus_one(2) == 1
    with pytest.raises(ValueError):
        kronecker_minus_one(0)


def test_partial_sum_examples():
    assert partial_sum(RecurrenceSeq("gsr"), 8) == 4
    assert partial_sum(StrongMultSeq(2, (1, -1)), 2) == 0
    assert partial_sum(RecurrenceSeq("gsr"), 0) == 0


# --- oracles over full ranges ------------------------------------------------


def test_gsr_equals_block_count_sign():
    gsr = RecurrenceSeq("gsr")
    vals = gsr.values_array(10**5)
    counter = DigitCounter(2, "11")
    for n in range(10**5):
        assert vals[n] == (-1) ** digit_count(counter, n)
    # the independent string oracle on a sample
    assert all(vals[n] == gsr_overlap_oracle(n) for n in range(0, 10**5, 7))


def test_paperfold_equals_kronecker():
    pf = RecurrenceSeq("paperfold")
    vals = pf.values_array(10**5)
    for n in range(1, 10**5 + 1):
        assert kronecker_minus_one(n) == vals[n - 1] == pf_oracle(n - 1)


@pytest.mark.parametrize("B", [2, 3, 4, 5, 10])
def test_strong_multiplicativity(B, rng):
    vals = [1] + [Fraction(rng.randint(-4, 4), 4) for _ in range(B - 1)]
    seq = StrongMultSeq(B, tuple(vals))
    for n in range(0, 10**4, 13):
        for k in range(B):
            assert seq(B * n + k) == seq(n) * seq(k)


def test_strong_multiplicativity_roots_of_unity():
    seq = parse_sequence("strongmult:B=3;u1=zeta(5,1);u2=zeta(5,3)")
    for n in range(0, 3000, 7):
        for k in range(3):
            assert seq(3 * n + k) == seq(n) * seq(k)
    v = seq(3 * 1234 + 2)
    assert v.is_exact and v.abs_is_one()


@pytest.mark.parametrize("B", range(2, 11))
def test_digit_sum_sign_parity(B):
    seq = parse_sequence(f"count:B={B};sum;sign")
    for n in range(10**4):
        assert seq(2 * n + 1) == -seq(2 * n)
        if B % 2:
            assert seq(n) == (-1) ** n


def test_digit_sum_decompositions():
    s2, s3 = DigitCounter(2, "sum"), DigitCounter(3, "sum")
    n12, n13, n23 = DigitCounter(2, 1), DigitCounter(3, 1), DigitCounter(3, 2)
    for n in range(10**4):
        assert s2.count(n) == n12.count(n)
        assert s3.count(n) == n13.count(n) + 2 * n23.count(n)
        assert s3.count(n) == sum(to_base(n, 3))


def test_partial_sum_envelopes():
    N = 2**20
    gsr = np.cumsum(RecurrenceSeq("gsr").values_array(N).astype(np.int64))
    pf = np.cumsum(RecurrenceSeq("paperfold").values_array(N).astype(np.int64))
    Ns = np.arange(1, N + 1)
    assert np.all(np.abs(gsr) <= 3 * np.sqrt(Ns))
    assert np.all(np.abs(pf) <= 4 * (1 + np.log2(Ns)))
    assert partial_sum(RecurrenceSeq("gsr"), N) == gsr[-1]


# --- flags and parsing -------------------------------------------------------


def test_lemma_flags():
    assert StrongMultSeq(2, (1, -1)).lemma_ok
    assert not StrongMultSeq(2, (1, 1)).lemma_ok  # sigma = B
    assert not StrongMultSeq(3, (1, 0, 0)).lemma_ok  # the excluded sequence
    big = StrongMultSeq(2, (1, 2))
    assert not big.bounded_by_one and not big.lemma_ok
    assert StrongMultSeq(2, (1, CycloValue.gaussian(0, 1))).lemma_ok
    with pytest.raises(ValueError):
        StrongMultSeq(2, (2, 1))


def test_parse_sequence_forms():
    assert parse_sequence("paperfold").kind == "paperfold"
    assert parse_sequence("gsr").kind == "gsr"
    s = parse_sequence("count:B=3;digit=1;sign")
    assert [s(n) for n in range(4)] == [1, -1, 1, -1]  # 3 = 10 in base 3
    raw = parse_sequence("count:B=2;block=11")
    assert [raw(n) for n in (3, 7, 15)] == [1, 2, 3]
    z = parse_sequence("strongmult:B=2;u1=zeta(5,1)")
    assert z(3) == CycloValue.root(5, 2)
    for bad in ["strongmult:B=2", "count:B=3", "nope", "strongmult:B=1;u1=1", "count:B=2;digit=1;junk=3"]:
        with pytest.raises(ValueError):
            parse_sequence(bad)


def test_cyclo_exact_closure():
    z = parse_cyclo("zeta(12,5)")
    w = parse_cyclo("i")
    p = z * w * z.conjugate()
    assert p.is_exact
    assert (z**12) == 1
    assert z.abs_is_one()
    assert parse_cyclo("1/2 + 1/2*i").abs_squared() == Fraction(1, 2)


@given(st.integers(0, 10**9), st.integers(2, 12))
def test_digit_count_matches_digits(n, B):
    ds = to_base(n, B)
    for j in range(B):
        assert digit_count(DigitCounter(B, j), n) == ds.count(j)
    assert digit_count(DigitCounter(B, "sum"), n) == sum(ds)


def test_concurrent_memo_readers():
    seq = RecurrenceSeq("gsr")
    reference = [gsr_overlap_oracle(n) for n in range(3 * 10**4)]
    errors = []

    def worker(offset):
        for n in range(offset, 3 * 10**4, 5):
            if seq(n) != reference[n]:
                errors.append(n)

    threads = [threading.Thread(target=worker, args=(k,)) for k in range(5)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert not errors
