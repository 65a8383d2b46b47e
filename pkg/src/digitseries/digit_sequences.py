"""Digit-based twisting sequences.

Three families are provided:

* :class:`StrongMultSeq` -- u(0) = 1 and u(B*n + k) = u(n) * u(k), so u(n) is the
  product of the values at the base-B digits of n;
* :class:`RecurrenceSeq` -- the regular paperfolding sequence and the
  Golay-Shapiro-Rudin sequence, both defined by even/odd index recurrences;
* :class:`CounterSeq` -- raw digit/block counters N_{j,B}(n), s_B(n), a(n) and
  their signs (-1)**count.

The expansion of 0 is empty, so every counter vanishes there.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Union

import numpy as np

from .cyclo import CycloValue, parse_cyclo

__all__ = [
    "digits",
    "DigitCounter",
    "digit_count",
    "StrongMultSeq",
    "strong_mult_eval",
    "RecurrenceSeq",
    "recurrence_eval",
    "CounterSeq",
    "kronecker_minus_one",
    "partial_sum",
    "parse_sequence",
    "PAPERFOLDING",
    "GOLAY_SHAPIRO_RUDIN",
]

MAX_BASE = 64
PAPERFOLDING = "paperfold"
GOLAY_SHAPIRO_RUDIN = "gsr"


def digits(n: int, base: int) -> list[int]:
    """Base-``base`` digits of ``n``, least significant first; [] for 0."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    out = []
    while n:
        n, r = divmod(n, base)
        out.append(r)
    return out


def _check_base(base: int) -> None:
    if not 2 <= base <= MAX_BASE:
        raise ValueError(f"base must lie in [2, {MAX_BASE}], got {base}")


@dataclass(frozen=True)
class DigitCounter:
    """Counts a digit ``j``, the digit sum (``"sum"``) or a block such as ``"11"``."""

    base: int
    target: Union[int, str]

    def __post_init__(self):
        _check_base(self.base)
        t = self.target
        if isinstance(t, int):
            if not 0 <= t < self.base:
                raise ValueError(f"digit {t} out of range for base {self.base}")
        elif t != "sum":
            block = self.block
            if not block or any(d >= self.base for d in block):
                raise ValueError(f"invalid block {t!r} for base {self.base}")

    @property
    def block(self) -> tuple[int, ...]:
        """Block digits, most significant first (as written)."""
        t = self.target
        if isinstance(t, int) or t == "sum":
            return ()
        if "," in t:
            return tuple(int(x) for x in t.split(","))
        return tuple(int(ch, 36) for ch in t)

    def count(self, n: int) -> int:
        ds = digits(n, self.base)
        t = self.target
        if isinstance(t, int):
            return ds.count(t)
        if t == "sum":
            return sum(ds)
        w = self.block
        written = ds[::-1]
        k = len(w)
        return sum(1 for i in range(len(written) - k + 1) if tuple(written[i : i + k]) == w)


def digit_count(counter: DigitCounter, n: int) -> int:
    return counter.count(n)


@dataclass(frozen=True, eq=False)
class StrongMultSeq:
    """Strongly B-multiplicative sequence given by ``values = [u(0), ..., u(B-1)]``."""

    base: int
    values: tuple[CycloValue, ...]
    label: str = ""
    bounded_by_one: bool = field(init=False)
    lemma_ok: bool = field(init=False)

    def __post_init__(self):
        _check_base(self.base)
        vals = tuple(CycloValue.coerce(v) for v in self.values)
        if len(vals) == self.base - 1:
            vals = (CycloValue.rational(1),) + vals
        if len(vals) != self.base:
            raise ValueError(f"need {self.base} values u(0..B-1), got {len(vals)}")
        if not (vals[0].is_exact and vals[0] == 1):
            raise ValueError("a strongly multiplicative sequence has u(0) = 1")
        object.__setattr__(self, "values", vals)
        bounded = all(v.abs_le_one() for v in vals)
        object.__setattr__(self, "bounded_by_one", bounded)
        object.__setattr__(self, "lemma_ok", self._lemma_hypotheses(bounded))

    def _lemma_hypotheses(self, bounded: bool) -> bool:
        vals = self.values
        if all(v.is_exact and v.is_zero() for v in vals[1:]):
            return False  # the excluded sequence (1, 0, 0, ...)
        sigma = self.sigma
        if sigma.is_exact:
            mono = sigma.monomial()
            if mono is not None:
                below = abs(mono[0]) < self.base
            else:
                sq = sigma.abs_squared()
                if sq.is_rational():
                    below = sq.to_fraction() < self.base**2
                else:
                    b = sq.to_ball().re
                    below = b.upper() < self.base**2
        else:
            b = sigma.ball
            below = (b.re * b.re + b.im * b.im).upper() < self.base**2
        return bounded and below

    @property
    def sigma(self) -> CycloValue:
        """sum_{0 <= k < B} u(k)."""
        total = CycloValue.rational(0)
        for v in self.values:
            total = total + v
        return total

    @classmethod
    def digit_sign(cls, base: int, digit: int) -> StrongMultSeq:
        """(-1)**N_{digit,B}(n)."""
        if digit == 0:
            raise ValueError("the sign of the digit-0 count is not strongly multiplicative")
        vals = [CycloValue.rational(-1 if k == digit else 1) for k in range(base)]
        return cls(base, tuple(vals), f"count:B={base};digit={digit};sign")

    @classmethod
    def digit_sum_power(cls, base: int, a) -> StrongMultSeq:
        """a**s_B(n) for a cyclotomic (or ball) value ``a``."""
        a = CycloValue.coerce(a)
        vals = [a**k for k in range(base)]
        return cls(base, tuple(vals), "")

    @property
    def spec(self) -> str:
        if self.label:
            return self.label
        parts = [f"B={self.base}"] + [f"u{k}={v}" for k, v in enumerate(self.values) if k]
        return "strongmult:" + ";".join(parts)

    def __call__(self, n: int) -> CycloValue:
        return strong_mult_eval(self, n)

    def is_monomial(self) -> bool:
        return all(v.monomial() is not None for v in self.values)

    def monomial_arrays(self, N: int):
        """Arrays describing u(n) = coef[n] * zeta_order**expo[n] for n < N.

        ``coef`` is an int8 numpy array when every digit coefficient lies in
        {-1, 0, 1}, otherwise a list of Fractions.
        """
        monos = [v.monomial() for v in self.values]
        order = 1
        for q, e, n in monos:
            order = order * n // np.gcd(order, n)
        order = int(order)
        e_digit = np.array([e * (order // n) for q, e, n in monos], dtype=np.int64)
        q_digit = [q for q, e, n in monos]
        small = all(q in (-1, 0, 1) for q in q_digit)
        B = self.base
        expo = np.zeros(max(N, 1), dtype=np.int64)
        lo, hi = 0, min(B, N)
        expo[lo:hi] = e_digit[:hi]
        if small:
            coef = np.zeros(max(N, 1), dtype=np.int8)
            coef[lo:hi] = np.array([int(q) for q in q_digit], dtype=np.int8)[:hi]
        else:
            coef = [Fraction(0)] * max(N, 1)
            coef[:hi] = q_digit[:hi]
        lo = hi
        while lo < N:
            hi = min(lo * B, N)
            idx = np.arange(lo, hi, dtype=np.int64)
            hiq, r = idx // B, idx % B
            expo[lo:hi] = (expo[hiq] + e_digit[r]) % order
            if small:
                coef[lo:hi] = coef[hiq] * coef[r]
            else:
                for n in range(lo, hi):
                    coef[n] = coef[n // B] * q_digit[n % B]
            lo = hi
        return order, expo[:N], coef[:N]


def strong_mult_eval(seq: StrongMultSeq, n: int) -> CycloValue:
    """Product of u(d) over the base-B digits d of n; 1 for n = 0."""
    out = CycloValue.rational(1)
    for d in digits(n, seq.base):
        if d:
            out = out * seq.values[d]
    return out


_DENSE = 1 << 16


class RecurrenceSeq:
    """Paperfolding (v) or Golay-Shapiro-Rudin (r) as a memoized +-1 sequence.

    * paperfolding: v(2n) = (-1)**n, v(2n+1) = v(n);
    * GSR: r(0) = 1, r(2n) = r(n), r(2n+1) = (-1)**n * r(n).

    Terms below 2**16 live in a dense list filled on first use; larger terms
    are memoized in a dict.  Both are written under a lock.
    """

    base = 2

    def __init__(self, kind: str):
        if kind not in (PAPERFOLDING, GOLAY_SHAPIRO_RUDIN):
            raise ValueError(f"unknown recurrence sequence {kind!r}")
        self.kind = kind
        self._dense: list[int] | None = None
        self._sparse: dict[int, int] = {}
        self._lock = threading.Lock()

    @property
    def spec(self) -> str:
        return self.kind

    def __repr__(self) -> str:
        return f"RecurrenceSeq({self.kind!r})"

    def _step(self, n: int, half_value: int) -> int:
        h = n >> 1
        if self.kind == PAPERFOLDING:
            if n & 1:
                return half_value
            return -1 if h & 1 else 1
        if n & 1:
            return -half_value if h & 1 else half_value
        return half_value

    def _fill_dense(self) -> list[int]:
        with self._lock:
            if self._dense is None:
                vals = [1] * _DENSE
                for n in range(1, _DENSE):
                    vals[n] = self._step(n, vals[n >> 1])
                self._dense = vals
        return self._dense

    def __call__(self, n: int) -> int:
        if n < 0:
            raise ValueError("n must be nonnegative")
        dense = self._dense or self._fill_dense()
        if n < _DENSE:
            return dense[n]
        hit = self._sparse.get(n)
        if hit is not None:
            return hit
        value = self._step(n, self(n >> 1))
        with self._lock:
            self._sparse[n] = value
        return value

    def values_array(self, N: int) -> np.ndarray:
        """int8 array of the first N terms (closed bit formulas, no memo)."""
        n = np.arange(N, dtype=np.int64)
        if self.kind == GOLAY_SHAPIRO_RUDIN:
            parity = np.bitwise_count(n & (n >> 1)) & 1
            return (1 - 2 * parity).astype(np.int8)
        m = n + 1
        odd = m // (m & -m)
        return np.where(odd % 4 == 1, 1, -1).astype(np.int8)


def recurrence_eval(seq: RecurrenceSeq, n: int) -> int:
    return seq(n)


@dataclass(frozen=True)
class CounterSeq:
    """A raw counter (``sign=False``) or its sign (-1)**count."""

    counter: DigitCounter
    sign: bool = False

    @property
    def base(self) -> int:
        return self.counter.base

    @property
    def spec(self) -> str:
        t = self.counter.target
        if isinstance(t, int):
            body = f"digit={t}"
        elif t == "sum":
            body = "sum"
        else:
            body = f"block={t}"
        return f"count:B={self.base};{body}" + (";sign" if self.sign else "")

    def __call__(self, n: int) -> int:
        c = self.counter.count(n)
        if self.sign:
            return -1 if c & 1 else 1
        return c


def kronecker_minus_one(n: int) -> int:
    """The Kronecker symbol (-1/n) for n >= 1."""
    if n < 1:
        raise ValueError("(-1/n) is only defined here for n >= 1")
    while n % 2 == 0:
        n //= 2  # (-1/2) = +1
    return 1 if n % 4 == 1 else -1


def partial_sum(seq, N: int):
    """Exact sum_{n < N} u(n): an int for +-1/counter sequences, else a CycloValue."""
    if isinstance(seq, RecurrenceSeq):
        return int(seq.values_array(N).sum(dtype=np.int64)) if N else 0
    if isinstance(seq, CounterSeq):
        return sum(seq(n) for n in range(N))
    if isinstance(seq, StrongMultSeq):
        if seq.is_monomial() and all(v.monomial()[0] in (-1, 0, 1) for v in seq.values):
            order, expo, coef = seq.monomial_arrays(N)
            totals = {}
            for e in range(order):
                s = int(coef[expo == e].sum(dtype=np.int64)) if N else 0
                if s:
                    totals[e] = s
            return CycloValue(totals, order)
        total = CycloValue.rational(0)
        for n in range(N):
            total = total + seq(n)
        return total
    raise TypeError(f"unsupported sequence {seq!r}")


def _parse_params(body: str) -> tuple[dict[str, str], list[str]]:
    params: dict[str, str] = {}
    flags: list[str] = []
    for part in filter(None, (p.strip() for p in body.split(";"))):
        if "=" in part:
            k, v = part.split("=", 1)
            params[k.strip()] = v.strip()
        else:
            flags.append(part)
    return params, flags


def parse_sequence(spec: str):
    """Build a sequence from its text form.

    ``paperfold``, ``gsr``, ``strongmult:B=2;u1=-1``, ``strongmult:B=2;u1=zeta(5,1)``,
    ``count:B=3;digit=1;sign``, ``count:B=4;sum;sign``, ``count:B=2;block=11``.
    """
    text = spec.strip()
    if text in (PAPERFOLDING, GOLAY_SHAPIRO_RUDIN):
        return RecurrenceSeq(text)
    kind, _, body = text.partition(":")
    params, flags = _parse_params(body)
    if "B" not in params:
        raise ValueError(f"sequence {spec!r} needs a base B=...")
    base = int(params.pop("B"))
    _check_base(base)
    if kind == "strongmult":
        values = [CycloValue.rational(1)]
        for k in range(1, base):
            key = f"u{k}"
            if key not in params:
                raise ValueError(f"sequence {spec!r} is missing {key}")
            values.append(parse_cyclo(params.pop(key)))
        if params or flags:
            raise ValueError(f"unexpected fields in {spec!r}: {sorted(params) + flags}")
        return StrongMultSeq(base, tuple(values), text)
    if kind == "count":
        sign = "sign" in flags
        rest = [f for f in flags if f != "sign"]
        if "digit" in params:
            target: Union[int, str] = int(params.pop("digit"))
        elif "block" in params:
            target = params.pop("block")
        elif "sum" in rest:
            rest.remove("sum")
            target = "sum"
        else:
            raise ValueError(f"count sequence {spec!r} needs digit=, block= or sum")
        if params or rest:
            raise ValueError(f"unexpected fields in {spec!r}")
        counter = DigitCounter(base, target)
        if sign and isinstance(target, int) and target != 0:
            return StrongMultSeq.digit_sign(base, target)
        if sign and target == "sum":
            vals = tuple(CycloValue.rational(-1 if k % 2 else 1) for k in range(base))
            return StrongMultSeq(base, vals, f"count:B={base};sum;sign")
        return CounterSeq(counter, sign)
    raise ValueError(f"unknown sequence kind in {spec!r}")
