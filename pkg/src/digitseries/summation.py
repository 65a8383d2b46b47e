"""Evaluation of twisted series sum_{n >= n0} u(n) * t(n).

Partial sums are accumulated exactly in fixed point (each term floor-rounded at
2**-P, with an integer count of ulps of error), so block partial sums come out as
balls whose radius is pure rounding.  The tail is handled by extrapolating the
block partial sums at N = B**m * max(1, n0):

* primary: generalized Richardson elimination of the geometric error modes
  that the twisting sequence produces at block boundaries, namely
  sigma/B**p for strongly multiplicative u (sigma = sum of u(k) over one
  block), +-sqrt(2)/2**p for Golay-Shapiro-Rudin, and 2**-p together with
  m*2**-p for paperfolding, with p running up from the decay order of t;
* secondary: Wynn's epsilon algorithm on the same partial sums, which knows
  nothing about the modes and serves as a cross-check.

Tail radii are heuristic (``certified_heuristic``): the extrapolant difference
times a safety factor.  Rounding radii are rigorous.  Each job is evaluated
sequentially in index order, so results are bit-for-bit reproducible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Any

import mpmath
from mpmath import libmp

from .ball import Ball, ComplexBall, mp_serialized
from .cyclo import CycloValue
from .digit_sequences import (
    GOLAY_SHAPIRO_RUDIN,
    PAPERFOLDING,
    RecurrenceSeq,
    StrongMultSeq,
)
from .errors import InadmissibleJob, NoConvergence, PoleError, SignError
from .rational_expr import RationalFn, analyze_decay
from .terms import LinearTerm, LogTerm, Term, decay_exponent

__all__ = [
    "SeriesJob",
    "SumResult",
    "default_precision",
    "check_admissible",
    "sum_direct",
    "sum_blocks",
    "sum_accelerated",
    "sum_log_term",
    "eval_product",
    "tail_estimate",
    "evaluate",
    "richardson_modes",
    "wynn_epsilon",
]

SAFETY = 10
LEVEL_CAP = 40
TERM_BUDGET = 10**7
MAX_MODES = 16
METHODS = ("direct", "blocks", "accelerated")


def default_precision(tolerance: float) -> int:
    return max(64, 2 * math.ceil(-math.log2(tolerance)) + 32)


@dataclass(frozen=True)
class SeriesJob:
    sequence: Any
    term: Term
    start: int = 0
    tolerance: float = 1e-10
    method: str = "accelerated"
    precision: int | None = None

    @property
    def prec(self) -> int:
        return self.precision or default_precision(self.tolerance)

    @property
    def base(self) -> int:
        return self.sequence.base


@dataclass
class SumResult:
    value: ComplexBall
    terms_used: int
    method_used: str
    error_kind: str  # "certified_heuristic" or "cross_checked"
    diagnostics: dict = field(default_factory=dict)

    @property
    def radius(self) -> mpmath.mpf:
        return mpmath.mpf(self.value.rad_upper())

    @property
    def midpoint(self) -> mpmath.mpc:
        return self.value.mid_complex()


# admissibility ----------------------------------------------------------------


def _check_rational(f: RationalFn, start: int) -> None:
    rep = analyze_decay(f)
    if not f.num and not f.overrides:
        return
    if not rep.decays_to_zero:
        raise InadmissibleJob(f"term {f} does not tend to 0 (limit {rep.limit})")
    if rep.difference_order < 2:
        raise InadmissibleJob(f"term {f} has |t(n+1)-t(n)| of order n^-{rep.difference_order}")
    bad = f.unoverridden_poles(start)
    if bad:
        raise PoleError(bad[0])


def _check_log(t: LogTerm, start: int) -> None:
    q = t.q
    rep = analyze_decay(q)
    if rep.limit != 1 and not t.is_zero():
        raise InadmissibleJob(f"log term needs q(n) -> 1, got limit {rep.limit}")
    if rep.difference_order < 2:
        raise InadmissibleJob("log term decays too slowly")
    bad = q.unoverridden_poles(start)
    if bad:
        raise PoleError(bad[0])
    # beyond the Cauchy root bound of num and den the sign of q is that of the
    # leading coefficients (positive since q -> 1); check every integer below it
    bound = start
    for p in (q.num, q.den):
        if len(p) > 1:
            bound = max(bound, 1 + int(max(abs(Fraction(c, p[-1])) for c in p[:-1])) + 1)
    for n in range(start, bound + 1):
        v = q.value_at(n)
        if v is None or v <= 0:
            raise SignError(f"log argument q({n}) = {v} is not positive")


def check_admissible(job: SeriesJob) -> None:
    """Raise InadmissibleJob (or PoleError/SignError) if the job may diverge."""
    seq = job.sequence
    if isinstance(seq, StrongMultSeq):
        if not seq.bounded_by_one:
            raise InadmissibleJob("sequence values must satisfy |u(k)| <= 1")
        if not seq.lemma_ok:
            raise InadmissibleJob(
                f"sequence needs |sum u(k)| < B and u != (1,0,0,...); sum is {seq.sigma}"
            )
    elif not isinstance(seq, RecurrenceSeq):
        raise InadmissibleJob(f"no convergence theory for sequence {getattr(seq, 'spec', seq)!r}")
    if job.method not in METHODS:
        raise ValueError(f"unknown method {job.method!r}")
    term = job.term
    if isinstance(term, RationalFn):
        _check_rational(term, job.start)
    elif isinstance(term, LogTerm):
        _check_log(term, job.start)
    elif isinstance(term, LinearTerm):
        for _, f in term.parts:
            _check_rational(f, job.start)
    else:
        raise TypeError(f"unsupported term {term!r}")


def _term_is_zero(term: Term) -> bool:
    if isinstance(term, RationalFn):
        return not term.num and not term.overrides
    if isinstance(term, LogTerm):
        return term.is_zero()
    return all((not f.num and not f.overrides) or c.is_zero() for c, f in term.parts)


# fixed-point term evaluation ----------------------------------------------------


class _RationalFixed:
    """floor(f(n) * 2**P) with error below one unit."""

    def __init__(self, f: RationalFn, P: int):
        self.num = f.num[::-1]
        self.den = f.den[::-1]
        self.over = {m: (v.numerator << P) // v.denominator for m, v in f.overrides}
        self.P = P

    def values(self, lo: int, hi: int) -> list[int]:
        num, den, P, over = self.num, self.den, self.P, self.over
        out = []
        append = out.append
        for n in range(lo, hi):
            if over and n in over:
                append(over[n])
                continue
            a = 0
            for c in num:
                a = a * n + c
            b = 0
            for c in den:
                b = b * n + c
            append((a << P) // b)
        return out

    err_per_term = 1


class _LogFixed:
    """floor(log q(n) * 2**P) with a per-term error bound in units of 2**-P."""

    def __init__(self, t: LogTerm, P: int):
        q = t.q
        self.num = q.num[::-1]
        self.den = q.den[::-1]
        self.over = {}
        for m, v in q.overrides:
            self.over[m] = self._log_ratio(v.numerator, v.denominator, P)[0]
        self.P = P
        self.err_per_term = 0

    @staticmethod
    def _log_ratio(a: int, b: int, P: int) -> tuple[int, int]:
        if a < 0:
            a, b = -a, -b
        if a == b:
            return 0, 0
        d, s = a - b, a + b
        # use the atanh series when |z| <= 1/4, z = (a-b)/(a+b)
        if 4 * abs(d) <= s:
            Z = (abs(d) << P) // s
            Zsq = (Z * Z) >> P
            total = Z
            power = Z
            k = 1
            while power:
                power = (power * Zsq) >> P
                total += power // (2 * k + 1)
                k += 1
            return (2 * total if d > 0 else -2 * total), 6 * k + 12
        x = libmp.from_rational(a, b, P + 40, "n")
        y = libmp.mpf_log(x, P + 40, "n")
        return libmp.to_fixed(y, P), 3

    def values(self, lo: int, hi: int) -> list[int]:
        num, den, P, over = self.num, self.den, self.P, self.over
        out = []
        append = out.append
        worst = self.err_per_term
        for n in range(lo, hi):
            if over and n in over:
                append(over[n])
                continue
            a = 0
            for c in num:
                a = a * n + c
            b = 0
            for c in den:
                b = b * n + c
            v, e = self._log_ratio(a, b, P)
            if e > worst:
                worst = e
            append(v)
        self.err_per_term = max(worst, 1)
        return out


def _fixed(term, P: int):
    if isinstance(term, RationalFn):
        return _RationalFixed(term, P)
    return _LogFixed(term, P)


# twisting sequence in blocks ------------------------------------------------------


class _Twist:
    """Values u(n) on a block, as ``coef * zeta_order**expo`` or as balls."""

    def __init__(self, seq, prec: int):
        self.seq = seq
        self.prec = prec
        if isinstance(seq, RecurrenceSeq):
            self.kind = "small"
            self.order = 1
        elif isinstance(seq, StrongMultSeq) and seq.is_monomial():
            small = all(v.monomial()[0] in (-1, 0, 1) for v in seq.values)
            self.kind = "small" if small else "rational"
            self.order = None
        else:
            self.kind = "general"
            self.order = None
            self._cache: list = []

    def block(self, lo: int, hi: int):
        seq = self.seq
        if isinstance(seq, RecurrenceSeq):
            vals = seq.values_array(hi)[lo:hi].tolist()
            return [0] * (hi - lo), vals
        if self.kind in ("small", "rational"):
            order, expo, coef = seq.monomial_arrays(hi)
            self.order = order
            e = expo[lo:hi].tolist()
            c = coef[lo:hi].tolist() if self.kind == "small" else coef[lo:hi]
            return e, c
        cache = self._cache
        B = seq.base
        while len(cache) < hi:
            n = len(cache)
            if n < B:
                cache.append(seq.values[n])
            else:
                cache.append(cache[n // B] * seq.values[n % B])
        return None, cache[lo:hi]


class _Accumulator:
    """Running fixed-point sum of u(n) * t(n) for one term component."""

    def __init__(self, term, P: int, twist: _Twist, coefficient: CycloValue):
        self.fixed = _fixed(term, P)
        self.P = P
        self.twist = twist
        self.coefficient = coefficient
        self.acc: dict[int, int] = {}
        self.err = 0
        self.ball_acc: ComplexBall | None = None
        self.general_exact: dict = {}

    def run(self, lo: int, hi: int, block) -> None:
        if hi <= lo:
            return
        F = self.fixed.values(lo, hi)
        errF = self.fixed.err_per_term
        kind = self.twist.kind
        expo, coef = block
        acc = self.acc
        if kind == "small":
            for e, c, f in zip(expo, coef, F):
                if c == 1:
                    acc[e] = acc.get(e, 0) + f
                elif c == -1:
                    acc[e] = acc.get(e, 0) - f
            self.err += errF * (hi - lo)
        elif kind == "rational":
            err = 0
            for e, c, f in zip(expo, coef, F):
                if c:
                    acc[e] = acc.get(e, 0) + (c.numerator * f) // c.denominator
                    err += math.ceil(abs(c) * errF) + 1
            self.err += err
        else:
            self._run_general(coef, F, errF)

    def _run_general(self, values, F, errF) -> None:
        P, prec = self.P, self.twist.prec
        for u, f in zip(values, F):
            if u.is_exact:
                for e, c in u.coeffs.items():
                    key = (u.order, e)
                    self.general_exact[key] = self.general_exact.get(key, 0) + (
                        c.numerator * f
                    ) // c.denominator
                    self.err += math.ceil(abs(c) * errF) + 1
            else:
                tb = Ball.exact(f, -P, prec).add_error(Ball.exact(errF, -P, prec).mid)
                contrib = u.ball * tb
                self.ball_acc = contrib if self.ball_acc is None else self.ball_acc + contrib

    def ball(self, prec: int) -> ComplexBall:
        P = self.P
        total = ComplexBall(Ball(0, 0, prec), Ball(0, 0, prec))
        order = self.twist.order or 1
        for e, a in sorted(self.acc.items()):
            if a:
                total = total + ComplexBall.root_of_unity(order, e, prec) * Ball.exact(a, -P, prec)
        for (o, e), a in sorted(self.general_exact.items()):
            if a:
                total = total + ComplexBall.root_of_unity(o, e, prec) * Ball.exact(a, -P, prec)
        if self.ball_acc is not None:
            total = total + self.ball_acc
        if self.err:
            r = Ball.exact(self.err, -P, prec).mid
            total = ComplexBall(total.re.add_error(r), total.im.add_error(r))
        coef = self.coefficient
        if coef.is_exact and coef == 1:
            return total
        return total * coef.to_ball(prec)


def _components(term: Term):
    if isinstance(term, LinearTerm):
        return [(c, f) for c, f in term.parts]
    return [(CycloValue.rational(1), term)]


def _fixed_bits(job: SeriesJob) -> int:
    return job.prec + 40


def _iter_partial_sums(job: SeriesJob, max_levels: int = LEVEL_CAP):
    """Yield (m, N, ball of sum_{n0 <= n < N}) for N = B**m * max(1, n0)."""
    prec = job.prec
    P = _fixed_bits(job)
    twist = _Twist(job.sequence, prec)
    accs = [_Accumulator(t, P, twist, c) for c, t in _components(job.term)]
    B = job.base
    unit = max(1, job.start)
    lo = job.start
    for m in range(1, max_levels + 1):
        hi = unit * B**m
        if hi - job.start > TERM_BUDGET:
            return
        block = twist.block(lo, hi)
        for a in accs:
            a.run(lo, hi, block)
        total = accs[0].ball(prec)
        for a in accs[1:]:
            total = total + a.ball(prec)
        yield m, hi, total
        lo = hi


def _zero_ball(prec: int) -> ComplexBall:
    return ComplexBall(Ball(0, 0, prec), Ball(0, 0, prec))


# public summation entry points ------------------------------------------------------


@mp_serialized
def sum_direct(job: SeriesJob, N: int) -> ComplexBall:
    """Ball enclosure of the finite sum over n0 <= n < N (rounding radius only)."""
    check_admissible(job)
    if N < job.start:
        raise ValueError("N must be at least the start index")
    prec = job.prec
    if N == job.start or _term_is_zero(job.term):
        return _zero_ball(prec)
    P = _fixed_bits(job)
    twist = _Twist(job.sequence, prec)
    accs = [_Accumulator(t, P, twist, c) for c, t in _components(job.term)]
    step = 1 << 16
    lo = job.start
    while lo < N:
        hi = min(N, lo + step)
        block = twist.block(lo, hi)
        for a in accs:
            a.run(lo, hi, block)
        lo = hi
    total = accs[0].ball(prec)
    for a in accs[1:]:
        total = total + a.ball(prec)
    return total


@mp_serialized
def sum_blocks(job: SeriesJob, levels: int) -> list[ComplexBall]:
    """Partial sums at N = B**m * max(1, n0) for m = 1..levels."""
    check_admissible(job)
    out = [ball for _, _, ball in _iter_partial_sums(job, levels)]
    if len(out) < levels:
        raise NoConvergence(f"term budget of {TERM_BUDGET} reached before level {levels}")
    return out


def _to_mpc(x) -> mpmath.mpc:
    if isinstance(x, CycloValue):
        return x.to_ball(256).mid_complex()
    return mpmath.mpc(x)


def richardson_modes(seq, s: float, count: int = MAX_MODES) -> list[tuple[Any, int]]:
    """Error modes (ratio, power) so that P_m - S ~ sum c * m**power * ratio**m."""
    modes: list[tuple[Any, int]] = []
    if not math.isfinite(s):
        return modes
    s = max(int(s), 1)
    p = s
    while len(modes) < count:
        if isinstance(seq, StrongMultSeq):
            sigma = seq.sigma
            if sigma.is_exact and sigma.is_zero():
                return []
            modes.append((_to_mpc(sigma) / mpmath.mpf(seq.base) ** p, 0))
        elif seq.kind == GOLAY_SHAPIRO_RUDIN:
            r = mpmath.sqrt(2) / mpmath.mpf(2) ** p
            modes.extend([(r, 0), (-r, 0)])
        elif seq.kind == PAPERFOLDING:
            r = mpmath.mpf(2) ** (-p)
            modes.extend([(r, 0), (r, 1)])
        p += 1
    return modes[:count]


def _richardson(partials: list[ComplexBall], modes, prec: int) -> ComplexBall:
    """Extrapolate using the last len(modes)+1 partial sums (levels 1-based)."""
    M = len(partials)
    K = len(modes)
    levels = list(range(M - K, M + 1))
    if K == 0:
        return partials[-1]
    with mpmath.workprec(2 * prec + 16 * K + 64):
        A = mpmath.matrix(K + 1, K + 1)
        for j in range(K + 1):
            A[0, j] = 1
        for k, (lam, power) in enumerate(modes, start=1):
            row = [mpmath.mpf(m) ** power * mpmath.mpc(lam) ** m for m in levels]
            scale = max(abs(x) for x in row)
            for j, x in enumerate(row):
                A[k, j] = x / scale
        rhs = mpmath.matrix([1] + [0] * K)
        w = mpmath.lu_solve(A, rhs)
        weights = [mpmath.mpc(w[j]) for j in range(K + 1)]
    total = _zero_ball(prec)
    for wj, m in zip(weights, levels):
        wb = ComplexBall(Ball(wj.real, 0, prec), Ball(wj.imag, 0, prec))
        total = total + partials[m - 1] * wb
    return total


def wynn_epsilon(values: list) -> tuple[Any, Any]:
    """Wynn's epsilon algorithm; returns (estimate, |last change|)."""
    n = len(values)
    if n == 0:
        raise ValueError("no values")
    prev = [mpmath.mpc(0)] * (n + 1)
    cur = [mpmath.mpc(v) for v in values]
    estimates = [cur[-1]]
    col = 0
    while len(cur) > 1:
        nxt = []
        for i in range(len(cur) - 1):
            d = cur[i + 1] - cur[i]
            if d == 0:
                nxt.append(mpmath.mpc(mpmath.inf))
                continue
            nxt.append(prev[i + 1] + 1 / d)
        prev, cur = cur, nxt
        col += 1
        if col % 2 == 0 and cur and all(mpmath.isfinite(x) for x in cur[-1:]):
            estimates.append(cur[-1])
    est = estimates[-1]
    change = abs(estimates[-1] - estimates[-2]) if len(estimates) > 1 else mpmath.inf
    return est, change


def _coarse_up(x) -> mpmath.mpf:
    """Round a positive number up to 3 significant bits."""
    x = mpmath.mpf(x)
    if x <= 0:
        return mpmath.mpf(0)
    if not mpmath.isfinite(x):
        return x
    man, exp = mpmath.frexp(x)  # x = man * 2**exp, 0.5 <= man < 1
    return mpmath.ceil(man * 8) * mpmath.mpf(2) ** (exp - 3)


def _mid_gap(a: ComplexBall, b: ComplexBall) -> mpmath.mpf:
    with mpmath.workprec(max(a.prec, b.prec) + 8):
        return abs(a.re.mid - b.re.mid) + abs(a.im.mid - b.im.mid)


def _widen(x: ComplexBall, r) -> ComplexBall:
    return ComplexBall(x.re.add_error(r), x.im.add_error(r))


def _wynn_ball(partials: list[ComplexBall], prec: int) -> ComplexBall:
    with mpmath.workprec(prec + 32):
        est, _ = wynn_epsilon([p.mid_complex() for p in partials])
    # the transformation is nonlinear; inflate the input rounding generously
    r = max(mpmath.mpf(p.rad_upper()) for p in partials) * mpmath.mpf(2) ** len(partials)
    return _widen(ComplexBall(Ball(est.real, 0, prec), Ball(est.imag, 0, prec)), r)


FAMILIES = ("richardson", "wynn")


@mp_serialized
def sum_accelerated(job: SeriesJob, family: str = "richardson") -> SumResult:
    """Extrapolate block partial sums until successive extrapolants agree.

    ``family`` picks the transformation: "richardson" (mode elimination, the
    default) or "wynn" (epsilon algorithm).  With the default family the other
    one is run on the same partial sums and the result is labeled
    ``cross_checked`` when the two agree within the tolerance.
    """
    if family not in FAMILIES:
        raise ValueError(f"unknown acceleration family {family!r}")
    check_admissible(job)
    prec = job.prec
    if _term_is_zero(job.term):
        return SumResult(_zero_ball(prec), 0, "accelerated", "cross_checked", {"trivial": True})
    modes = richardson_modes(job.sequence, decay_exponent(job.term))
    tol = mpmath.mpf(job.tolerance)
    partials: list[ComplexBall] = []
    extrapolants: list[ComplexBall] = []
    diffs: list[float] = []
    N = job.start
    for _, N, ball in _iter_partial_sums(job):
        partials.append(ball)
        M = len(partials)
        if family == "richardson":
            T = _richardson(partials, modes[: min(len(modes), M - 1)], prec)
        else:
            T = _wynn_ball(partials, prec)
        extrapolants.append(T)
        if M < 3:
            continue
        diff = _mid_gap(T, extrapolants[-2])
        diffs.append(float(diff))
        prev_diff = diffs[-2] if len(diffs) > 1 else math.inf
        truncation = _coarse_up(SAFETY * diff)
        radius = truncation + mpmath.mpf(T.rad_upper())
        if not (diff < tol / 4 and prev_diff < SAFETY * tol and radius <= tol):
            continue
        diag = {
            "family": family,
            "levels": M,
            "last_N": N,
            "extrapolant_diffs": diffs,
            "partial_sums": [str(p.mid_complex()) for p in partials[-4:]],
        }
        if family == "richardson":
            diag["modes"] = min(len(modes), M - 1)
        error_kind = "certified_heuristic"
        other = _wynn_ball(partials, prec) if family == "richardson" else _richardson(
            partials, modes[: min(len(modes), M - 1)], prec)
        gap = _mid_gap(other, T)
        diag["cross_check_gap"] = float(gap)
        if gap <= tol:
            error_kind = "cross_checked"
        return SumResult(_widen(T, truncation), N - job.start, "accelerated", error_kind, diag)
    raise NoConvergence(
        f"extrapolants not within {job.tolerance} after {len(partials)} levels (N = {N})",
        {"extrapolant_diffs": diffs, "levels": len(partials)},
    )


@mp_serialized
def sum_log_term(job: SeriesJob) -> SumResult:
    if not isinstance(job.term, LogTerm):
        raise TypeError("sum_log_term needs a LogTerm job")
    return evaluate(job)


@mp_serialized
def eval_product(job: SeriesJob) -> SumResult:
    """prod q(n)**u(n) as exp of the log series, radius carried through exp."""
    res = sum_log_term(job)
    v = res.value
    if not (v.im.is_exact() and v.im.mid_raw == libmp.fzero) and not v.im.contains_zero():
        raise NotImplementedError("complex-valued log series")
    prec = job.prec
    if res.diagnostics.get("trivial"):
        value = ComplexBall(Ball(1, 0, prec), Ball(0, 0, prec))
    else:
        value = ComplexBall(v.re.exp(), Ball(0, 0, prec))
    return replace(res, value=value)


# heuristic tail bound ----------------------------------------------------------------


def _envelope(seq):
    if isinstance(seq, RecurrenceSeq):
        if seq.kind == GOLAY_SHAPIRO_RUDIN:
            return lambda x: 3 * mpmath.sqrt(x)
        return lambda x: 4 * (1 + mpmath.log(x, 2))
    if isinstance(seq, StrongMultSeq):
        B = seq.base
        mag = abs(_to_mpc(seq.sigma))
        alpha = mpmath.log(max(mag, 1), B)
        return lambda x: B * (1 + mpmath.log(x, B)) * x**alpha
    raise InadmissibleJob("no partial-sum envelope for this sequence")


def _fraction_mpf(q: Fraction) -> mpmath.mpf:
    return mpmath.mpf(q.numerator) / q.denominator


def _term_float(term: Term, n: int) -> mpmath.mpf:
    if isinstance(term, RationalFn):
        return _fraction_mpf(term(n))
    if isinstance(term, LogTerm):
        return mpmath.log(_fraction_mpf(term.q(n)))
    return sum(abs(_to_mpc(c)) * abs(_fraction_mpf(f(n))) for c, f in term.parts)


def _difference_order(term: Term) -> float:
    if isinstance(term, RationalFn):
        return analyze_decay(term).difference_order
    if isinstance(term, LogTerm):
        return analyze_decay(term.q).difference_order
    return min(analyze_decay(f).difference_order for _, f in term.parts)


@mp_serialized
def tail_estimate(job: SeriesJob, N: int) -> float:
    """Heuristic bound on |sum_{n >= N} u(n) t(n)| via summation by parts.

    Uses envelope(N)*|t(N)| + integral_N^inf envelope(x) * D * x**-e dx, where
    D bounds n**e * |t(n+1) - t(n)| on a geometric grid from N.  The envelope
    constants are empirical, so the result is a heuristic.
    """
    check_admissible(job)
    if N < max(job.start, 1):
        raise ValueError("N must be at least max(1, start)")
    if _term_is_zero(job.term):
        return 0.0
    env = _envelope(job.sequence)
    e = _difference_order(job.term)
    term = job.term
    with mpmath.workprec(64):
        D = mpmath.mpf(0)
        x = mpmath.mpf(N)
        for _ in range(120):
            n = int(x)
            diff = abs(_term_float(term, n + 1) - _term_float(term, n))
            D = max(D, diff * mpmath.mpf(n) ** e)
            x *= mpmath.mpf(5) / 4
        head = env(N) * abs(_term_float(term, N))
        tail = mpmath.quad(lambda t: env(t) * D * t ** (-e), [N, 10 * N, mpmath.inf])
        return float(head + tail)


# dispatcher ---------------------------------------------------------------------------


@mp_serialized
def evaluate(job: SeriesJob) -> SumResult:
    """Run a job with its configured method."""
    check_admissible(job)
    prec = job.prec
    if _term_is_zero(job.term):
        return SumResult(_zero_ball(prec), 0, job.method, "cross_checked", {"trivial": True})
    if job.method == "accelerated":
        return sum_accelerated(job)
    tol = job.tolerance
    if job.method == "blocks":
        for m, N, ball in _iter_partial_sums(job):
            t = tail_estimate(job, N)
            if t + float(mpmath.mpf(ball.rad_upper())) <= tol:
                return SumResult(_widen(ball, t), N - job.start, "blocks", "certified_heuristic",
                                 {"levels": m, "tail": t})
        raise NoConvergence("block partial sums did not reach the tolerance within the budget")
    N = max(job.start, 1) * 2
    while N - job.start <= TERM_BUDGET:
        t = tail_estimate(job, N)
        if t <= tol / 2:
            ball = sum_direct(job, N)
            return SumResult(_widen(ball, t), N - job.start, "direct", "certified_heuristic",
                             {"tail": t})
        N *= 2
    raise NoConvergence("direct summation would exceed the term budget")
