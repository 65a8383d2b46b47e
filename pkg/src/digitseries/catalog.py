"""Identity records and their verification.

A record binds a series job to an exact right-hand side.  ``part`` selects the real or imaginary part of a complex
series and ``kind == "product"`` means prod q(n)**u(n) for a log term.
"""

from __future__ import annotations

import json
import time
from dataclasses import asdict, dataclass
from fractions import Fraction
from pathlib import Path

import mpmath

from .ball import Ball, ComplexBall, mp_serialized
from .closed_forms import (
    SymbolicConstant,
    cos_pi,
    harmonic,
    log_of,
    paperfold_rhs,
    parse_constant,
    rational,
    shap_combination,
    sin_pi,
)
from .cyclo import CycloValue
from .digit_sequences import StrongMultSeq, parse_sequence
from .errors import VerificationFailure
from .rational_expr import RationalFn, parse
from .summation import SeriesJob, check_admissible, default_precision, eval_product, evaluate
from .terms import LinearTerm, LogTerm, Term, parse_term, term_to_json

__all__ = [
    "IdentityRecord",
    "builtin_catalog",
    "verify_identity",
    "load_catalog",
    "dump_catalog",
    "corollary_terms",
]

SCHEMA_VERSION = 1


@dataclass(frozen=True)
class IdentityRecord:
    id: str
    sequence: str
    expr: object  # string, or list of [coefficient, expression] pairs
    start: int
    rhs: str
    tolerance: float = 1e-10
    paper_ref: str = ""
    part: str | None = None  # None, "re" or "im"
    kind: str = "sum"  # "sum" or "product"

    def __post_init__(self):
        if self.part not in (None, "re", "im"):
            raise ValueError(f"part must be 're' or 'im', got {self.part!r}")
        if self.kind not in ("sum", "product"):
            raise ValueError(f"kind must be 'sum' or 'product', got {self.kind!r}")

    def term(self) -> Term:
        return parse_term(self.expr)

    def rhs_constant(self) -> SymbolicConstant:
        return parse_constant(self.rhs)

    def job(self, tolerance: float | None = None, precision: int | None = None) -> SeriesJob:
        tol = tolerance if tolerance is not None else self.tolerance
        prec = precision or max(128, default_precision(tol))
        return SeriesJob(parse_sequence(self.sequence), self.term(), self.start, tol,
                         "accelerated", prec)

    def to_json(self) -> dict:
        out = asdict(self)
        if self.part is None:
            del out["part"]
        return out

    @classmethod
    def from_json(cls, data: dict) -> IdentityRecord:
        known = {"id", "sequence", "expr", "start", "rhs", "tolerance", "paper_ref", "part", "kind"}
        extra = set(data) - known
        if extra:
            raise ValueError(f"unknown record fields {sorted(extra)}")
        return cls(
            id=str(data["id"]),
            sequence=str(data["sequence"]),
            expr=data["expr"],
            start=int(data.get("start", 0)),
            rhs=str(data["rhs"]),
            tolerance=float(data.get("tolerance", 1e-10)),
            paper_ref=str(data.get("paper_ref", "")),
            part=data.get("part"),
            kind=data.get("kind", "sum"),
        )


def load_catalog(path) -> list[IdentityRecord]:
    data = json.loads(Path(path).read_text())
    if isinstance(data, dict):
        data = data.get("records", [])
    return [IdentityRecord.from_json(d) for d in data]


def dump_catalog(records, path=None) -> str:
    text = json.dumps(
        {"schema_version": SCHEMA_VERSION, "records": [r.to_json() for r in records]}, indent=2
    )
    if path is not None:
        Path(path).write_text(text + "\n")
    return text


# record construction -----------------------------------------------------------


def _reciprocal(a: int, b: int) -> RationalFn:
    """1/(a*n + b)."""
    return RationalFn.make((1,), (b, a))


def _reciprocal2(a: int, b: int) -> RationalFn:
    """1/((a*n + b)(a*n + b + 1))."""
    return RationalFn.make((1,), (b * (b + 1), a * (2 * b + 1), a * a))


def corollary_terms(seq: StrongMultSeq):
    """Terms and right-hand sides of the two general corollary identities.

    Returns ((term1, rhs1), (term2, rhs2)) with
    term1 = sum_{1<=k<B} (1/(Bn) - u(k)/(Bn+k)),  rhs1 = sum_{1<=k<B} u(k)/k,
    term2 = sum_{0<=k<B} (B - u(k))/((Bn+k)(Bn+k+1)), rhs2 = sum u(k)/(k(k+1)),
    both summed against u(n) for n >= 1.  Rational u gives RationalFn terms,
    otherwise LinearTerm.
    """
    B = seq.base
    u = seq.values
    first: dict = {}
    second: dict = {}

    def put(bucket, coef, f):
        key = str(coef)
        c0, f0 = bucket.get(key, (coef, RationalFn.constant(0)))
        bucket[key] = (c0, f0 + f)

    one = CycloValue.rational(1)
    for k in range(1, B):
        put(first, one, _reciprocal(B, 0))
        put(first, -u[k], _reciprocal(B, k))
    for k in range(B):
        put(second, CycloValue.rational(B) - u[k], _reciprocal2(B, k))
    rhs1 = sum((u[k] * CycloValue.rational(Fraction(1, k)) for k in range(1, B)),
               CycloValue.rational(0))
    rhs2 = sum((u[k] * CycloValue.rational(Fraction(1, k * (k + 1))) for k in range(1, B)),
               CycloValue.rational(0))

    def collapse(bucket):
        parts = [(c, f) for c, f in bucket.values() if not c.is_zero() and f.num]
        if all(c.is_rational() for c, _ in parts):
            total = RationalFn.constant(0)
            for c, f in parts:
                total = total + f.scale(c.to_fraction())
            return total
        return LinearTerm(tuple(parts))

    return (collapse(first), rhs1), (collapse(second), rhs2)


def _cyclo_constant(v: CycloValue) -> SymbolicConstant:
    if v.is_rational():
        return rational(v.to_fraction())
    raise ValueError("only rational right-hand sides are built symbolically here")


def _rec(id_, seq, term, start, rhs, ref, **kw) -> IdentityRecord:
    expr = term if isinstance(term, (str, list)) else term_to_json(term)
    return IdentityRecord(id_, seq, expr, start, str(rhs), paper_ref=ref, **kw)


def builtin_catalog() -> list[IdentityRecord]:
    recs: list[IdentityRecord] = []
    two = "count:B=2;digit=1;sign"
    three = "count:B=3;digit=1;sign"
    four = "count:B=4;sum;sign"

    recs += [
        _rec("ex7-b2-first", two, "(4*n+1)/(2*n*(2*n+1))", 1, "-1",
             "digit-count example, B=2, j=1, first series"),
        _rec("ex7-b2-second", two, "(4*n+1)/(2*n*(2*n+1)*(2*n+2))", 1, "-1/4",
             "abstract; digit-count example, B=2, j=1, second series"),
        _rec("ex7-b2-difference", two, "(4*n+1)/(n*(n+1))", 1, "-3",
             "digit-count example, B=2, four times the difference"),
        _rec("ex7-b3-first", three, "(18*n^2+21*n+4)/(3*n*(3*n+1)*(3*n+2))", 1, "-1/2",
             "digit-count example, B=3, j=1, first series"),
        _rec("ex7-b3-second", three, "(6*n^2+6*n+1)/(3*n*(3*n+1)*(3*n+2)*(3*n+3))", 1, "-1/36",
             "digit-count example, B=3, j=1, second series"),
        _rec("b4-first", four, "(128*n^3+176*n^2+76*n+9)/(4*n*(4*n+1)*(4*n+2)*(4*n+3))", 1,
             "-5/12", "digit-sum example, B=4, first series"),
        # the second B=4 series with the denominator the general corollary produces
        _rec("b4-second", four, "(128*n^3+184*n^2+80*n+9)/(4*n*(4*n+1)*(2*n+1)*(4*n+3)*(n+1))", 1,
             "-5/12", "digit-sum example, B=4, second series (corrected denominator)"),
        # the same numerator over 4n(4n+1)(4n+2)(4n+3)(4n+4) is 1/8 of the above
        _rec("b4-second-as-printed", four,
             "(128*n^3+184*n^2+80*n+9)/(4*n*(4*n+1)*(4*n+2)*(4*n+3)*(4*n+4))", 1, "-5/96",
             "digit-sum example, B=4, second series with the displayed denominator"),
    ]

    # Gaussian example u(n) = i^{s_2(n)} and its character reformulations
    gi = "strongmult:B=2;u1=i"
    form_a = [["1", "1/(2*n)"], ["-i", "1/(2*n+1)"]]
    form_b = [["1", "(3*n+1)/(n*(n+1)*(2*n+1))"], ["-i", "1/((n+1)*(2*n+1))"]]
    recs += [
        _rec("complex-i-a", gi, form_a, 1, "i", "Gaussian example, first form"),
        _rec("complex-i-b", gi, form_b, 1, "i", "Gaussian example, second form"),
        _rec("chi-im-a", gi, form_a, 1, "1", "character mod 4, first identity, first form",
             part="im"),
        _rec("chi-im-b", gi, form_b, 1, "1", "character mod 4, first identity, second form",
             part="im"),
        _rec("chi-re-a", gi, form_a, 1, "0", "character mod 4, second identity, first form",
             part="re"),
        _rec("chi-re-b", gi, form_b, 1, "0", "character mod 4, second identity, second form",
             part="re"),
    ]

    # roots of unity e^{2 i pi s_2(n)/d}
    for d in (3, 5, 6, 8):
        seq = f"strongmult:B=2;u1=zeta({d},1)"
        z = f"-zeta({d},1)"
        fa = [["1", "1/(2*n)"], [z, "1/(2*n+1)"]]
        fb = [["1", "(3*n+1)/(n*(n+1)*(2*n+1))"], [z, "1/((n+1)*(2*n+1))"]]
        for fn, part, rhs in (("sin", "im", sin_pi(Fraction(2, d))),
                              ("cos", "re", cos_pi(Fraction(2, d)))):
            for tag, form in (("a", fa), ("b", fb)):
                recs.append(_rec(f"rou-{fn}-d{d}-{tag}", seq, form, 1, rhs,
                                 f"roots-of-unity example, {fn}, d={d}, form {tag}", part=part))

    for d in range(3):
        recs.append(_rec(f"paperfold-d{d}", "paperfold", f"1/(n+1)^{2 * d + 1}", 0,
                         paperfold_rhs(d), f"paperfolding theorem, d={d}"))

    term, rhs = shap_combination(parse("1/n", {0: 1}))
    recs.append(_rec("gsr-rational", "gsr", term, 1, rhs,
                     "Golay-Shapiro-Rudin theorem with R(n) = 1/n"))
    log_term, log_rhs = shap_combination(LogTerm(parse("n/(n+1)", {0: 1})))
    recs += [
        _rec("gsr-log", "gsr", "log((2*n+1)^4/((n+1)^2*(4*n+1)^2))", 1, log_rhs,
             "Golay-Shapiro-Rudin theorem with R(n) = log n - log(n+1)"),
        _rec("gsr-log-half", "gsr", "log((2*n+1)^2/((n+1)*(4*n+1)))", 0, -log_of(2) / 2,
             "Golay-Shapiro-Rudin log series from n = 0"),
        _rec("gsr-product", "gsr", "log((2*n+1)^2/((n+1)*(4*n+1)))", 0, "1/sqrt(2)",
             "Golay-Shapiro-Rudin infinite product", kind="product"),
    ]
    assert str(log_term) == str(parse_term(recs[-3].expr)), "log combination mismatch"

    # general corollary for u = (-1)^{s_B}
    for B in (2, 3, 4, 5):
        seq = StrongMultSeq.digit_sum_power(B, -1)
        (t1, r1), (t2, r2) = corollary_terms(seq)
        spec = f"count:B={B};sum;sign"
        recs.append(_rec(f"cor-gen-first-sB-B{B}", spec, t1, 1, _cyclo_constant(r1),
                         f"general corollary, first identity, u = (-1)^s_B, B={B}"))
        recs.append(_rec(f"cor-gen-second-sB-B{B}", spec, t2, 1, _cyclo_constant(r2),
                         f"general corollary, second identity, u = (-1)^s_B, B={B}"))

    # digit-count corollary
    for B, j in ((2, 1), (3, 1), (3, 2), (5, 2)):
        t1 = _reciprocal(B, j).scale(2)
        for k in range(1, B):
            t1 = t1 + (_reciprocal(B, 0) * _reciprocal(B, k)).scale(k)
        t2 = RationalFn.make((1,), (0, 1, 1)).scale(B - 1) + _reciprocal2(B, j).scale(2 * B)
        spec = f"count:B={B};digit={j};sign"
        r1 = harmonic(B - 1) - Fraction(2, j)
        r2 = B - 1 - Fraction(2 * B, j * (j + 1))
        recs.append(_rec(f"digit-count-first-B{B}-j{j}", spec, t1, 1, rational(r1),
                         f"digit-count corollary, first identity, B={B}, j={j}"))
        recs.append(_rec(f"digit-count-second-B{B}-j{j}", spec, t2, 1, rational(r2),
                         f"digit-count corollary, second identity, B={B}, j={j}"))

    # digit-sum corollary
    for B in range(2, 7):
        t1 = RationalFn.constant(0)
        for k in range(1, B):
            t1 = t1 + _reciprocal(B, 0) - _reciprocal(B, k).scale((-1) ** k)
        t2 = RationalFn.constant(0)
        for k in range(B):
            t2 = t2 + _reciprocal2(B, k).scale(B - (-1) ** k)
        hs = harmonic(B - 1, alternating=True)
        spec = f"count:B={B};sum;sign"
        recs.append(_rec(f"digit-sum-first-B{B}", spec, t1, 1, rational(-hs),
                         f"digit-sum corollary, first identity, B={B}"))
        recs.append(_rec(f"digit-sum-second-B{B}", spec, t2, 1,
                         rational(1 + Fraction((-1) ** B, B) - 2 * hs),
                         f"digit-sum corollary, second identity, B={B}"))
    return recs


# verification ---------------------------------------------------------------------


def _select(value: ComplexBall, part: str | None) -> ComplexBall:
    if part == "re":
        return ComplexBall(value.re, Ball(0, 0, value.prec))
    if part == "im":
        return ComplexBall(value.im, Ball(0, 0, value.prec))
    return value


def _fmt(x) -> str:
    return mpmath.nstr(mpmath.mpf(x), 25)


@mp_serialized
def verify_identity(rec: IdentityRecord, tolerance: float | None = None,
                    precision: int | None = None, raise_on_failure: bool = True) -> dict:
    """Evaluate the record's series and compare with its right-hand side.

    Passes when |LHS.mid - RHS.mid| <= LHS.rad + RHS.rad + tolerance.  The
    report also says whether the LHS ball encloses the RHS ball.
    """
    tol = tolerance if tolerance is not None else rec.tolerance
    job = rec.job(tol, precision)
    t0 = time.perf_counter()
    check_admissible(job)
    res = eval_product(job) if rec.kind == "product" else evaluate(job)
    elapsed = time.perf_counter() - t0
    lhs = _select(res.value, rec.part)
    rhs = rec.rhs_constant().evaluate(job.prec)
    with mpmath.workprec(job.prec + 16):
        gap = abs(lhs.re.mid - rhs.re.mid) + abs(lhs.im.mid - rhs.im.mid)
        lrad = mpmath.mpf(lhs.rad_upper())
        rrad = mpmath.mpf(rhs.rad_upper())
        ok = gap <= lrad + rrad + mpmath.mpf(tol)
    report = {
        "id": rec.id,
        "status": "pass" if ok else "fail",
        "lhs": {"re": _fmt(lhs.re.mid), "im": _fmt(lhs.im.mid), "radius": mpmath.nstr(lrad, 3)},
        "rhs": {"expr": rec.rhs, "re": _fmt(rhs.re.mid), "im": _fmt(rhs.im.mid),
                "radius": mpmath.nstr(rrad, 3)},
        "difference": mpmath.nstr(gap, 3),
        "encloses_rhs": bool(lhs.contains(rhs)),
        "tolerance": tol,
        "precision": job.prec,
        "terms_used": res.terms_used,
        "method": res.method_used,
        "error_kind": res.error_kind,
        "seconds": round(elapsed, 3),
    }
    if not ok and raise_on_failure:
        raise VerificationFailure(report)
    return report


def perturbed(rec: IdentityRecord, delta: str = "1/1000000") -> IdentityRecord:
    """Copy of ``rec`` with ``delta`` added to the right-hand side."""
    new_rhs = str(rec.rhs_constant() + parse_constant(delta))
    return IdentityRecord(rec.id, rec.sequence, rec.expr, rec.start, new_rhs, rec.tolerance,
                          rec.paper_ref, rec.part, rec.kind)

