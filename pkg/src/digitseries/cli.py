"""Command-line front end: ``eval``, ``verify``, ``dump``, ``constants``, ``catalog``.

Exit codes: 0 ok, 1 verification failure, 2 no convergence, 3 inadmissible
job (including poles and non-positive log arguments), 4 parse or usage error.
"""

from __future__ import annotations

import argparse
import fnmatch
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor

import mpmath

from .catalog import IdentityRecord, builtin_catalog, dump_catalog, load_catalog, verify_identity
from .closed_forms import beta_odd, euler_number, harmonic
from .cyclo import CycloValue
from .digit_sequences import parse_sequence
from .errors import (
    InadmissibleJob,
    NoConvergence,
    OverrideConflict,
    ParseError,
    PoleError,
    VerificationFailure,
)
from .summation import METHODS, SeriesJob, default_precision, eval_product, evaluate
from .terms import LogTerm, parse_term

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_NO_CONVERGENCE = 2
EXIT_INADMISSIBLE = 3
EXIT_PARSE = 4

MIN_TOL, MAX_TOL = 1e-30, 1e-1


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_PARSE)


def format_ball(mid, radius, prec: int) -> str:
    """Midpoint with ceil(-log10(radius)) + 2 digits, then the radius."""
    radius = mpmath.mpf(radius)
    if radius > 0:
        digits = max(1, math.ceil(-float(mpmath.log10(radius))) + 2)
    else:
        digits = int(prec * math.log10(2))
    return f"{mpmath.nstr(mid, digits, strip_zeros=False)} +/- {mpmath.nstr(radius, 2)}"


def _value_fields(value, prec: int) -> dict:
    with mpmath.workprec(prec):
        rad = mpmath.mpf(value.rad_upper())
        re_s = format_ball(value.re.mid, rad, prec).split(" +/- ")[0]
        im_s = format_ball(value.im.mid, rad, prec).split(" +/- ")[0]
    return {"re": re_s, "im": im_s, "radius": mpmath.nstr(rad, 3)}


def _check_config(args) -> None:
    tol = getattr(args, "tol", None)
    if tol is not None and not (MIN_TOL <= tol <= MAX_TOL):
        raise ParseError(f"tolerance must lie in [{MIN_TOL}, {MAX_TOL}]", 0, str(tol))
    prec = getattr(args, "prec", None)
    if prec is not None and prec < 32:
        raise ParseError("precision must be at least 32 bits", 0, str(prec))


def _emit(obj, fmt: str, lines) -> None:
    if fmt == "json":
        print(json.dumps(obj, indent=2))
    else:
        for line in lines:
            print(line)


# eval --------------------------------------------------------------------------


def cmd_eval(args) -> int:
    expr = args.expr
    if expr.lstrip().startswith("["):
        try:
            expr = json.loads(expr)
        except json.JSONDecodeError as exc:
            raise ParseError(f"bad JSON term list: {exc.msg}", exc.pos, args.expr) from exc
    seq = parse_sequence(args.seq)
    term = parse_term(expr)
    prec = args.prec or default_precision(args.tol)
    job = SeriesJob(seq, term, args.start, args.tol, args.method, prec)
    if args.product:
        if not isinstance(term, LogTerm):
            raise InadmissibleJob("--product needs a log(...) term")
        res = eval_product(job)
    else:
        res = evaluate(job)
    fields = _value_fields(res.value, prec)
    report = {
        "sequence": args.seq,
        "expr": args.expr,
        "start": args.start,
        "tolerance": args.tol,
        "precision": prec,
        "kind": "product" if args.product else "sum",
        "value": fields,
        "terms_used": res.terms_used,
        "method": res.method_used,
        "error_kind": res.error_kind,
    }
    value_text = fields["re"]
    if res.value.im.mid != 0:
        value_text += f" + ({fields['im']})*i"
    _emit(report, args.format, [
        f"value       {value_text}",
        f"radius      {fields['radius']}",
        f"terms       {res.terms_used}",
        f"method      {res.method_used}",
        f"error_kind  {res.error_kind}",
    ])
    return EXIT_OK


# verify ------------------------------------------------------------------------------


def _verify_one(payload):
    rec, tol, prec = payload
    try:
        return verify_identity(rec, tol, prec)
    except VerificationFailure as exc:
        return exc.report
    except NoConvergence as exc:
        return {"id": rec.id, "status": "no_convergence", "detail": str(exc)}
    except (InadmissibleJob, PoleError, OverrideConflict) as exc:
        return {"id": rec.id, "status": "inadmissible", "detail": str(exc)}
    except ParseError as exc:
        return {"id": rec.id, "status": "parse_error", "detail": str(exc)}


def _load_records(source: str) -> list[IdentityRecord]:
    if source == "builtin":
        return builtin_catalog()
    try:
        return load_catalog(source)
    except (OSError, ValueError, KeyError) as exc:
        raise ParseError(f"cannot load catalog: {exc}", 0, source) from exc


def cmd_verify(args) -> int:
    records = _load_records(args.catalog)
    if args.only:
        records = [r for r in records if any(fnmatch.fnmatchcase(r.id, p) for p in args.only)]
    if not records:
        print("no records selected", file=sys.stderr)
        return EXIT_PARSE
    payloads = [(r, args.tol, args.prec) for r in records]
    jobs = args.jobs or min(len(records), os.cpu_count() or 1)
    if jobs > 1 and len(records) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            reports = list(pool.map(_verify_one, payloads))  # map keeps catalog order
    else:
        reports = [_verify_one(p) for p in payloads]
    failures = [r for r in reports if r["status"] != "pass"]
    lines = []
    for r in reports:
        if r["status"] in ("pass", "fail"):
            lines.append(
                f"{r['status'].upper():5s} {r['id']:30s} diff={r['difference']:>9s} "
                f"radius={r['lhs']['radius']:>9s} {r['error_kind']:20s} terms={r['terms_used']}"
            )
        else:
            lines.append(f"{r['status'].upper():5s} {r['id']:30s} {r.get('detail', '')}")
    lines.append(f"{len(reports) - len(failures)}/{len(reports)} passed")
    if failures:
        lines.append("failed: " + ", ".join(r["id"] for r in failures))
    _emit(reports, args.format, lines)
    return EXIT_FAILED if failures else EXIT_OK


# dump -----------------------------------------------------------------------------


def _value_text(v, signs: bool) -> str:
    j = _value_json(v)
    if signs:
        return "+" if j == 1 else "-"
    return str(j)


def _value_json(v):
    if isinstance(v, CycloValue):
        if v.is_rational():
            q = v.to_fraction()
            return int(q) if q.denominator == 1 else str(q)
        return str(v)
    return int(v)


def cmd_dump(args) -> int:
    seq = parse_sequence(args.seq)
    values = [seq(n) for n in range(args.n)]
    out = {"sequence": args.seq, "values": [_value_json(v) for v in values]}
    signs = all(_value_json(v) in (1, -1) for v in values)
    lines = [" ".join(_value_text(v, signs) for v in values)]
    if args.partial_sums:
        sums = []
        acc = CycloValue.rational(0) if isinstance(values[0] if values else 0, CycloValue) else 0
        for v in values:
            acc = acc + v
            sums.append(acc)
        out["partial_sums"] = [_value_json(s) if not isinstance(s, int) else s for s in sums]
        lines.append(" ".join(str(x) for x in out["partial_sums"]))
    _emit(out, args.format, lines)
    return EXIT_OK


# constants ----------------------------------------------------------------------------


def cmd_constants(args) -> int:
    rows = []
    lines = [f"{'n':>3s}  {'H_n':>24s}  {'H*_n':>24s}"]
    for n in range(args.max + 1):
        h, ha = harmonic(n), harmonic(n, alternating=True)
        rows.append({"n": n, "H": str(h), "H_alt": str(ha)})
        lines.append(f"{n:>3d}  {str(h):>24s}  {str(ha):>24s}")
    lines.append("")
    lines.append(f"{'d':>3s}  {'E_2d':>20s}  {'beta(2d+1)':>18s}  value")
    betas = []
    for d in range(args.max + 1):
        b = beta_odd(d)
        ball = b.evaluate(args.prec or 128)
        val = mpmath.nstr(ball.re.mid, 25)
        betas.append({"d": d, "E": euler_number(2 * d), "beta": str(b), "value": val})
        lines.append(f"{d:>3d}  {euler_number(2 * d):>20d}  {str(b):>18s}  {val}")
    _emit({"harmonic": rows, "beta": betas}, args.format, lines)
    return EXIT_OK


def cmd_catalog(args) -> int:
    text = dump_catalog(builtin_catalog(), args.output)
    if args.output is None:
        print(text)
    return EXIT_OK


# entry point -------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="digitseries", description="Digit-twisted series: evaluate and verify.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    e = sub.add_parser("eval", help="evaluate one series")
    e.add_argument("--seq", required=True, help="sequence spec, e.g. 'strongmult:B=2;u1=-1'")
    e.add_argument("--expr", required=True, help="term: rational expression, log(...) or JSON list")
    e.add_argument("--start", type=int, default=0)
    e.add_argument("--tol", type=float, default=1e-10)
    e.add_argument("--prec", type=int, default=None, help="working precision in bits")
    e.add_argument("--method", choices=METHODS, default="accelerated")
    e.add_argument("--product", action="store_true", help="evaluate prod q(n)^u(n) for log terms")
    e.add_argument("--format", choices=("table", "json"), default="table")
    e.set_defaults(func=cmd_eval)

    v = sub.add_parser("verify", help="verify catalog identities")
    v.add_argument("--catalog", default="builtin", help="'builtin' or a JSON file")
    v.add_argument("--tol", type=float, default=None, help="override record tolerances")
    v.add_argument("--prec", type=int, default=None)
    v.add_argument("--only", action="append", default=[], help="glob on record ids (repeatable)")
    v.add_argument("--jobs", type=int, default=None, help="worker processes (default: cores)")
    v.add_argument("--format", choices=("table", "json"), default="table")
    v.set_defaults(func=cmd_verify)

    d = sub.add_parser("dump", help="print the first terms of a sequence")
    d.add_argument("--seq", required=True)
    d.add_argument("-n", type=int, default=16)
    d.add_argument("--partial-sums", action="store_true")
    d.add_argument("--format", choices=("table", "json"), default="table")
    d.set_defaults(func=cmd_dump)

    c = sub.add_parser("constants", help="harmonic numbers, Euler numbers, beta(2d+1)")
    c.add_argument("--max", type=int, default=6)
    c.add_argument("--prec", type=int, default=None)
    c.add_argument("--format", choices=("table", "json"), default="table")
    c.set_defaults(func=cmd_constants)

    k = sub.add_parser("catalog", help="write the built-in catalog as JSON")
    k.add_argument("--output", "-o", default=None)
    k.set_defaults(func=cmd_catalog)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        _check_config(args)
        return args.func(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        if exc.text:
            print(exc.pointer(), file=sys.stderr)
        return EXIT_PARSE
    except NoConvergence as exc:
        print(f"no convergence: {exc}", file=sys.stderr)
        return EXIT_NO_CONVERGENCE
    except (InadmissibleJob, PoleError, OverrideConflict) as exc:
        print(f"inadmissible: {exc}", file=sys.stderr)
        return EXIT_INADMISSIBLE
    except ValueError as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
