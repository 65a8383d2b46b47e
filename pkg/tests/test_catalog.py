import json
from fractions import Fraction
from pathlib import Path

import pytest

from digitseries import IdentityRecord, VerificationFailure, builtin_catalog, harmonic, load_catalog, verify_identity
from digitseries.catalog import corollary_terms, dump_catalog, perturbed
from digitseries.closed_forms import parse_constant, rational
from digitseries.digit_sequences import parse_sequence
from digitseries.rational_expr import parse
from digitseries.summation import check_admissible

DOCS = Path(__file__).resolve().parents[1] / "docs"


@pytest.fixture(scope="module")
def catalog():
    return {r.id: r for r in builtin_catalog()}


def test_ids_unique_and_admissible():
    recs = builtin_catalog()
    assert len({r.id for r in recs}) == len(recs)
    for r in recs:
        check_admissible(r.job())
        parse_constant(r.rhs)


def test_required_records_present(catalog):
    required = [
        "ex7-b2-first", "ex7-b2-second", "ex7-b2-difference", "ex7-b3-first", "ex7-b3-second",
        "b4-first", "b4-second", "complex-i-a", "complex-i-b", "chi-im-a", "chi-re-a",
        "paperfold-d0", "paperfold-d1", "paperfold-d2", "gsr-rational", "gsr-log-half", "gsr-product",
    ]
    required += [f"rou-{f}-d{d}-a" for f in ("sin", "cos") for d in (3, 5, 6, 8)]
    required += [f"cor-gen-{w}-sB-B{B}" for w in ("first", "second") for B in (2, 3, 4, 5)]
    required += [f"digit-count-{w}-B{B}-j{j}" for w in ("first", "second") for B, j in ((2, 1), (3, 1), (3, 2), (5, 2))]
    required += [f"digit-sum-{w}-B{B}" for w in ("first", "second") for B in range(2, 7)]
    missing = [r for r in required if r not in catalog]
    assert not missing


def test_headline_rhs(catalog):
    assert parse_constant(catalog["ex7-b2-second"].rhs) == rational(Fraction(-1, 4))
    assert str(parse_constant(catalog["paperfold-d0"].rhs)) == "pi/2"
    assert parse_constant(catalog["digit-sum-first-B2"].rhs) == rational(-1)
    assert parse_constant(catalog["digit-sum-second-B2"].rhs) == rational(Fraction(-1, 2))


@pytest.mark.parametrize("B", range(2, 7))
def test_digit_sum_rhs_from_harmonic(catalog, B):
    Ha = harmonic(B - 1, alternating=True)
    assert parse_constant(catalog[f"digit-sum-first-B{B}"].rhs) == rational(-Ha)
    assert parse_constant(catalog[f"digit-sum-second-B{B}"].rhs) == rational(1 + Fraction((-1) ** B, B) - 2 * Ha)


@pytest.mark.parametrize("B, j", [(2, 1), (3, 1), (3, 2), (5, 2)])
def test_digit_count_rhs_from_harmonic(catalog, B, j):
    assert parse_constant(catalog[f"digit-count-first-B{B}-j{j}"].rhs) == rational(harmonic(B - 1) - Fraction(2, j))
    assert parse_constant(catalog[f"digit-count-second-B{B}-j{j}"].rhs) == rational(B - 1 - Fraction(2 * B, j * (j + 1)))


@pytest.mark.parametrize("B", range(2, 6))
def test_generic_corollary_rhs(catalog, B):
    seq = parse_sequence(f"count:B={B};sum;sign")
    u = [v.to_fraction() for v in seq.values]
    first = sum((u[k] / k for k in range(1, B)), Fraction(0))
    second = sum((u[k] / (k * (k + 1)) for k in range(1, B)), Fraction(0))
    assert parse_constant(catalog[f"cor-gen-first-sB-B{B}"].rhs) == rational(first)
    assert parse_constant(catalog[f"cor-gen-second-sB-B{B}"].rhs) == rational(second)


def test_corollary_terms_match_examples(catalog):
    (t1, r1), (t2, r2) = corollary_terms(parse_sequence("count:B=2;digit=1;sign"))
    assert t1 == parse(catalog["ex7-b2-first"].expr)
    assert t2 == parse(catalog["ex7-b2-second"].expr).scale(2)
    assert (r1, r2) == (-1, Fraction(-1, 2))
    (s1, q1), (s2, q2) = corollary_terms(parse_sequence("count:B=3;digit=1;sign"))
    assert s1 == parse(catalog["ex7-b3-first"].expr)
    assert s2 == parse(catalog["ex7-b3-second"].expr).scale(12)
    assert (q1, q2) == (Fraction(-1, 2), Fraction(-1, 3))


def test_verify_examples(catalog):
    for rid in ("ex7-b2-first", "gsr-rational"):
        rep = verify_identity(catalog[rid], 1e-12)
        assert rep["status"] == "pass" and rep["encloses_rhs"]


def test_perturbed_rhs_fails(catalog):
    bad = perturbed(catalog["ex7-b2-first"], "1/1000000")
    with pytest.raises(VerificationFailure) as exc:
        verify_identity(bad, 1e-12)
    assert exc.value.report["status"] == "fail"
    rep = verify_identity(bad, 1e-12, raise_on_failure=False)
    assert rep["status"] == "fail" and not rep["encloses_rhs"]


def test_b4_denominator_erratum(catalog):
    printed = catalog["b4-second-as-printed"]
    assert verify_identity(printed)["status"] == "pass"
    claimed = IdentityRecord("x", printed.sequence, printed.expr, printed.start, "-5/12")
    assert verify_identity(claimed, raise_on_failure=False)["status"] == "fail"
    corrected = catalog["b4-second"]
    assert parse(corrected.expr) == parse(catalog["cor-gen-second-sB-B4"].expr)
    assert parse(printed.expr).scale(8) == parse(corrected.expr)


def test_json_round_trip(tmp_path):
    recs = builtin_catalog()
    path = tmp_path / "cat.json"
    text = dump_catalog(recs, path)
    assert json.loads(text)["schema_version"] == 1
    assert load_catalog(path) == recs
    with pytest.raises(ValueError):
        IdentityRecord.from_json({**recs[0].to_json(), "color": "red"})


def test_json_schema(tmp_path):
    jsonschema = pytest.importorskip("jsonschema")
    schema = json.loads((DOCS / "catalog.schema.json").read_text())
    jsonschema.validate(json.loads(dump_catalog(builtin_catalog())), schema)


def test_audit_list_covers_catalog():
    text = (DOCS / "catalog_audit.md").read_text()
    listed = [line.split("`")[1] for line in text.splitlines() if line.startswith("| `")]
    assert sorted(listed) == sorted(r.id for r in builtin_catalog())
