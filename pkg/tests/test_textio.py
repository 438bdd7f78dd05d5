"""Canonical text grammar and the JSON report schema."""

import json
import random

import pytest

from idealcmc.algebra import Poly, UnknownVariable, VariableTable
from idealcmc.textio import (
    PolySyntaxError,
    ZeroDenominatorLiteral,
    emit_report_json,
    parse_poly,
    poly_digest,
    serialize_poly,
)

T = VariableTable(["H", "h1", "l3"])


class TestParse:
    def test_quartic_parses(self):
        text = ("h1^4 + 2*H^2*l3^2*h1^2 - 8*H^3*l3*h1^2 + 40*H^4*h1^2 "
                "+ 36*H^6*l3^2 - 144*H^7*l3 + 432*H^8")
        p = parse_poly(text, T)
        assert p.term_count() == 7
        assert p.evaluate({"H": 1, "l3": 0, "h1": 1}) == 473

    def test_zero_literal(self):
        assert parse_poly("0", T).is_zero()

    def test_like_term_cancellation(self):
        assert parse_poly("H - H", T).is_zero()

    def test_leading_minus(self):
        assert parse_poly("-4*H^2 - 8", T) == parse_poly("0 - 4*H^2 - 8", T)

    def test_whitespace_insignificant(self):
        assert parse_poly(" H ^ 2+ l3 ", T) == parse_poly("H^2 + l3", T)

    def test_repeated_variable_factors(self):
        assert parse_poly("H*H*l3", T) == parse_poly("H^2*l3", T)

    def test_unknown_identifier(self):
        with pytest.raises(UnknownVariable):
            parse_poly("H + zz", T)

    def test_syntax_error_position(self):
        with pytest.raises(PolySyntaxError):
            parse_poly("H + + l3", T)
        with pytest.raises(PolySyntaxError):
            parse_poly("", T)

    def test_zero_denominator_literal(self):
        with pytest.raises(ZeroDenominatorLiteral):
            parse_poly("1/0*H", T)

    def test_coefficient_must_lead(self):
        with pytest.raises(PolySyntaxError):
            parse_poly("H*2", T)


class TestSerialize:
    def test_canonical_order(self):
        two = VariableTable(["H", "l3"])
        p = parse_poly("0 - l3^2 + H^2", two)
        assert serialize_poly(p) == "H^2 - l3^2"

    def test_zero(self):
        assert serialize_poly(Poly.zero(T)) == "0"

    def test_one_suppressed(self):
        assert serialize_poly(parse_poly("1*H", T)) == "H"
        assert serialize_poly(parse_poly("3/2*H", T)) == "3/2*H"

    def test_roundtrip_random(self):
        rng = random.Random(21)
        from idealcmc.selftest import random_poly

        for _ in range(200):
            p = random_poly(rng, T, max_terms=6, max_degree=8,
                            coeff_bound=10 ** 6)
            text = serialize_poly(p)
            assert parse_poly(text, T) == p
            assert serialize_poly(parse_poly(text, T)) == text

    def test_parse_then_serialize_canonicalizes(self):
        messy = "l3 + H + l3"
        assert serialize_poly(parse_poly(messy, T)) == "H + 2*l3"

    def test_digest_stability(self):
        p = parse_poly("H^2 - l3^2", T)
        assert poly_digest(p) == poly_digest(parse_poly("H^2 - l3^2", T))
        assert len(poly_digest(p)) == 64


class TestReportJson:
    def test_empty_steps_report(self):
        from idealcmc.proofscripts import ProofReport

        r = ProofReport("delta4", "C")
        doc = json.loads(emit_report_json(r))
        assert doc["steps"] == []
        assert doc["schema_version"] == 1
        assert list(doc) == ["schema_version", "scenario", "case", "steps",
                             "assumptions", "verdict", "discrepancies",
                             "stats"]

    def test_delta4c_report_schema(self):
        from idealcmc.proofscripts import RunConfig, run_delta4

        r = run_delta4("C", RunConfig())
        doc = json.loads(emit_report_json(r))
        assert doc["verdict"]["kind"] == "HConstant"
        assert doc["verdict"]["certification"] == "certified"
        assert doc["discrepancies"][0]["classification"] == "structural"
        assert doc["stats"]["wall_seconds"] == 0.0
        step = doc["steps"][0]
        assert list(step) == ["name", "kind", "citation", "quote",
                              "output_digest", "term_count", "degrees",
                              "seconds"]

    def test_byte_identical_runs(self):
        from idealcmc.proofscripts import RunConfig, run_delta4

        a = emit_report_json(run_delta4("C", RunConfig(seed=0)))
        b = emit_report_json(run_delta4("C", RunConfig(seed=0)))
        assert a == b
