"""Canonical text grammar for polynomials plus the JSON report schema.

Grammar (whitespace insignificant)::

    poly    := ['-'] term { ('+'|'-') term }
    term    := coeff [ '*' factors ] | factors
    factors := factor { '*' factor }
    factor  := ident [ '^' uint ]
    coeff   := uint [ '/' uint ]
    ident   := letter { letter | digit }

Serialization is canonical: terms in descending graded-lex order,
coefficients in lowest terms, ``1*`` suppressed, the zero polynomial
prints ``0``, and negative coefficients are rendered through the binary
``-`` separator (a leading minus for a negative first term).  Digests are
lowercase hex SHA-256 of the canonical serialization, so they are stable
across runs and platforms.
"""

from __future__ import annotations

import hashlib
import json
from fractions import Fraction

from .algebra import Poly, RatFunc, UnknownVariable, VariableTable


class PolySyntaxError(Exception):
    """Malformed polynomial text; carries the offending position."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class ZeroDenominatorLiteral(Exception):
    """A coefficient literal has denominator zero."""


class _Scanner:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def take(self, ch: str) -> bool:
        if self.peek() == ch:
            self.pos += 1
            return True
        return False

    def expect_uint(self) -> int:
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos == start:
            raise PolySyntaxError("unsigned integer expected", start)
        return int(self.text[start:self.pos])

    def expect_ident(self) -> str:
        self.skip_ws()
        start = self.pos
        if self.pos >= len(self.text) or not self.text[self.pos].isalpha():
            raise PolySyntaxError("identifier expected", start)
        self.pos += 1
        while self.pos < len(self.text) and self.text[self.pos].isalnum():
            self.pos += 1
        return self.text[start:self.pos]

    def at_end(self) -> bool:
        self.skip_ws()
        return self.pos >= len(self.text)


def parse_poly(text: str, table: VariableTable) -> Poly:
    """Parse text in the canonical grammar into an exact polynomial."""
    sc = _Scanner(text)
    terms: dict = {}
    n = len(table)

    def add_term(sign: int) -> None:
        coeff = Fraction(sign)
        expo = [0] * n
        sc.skip_ws()
        have_any = False
        if sc.peek().isdigit():
            num = sc.expect_uint()
            den = 1
            if sc.take("/"):
                den = sc.expect_uint()
                if den == 0:
                    raise ZeroDenominatorLiteral(f"{num}/0 in polynomial text")
            coeff *= Fraction(num, den)
            have_any = True
            if not sc.take("*"):
                terms[tuple(expo)] = terms.get(tuple(expo), Fraction(0)) + coeff
                return
        while True:
            name = sc.expect_ident()
            if name not in table:
                raise UnknownVariable(f"{name!r} not in {table.names}")
            power = 1
            if sc.take("^"):
                power = sc.expect_uint()
            expo[table.position(name)] += power
            have_any = True
            if not sc.take("*"):
                break
            sc.skip_ws()
            if sc.peek().isdigit():
                raise PolySyntaxError("coefficient must lead its term", sc.pos)
        if not have_any:
            raise PolySyntaxError("empty term", sc.pos)
        key = tuple(expo)
        terms[key] = terms.get(key, Fraction(0)) + coeff

    sign = -1 if sc.take("-") else 1
    add_term(sign)
    while not sc.at_end():
        if sc.take("+"):
            add_term(1)
        elif sc.take("-"):
            add_term(-1)
        else:
            raise PolySyntaxError("'+' or '-' expected", sc.pos)
    return Poly(table, terms)


def _format_coeff(c: Fraction) -> str:
    if c.denominator == 1:
        return str(c.numerator)
    return f"{c.numerator}/{c.denominator}"


def _format_term(mono: tuple, coeff: Fraction, table: VariableTable) -> str:
    factors = []
    for name, e in zip(table.names, mono):
        if e == 1:
            factors.append(name)
        elif e > 1:
            factors.append(f"{name}^{e}")
    if not factors:
        return _format_coeff(coeff)
    if coeff == 1:
        return "*".join(factors)
    return _format_coeff(coeff) + "*" + "*".join(factors)


def serialize_poly(p: Poly) -> str:
    """Canonical text form; ``parse_poly(serialize_poly(p)) == p``."""
    if p.is_zero():
        return "0"
    pieces = []
    for i, (mono, coeff) in enumerate(p.sorted_terms()):
        body = _format_term(mono, abs(coeff), p.table)
        if i == 0:
            pieces.append(("-" if coeff < 0 else "") + body)
        else:
            pieces.append(("- " if coeff < 0 else "+ ") + body)
    return " ".join(pieces)


def serialize_ratfunc(r: RatFunc) -> str:
    num, den = r.clear_denominators()
    if den.is_constant() and den.constant_value() == 1:
        return serialize_poly(num)
    return f"({serialize_poly(num)}) / ({serialize_poly(den)})"


def poly_digest(p: Poly) -> str:
    return hashlib.sha256(serialize_poly(p).encode("utf-8")).hexdigest()


def ratfunc_digest(r: RatFunc) -> str:
    return hashlib.sha256(serialize_ratfunc(r).encode("utf-8")).hexdigest()


def degrees_by_variable(p: Poly) -> dict:
    out = {}
    for name in p.table.names:
        d = p.degree_in(name)
        if d != float("-inf") and d > 0:
            out[name] = int(d)
    return out


def emit_report_json(report) -> str:
    """Serialize a proof report to the stable JSON schema (fixed key order)."""
    doc = {
        "schema_version": 1,
        "scenario": report.scenario,
        "case": report.case,
        "steps": [
            {
                "name": s.name,
                "kind": s.kind,
                "citation": s.citation,
                "quote": s.quote,
                "output_digest": s.output_digest,
                "term_count": s.term_count,
                "degrees": s.degrees,
                "seconds": s.seconds,
            }
            for s in report.steps
        ],
        "assumptions": [
            {"poly": serialize_poly(p), "provenance": note}
            for p, note in report.assumptions
        ],
        "verdict": {
            "kind": report.verdict.kind,
            "certification": report.verdict.certification,
            "branches": [
                {"name": b.name, "closed": b.closed, "evidence": b.evidence}
                for b in report.verdict.branches
            ],
        },
        "discrepancies": [
            {
                "step": d.step,
                "classification": d.classification,
                "fixture": d.fixture,
                "computed": d.computed,
                "difference": d.difference,
            }
            for d in report.discrepancies
        ],
        "stats": {
            "wall_seconds": report.wall_seconds,
            "peak_terms": report.peak_terms,
        },
    }
    return json.dumps(doc, indent=2, ensure_ascii=False)
