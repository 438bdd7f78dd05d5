"""Self-contained property suites for the algebra and elimination kernels.

The quick level exercises the randomized algebraic laws: ring axioms,
evaluation and substitution homomorphisms, the Leibniz rule, content and
factor-out roundtrips, resultants against an independent cofactor-expansion
oracle, the resultant sign and common-root laws, text roundtrips and JSON
determinism.  The full level adds two scenarios end to end.

Everything is seeded and deterministic.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Callable, List, Tuple

from .algebra import AssumptionSet, Poly, RatFunc, VariableTable, rf_substitute
from .elimination import (
    PolyMatrix,
    bareiss_determinant,
    resultant,
    resultant_int,
    sylvester_matrix,
)
from .textio import parse_poly, poly_digest, serialize_poly


def cofactor_determinant(M: PolyMatrix) -> Poly:
    """Naive cofactor-expansion determinant; the independent oracle."""
    n = M.nrows
    if n == 1:
        return M[0, 0]
    table = M.table
    total = Poly.zero(table)
    for j in range(n):
        entry = M[0, j]
        if entry.is_zero():
            continue
        minor = PolyMatrix([[M[i, k] for k in range(n) if k != j]
                            for i in range(1, n)])
        sub = cofactor_determinant(minor)
        term = entry * sub
        total = total + (term if j % 2 == 0 else -term)
    return total


def random_poly(rng: random.Random, table: VariableTable, max_terms: int = 5,
                max_degree: int = 5, coeff_bound: int = 9) -> Poly:
    terms = {}
    n = len(table)
    for _ in range(rng.randint(0, max_terms)):
        mono = [0] * n
        budget = rng.randint(0, max_degree)
        for _ in range(budget):
            mono[rng.randrange(n)] += 1
        c = rng.randint(-coeff_bound, coeff_bound)
        if c:
            key = tuple(mono)
            terms[key] = terms.get(key, Fraction(0)) + c
    return Poly(table, terms)


def random_nonzero(rng, table, **kw) -> Poly:
    for _ in range(64):
        p = random_poly(rng, table, **kw)
        if not p.is_zero():
            return p
    return Poly.constant(table, 1)


class CheckFailure(AssertionError):
    pass


def _check(cond: bool, what: str) -> None:
    if not cond:
        raise CheckFailure(what)


def check_ring_axioms(seed: int = 0, cases: int = 1000) -> str:
    rng = random.Random(seed)
    table = VariableTable(["a", "b", "c", "d", "e", "f"])
    zero = Poly.zero(table)
    one = Poly.constant(table, 1)
    for i in range(cases):
        p = random_poly(rng, table, max_terms=4, max_degree=5)
        q = random_poly(rng, table, max_terms=4, max_degree=5)
        r = random_poly(rng, table, max_terms=4, max_degree=5)
        _check((p + q) + r == p + (q + r), f"add associativity case {i}")
        _check(p + q == q + p, f"add commutativity case {i}")
        _check((p * q) * r == p * (q * r), f"mul associativity case {i}")
        _check(p * q == q * p, f"mul commutativity case {i}")
        _check(p * (q + r) == p * q + p * r, f"distributivity case {i}")
        _check(p + zero == p and p * one == p, f"identities case {i}")
    return f"ring axioms: {cases} randomized cases"


def check_eval_homomorphism(seed: int = 1, cases: int = 300) -> str:
    rng = random.Random(seed)
    table = VariableTable(["a", "b", "c"])
    for i in range(cases):
        p = random_poly(rng, table)
        q = random_poly(rng, table)
        point = {v: Fraction(rng.randint(-9, 9), rng.randint(1, 5))
                 for v in table}
        _check((p + q).evaluate(point) == p.evaluate(point) + q.evaluate(point),
               f"eval additivity case {i}")
        _check((p * q).evaluate(point) == p.evaluate(point) * q.evaluate(point),
               f"eval multiplicativity case {i}")
    return f"evaluation homomorphism: {cases} randomized cases"


def check_leibniz(seed: int = 2, cases: int = 300) -> str:
    rng = random.Random(seed)
    table = VariableTable(["a", "b", "c"])
    for i in range(cases):
        p = random_poly(rng, table)
        q = random_poly(rng, table)
        v = rng.choice(table.names)
        lhs = (p * q).partial_derivative(v)
        rhs = p.partial_derivative(v) * q + p * q.partial_derivative(v)
        _check(lhs == rhs, f"partial-derivative Leibniz case {i}")
    # the context derivation satisfies Leibniz as well
    from .frame import build_context

    ctx = build_context("delta3", "A")
    for i in range(60):
        p = random_poly(rng, ctx.table, max_terms=3, max_degree=3)
        q = random_poly(rng, ctx.table, max_terms=3, max_degree=3)
        lhs = ctx.derive(p * q)
        rhs = ctx.derive(p) * RatFunc.from_poly(q, ctx.assumptions) \
            + RatFunc.from_poly(p, ctx.assumptions) * ctx.derive(q)
        _check(lhs == rhs, f"derivation Leibniz case {i}")
        lin = ctx.derive(p + q) - (ctx.derive(p) + ctx.derive(q))
        _check(lin.is_zero(), f"derivation linearity case {i}")
    return f"Leibniz rule: {cases} + 60 randomized cases"


def check_content_roundtrips(seed: int = 3, cases: int = 300) -> str:
    rng = random.Random(seed)
    table = VariableTable(["a", "b"])
    for i in range(cases):
        p = random_poly(rng, table)
        if p.is_zero():
            continue
        c, prim = p.content_primitive()
        _check(prim.scale(c) == p, f"content roundtrip case {i}")
        factors = [random_nonzero(rng, table, max_terms=2, max_degree=2)
                   for _ in range(2)]
        factors = [f for f in factors if not f.is_constant()]
        product = p
        exps = []
        for f in factors:
            e = rng.randint(0, 2)
            exps.append(e)
            product = product * f ** e
        reduced, found = product.factor_out(factors)
        rebuilt = reduced
        for f, e in zip(factors, found):
            rebuilt = rebuilt * f ** e
        _check(rebuilt == product, f"factor-out roundtrip case {i}")
        _check(all(fe >= e for fe, e in zip(found, exps)),
               f"factor-out maximality case {i}")
    return f"content and factor-out roundtrips: {cases} randomized cases"


def check_rf_axioms(seed: int = 4, cases: int = 200) -> str:
    rng = random.Random(seed)
    table = VariableTable(["a", "b"])
    asm = AssumptionSet()
    for i in range(cases):
        pn, pd = random_nonzero(rng, table), random_nonzero(rng, table)
        qn, qd = random_nonzero(rng, table), random_nonzero(rng, table)
        p = RatFunc(pn, pd, asm)
        q = RatFunc(qn, qd, asm)
        _check(p + q == q + p, f"rf add commutativity case {i}")
        _check(p * q == q * p, f"rf mul commutativity case {i}")
        if not p.is_zero():
            _check(p / p == RatFunc.constant(table, 1),
                   f"rf self-division case {i}")
        _check((p - p).is_zero(), f"rf additive inverse case {i}")
    # substitution homomorphism
    for i in range(60):
        p = random_poly(rng, table, max_terms=3, max_degree=3)
        q = random_poly(rng, table, max_terms=3, max_degree=3)
        img = {"a": RatFunc(random_nonzero(rng, table, max_degree=2),
                            random_nonzero(rng, table, max_degree=1), asm)}
        lhs = rf_substitute(p * q, img, asm)
        rhs = rf_substitute(p, img, asm) * rf_substitute(q, img, asm)
        _check(lhs == rhs, f"substitution homomorphism case {i}")
    return f"rational-function laws: {cases} + 60 randomized cases"


def check_resultants(seed: int = 5, univariate_cases: int = 1000,
                     det_cases: int = 200) -> str:
    rng = random.Random(seed)
    x_table = VariableTable(["x"])
    for i in range(univariate_cases):
        f = [rng.randint(-9, 9) for _ in range(rng.randint(2, 5))]
        g = [rng.randint(-9, 9) for _ in range(rng.randint(2, 5))]
        fp = _poly_from_coeffs(f, x_table, "x")
        gp = _poly_from_coeffs(g, x_table, "x")
        if fp.degree_in("x") in (0, float("-inf")) \
                or gp.degree_in("x") in (0, float("-inf")):
            continue
        oracle = cofactor_determinant(sylvester_matrix(fp, gp, "x"))
        mine, _ = resultant(fp, gp, "x")
        _check(mine == oracle, f"resultant vs cofactor case {i}: {f} {g}")
    table = VariableTable(["x", "y"])
    for i in range(det_cases):
        size = rng.randint(2, 4)
        M = PolyMatrix([[random_poly(rng, table, max_terms=2, max_degree=2)
                         for _ in range(size)] for _ in range(size)])
        _check(bareiss_determinant(M) == cofactor_determinant(M),
               f"Bareiss vs cofactor case {i}")
    # sign swap and common-root laws
    for i in range(200):
        f = _poly_from_coeffs([rng.randint(-9, 9) for _ in range(rng.randint(2, 5))],
                              x_table, "x")
        g = _poly_from_coeffs([rng.randint(-9, 9) for _ in range(rng.randint(2, 5))],
                              x_table, "x")
        if f.is_zero() or g.is_zero():
            continue
        m = f.degree_in("x")
        n = g.degree_in("x")
        if m in (0, float("-inf")) or n in (0, float("-inf")):
            continue
        r1, _ = resultant(f, g, "x")
        r2, _ = resultant(g, f, "x")
        expected = r2 if (int(m) * int(n)) % 2 == 0 else -r2
        _check(r1 == expected, f"swap sign law case {i}")
    xy = VariableTable(["x", "a"])
    for i in range(100):
        shared = parse_poly("x - a", xy)
        f = shared * random_nonzero(rng, xy, max_terms=2, max_degree=2)
        g = shared * random_nonzero(rng, xy, max_terms=2, max_degree=2)
        if f.degree_in("x") in (0, float("-inf")) \
                or g.degree_in("x") in (0, float("-inf")):
            continue
        r, _ = resultant(f, g, "x")
        _check(r.is_zero(), f"common-root law case {i}")
    # multiplicativity spot-check
    for i in range(60):
        f = _poly_from_coeffs([rng.randint(-5, 5) for _ in range(3)], x_table, "x")
        h = _poly_from_coeffs([rng.randint(-5, 5) for _ in range(3)], x_table, "x")
        g = _poly_from_coeffs([rng.randint(-5, 5) for _ in range(3)], x_table, "x")
        if any(p.degree_in("x") in (0, float("-inf")) for p in (f, g, h)):
            continue
        lhs, _ = resultant(f * h, g, "x")
        r1, _ = resultant(f, g, "x")
        r2, _ = resultant(h, g, "x")
        _check(lhs == r1 * r2, f"multiplicativity case {i}")
    return (f"resultants: {univariate_cases} univariate oracle cases, "
            f"{det_cases} determinant cases, sign/common-root/"
            f"multiplicativity laws")


def _poly_from_coeffs(coeffs: List[int], table: VariableTable, v: str) -> Poly:
    out = Poly.zero(table)
    d = len(coeffs) - 1
    for i, c in enumerate(coeffs):
        if c:
            out = out + (Poly.variable(table, v) ** (d - i)).scale(c)
    return out


def check_textio(seed: int = 6, cases: int = 500) -> str:
    rng = random.Random(seed)
    table = VariableTable(["a", "b", "c", "d", "e", "f"])
    for i in range(cases):
        p = random_poly(rng, table, max_terms=6, max_degree=8,
                        coeff_bound=10 ** 6)
        text = serialize_poly(p)
        q = parse_poly(text, table)
        _check(q == p, f"parse/serialize roundtrip case {i}")
        _check(serialize_poly(q) == text, f"idempotent serialization case {i}")
    return f"text roundtrips: {cases} randomized cases"


def check_json_determinism() -> str:
    from .proofscripts import RunConfig, run_delta4
    from .textio import emit_report_json

    a = emit_report_json(run_delta4("C", RunConfig(seed=0)))
    b = emit_report_json(run_delta4("C", RunConfig(seed=0)))
    _check(a == b, "JSON reports differ between identical runs")
    return "JSON determinism: two identical runs byte-identical"


QUICK_CHECKS: List[Callable[[], str]] = [
    check_ring_axioms,
    check_eval_homomorphism,
    check_leibniz,
    check_content_roundtrips,
    check_rf_axioms,
    check_resultants,
    check_textio,
    check_json_determinism,
]


def run_selftest(level: str = "quick") -> Tuple[bool, List[str]]:
    lines = []
    ok = True
    for check in QUICK_CHECKS:
        try:
            lines.append("PASS  " + check())
        except CheckFailure as exc:
            ok = False
            lines.append(f"FAIL  {check.__name__}: {exc}")
    if level == "full" and ok:
        from .proofscripts import RunConfig, run_case

        for scenario, case in (("delta2", "A"), ("delta2", "B"),
                               ("delta3", "A"), ("delta3", "B")):
            report = run_case(scenario, case, RunConfig())
            closed = all(b.closed for b in report.verdict.branches)
            if report.verdict.kind in ("HConstant", "CaseImpossible") \
                    and closed:
                lines.append(f"PASS  end-to-end {scenario}/{case}: "
                             f"{report.verdict.kind}")
            else:
                ok = False
                lines.append(f"FAIL  end-to-end {scenario}/{case}")
    return ok, lines
