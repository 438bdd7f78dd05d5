"""Structure contexts for the three ideal-hypersurface scenarios.

A :class:`StructureContext` packages, for one scenario and case, the
variable table, the closed-form definitions of dependent symbols, the
action of the directional derivative along the gradient direction (a
formal derivation on the polynomial ring), the polynomial relations that
hold on the working open set, and the set of quantities assumed
nonvanishing there.

Scenario conventions (n is the hypersurface dimension):

* ``delta2`` (shape operator diag(a, b, a+b, ..., a+b) in E^{n+1}):
  symbolic n, principal curvatures expressed through H and n.
* ``delta3`` (diag(a, b, c, a+b+c) in E^5): the gradient eigenvalue is
  -2H, the complementary one 2H, and b + c = 4H.
* ``delta4`` (diag(a, b, c, d, a+b+c+d) in E^6, constant scalar
  curvature rho): the gradient eigenvalue is -5H/2, the complementary
  one 5H/2, and b + c + d = 5H.

Variable naming: ``H`` mean curvature, ``h1`` its derivative along the
gradient direction, ``l2 l3 l4`` principal curvatures, ``w22 w33 w44
w55 wAA`` the diagonal connection coefficients toward the gradient
direction, ``rho`` scalar curvature, ``k`` the constant ratio appearing
in the off-diagonal branch, ``n`` the symbolic dimension.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .algebra import (
    AssumptionSet,
    CyclicDefinition,
    Poly,
    RatFunc,
    UnknownVariable,
    VariableTable,
    rf_substitute,
)
from .elimination import cramer_solve_2x2


class FrameError(Exception):
    pass


class UnknownScenario(FrameError):
    """No such scenario/case combination."""


class UndefinedDerivation(FrameError):
    """A variable without a derivation rule was differentiated."""


class Relation:
    """A polynomial fact vanishing on the working set.

    ``solve_var``/``solve_power`` designate the pivot monomial the
    relation can be solved for; the pivot's coefficient must be a nonzero
    rational so reduction stays polynomial.
    """

    __slots__ = ("name", "poly", "solve_var", "solve_power", "note")

    def __init__(self, name: str, poly: Poly, solve_var: Optional[str] = None,
                 solve_power: int = 1, note: str = ""):
        self.name = name
        self.poly = poly
        self.solve_var = solve_var
        self.solve_power = solve_power
        self.note = note
        if solve_var is not None:
            lead = poly.coeff_in(solve_var, solve_power)
            if lead.is_zero() or not lead.is_constant():
                raise ValueError(
                    f"relation {name!r} cannot be solved for "
                    f"{solve_var}^{solve_power}: pivot coefficient not a constant")
            if int(poly.degree_in(solve_var)) != solve_power:
                raise ValueError(
                    f"relation {name!r}: pivot power is not the top degree")


def reduce_by_relation(p: Poly, rel: Relation) -> Poly:
    """Normal form of p modulo a solved relation.

    Rewrites every monomial whose ``solve_var`` exponent reaches the pivot
    power; terminates because each rewrite strictly lowers that exponent.
    """
    if rel.solve_var is None:
        raise ValueError(f"relation {rel.name!r} has no designated pivot")
    v = rel.solve_var
    k = rel.solve_power
    iv = p.table.position(v)
    lead = rel.poly.coeff_in(v, k).constant_value()
    # rest = rel.poly - lead * v^k;  v^k == -rest/lead on the working set
    vk = Poly.variable(p.table, v) ** k
    rest = rel.poly - vk.scale(lead)
    image = rest.scale(Fraction(-1) / lead)  # polynomial with deg_v < k
    while True:
        hits = {m: c for m, c in p.terms.items() if m[iv] >= k}
        if not hits:
            return p
        repl = Poly.zero(p.table)
        keep = {m: c for m, c in p.terms.items() if m[iv] < k}
        for m, c in hits.items():
            lowered = list(m)
            lowered[iv] -= k
            repl = repl + Poly(p.table, {tuple(lowered): c}) * image
        p = Poly(p.table, keep) + repl


class StructureContext:
    """All structure data for one scenario/case; immutable after build."""

    def __init__(self, scenario: str, case: str, table: VariableTable,
                 parse_table: VariableTable,
                 definitions: List[Tuple[str, RatFunc, str]],
                 derivation: Dict[str, RatFunc],
                 relations: List[Relation],
                 assumptions: AssumptionSet,
                 derivation_notes: Optional[Dict[str, str]] = None,
                 formal_overrides: Optional[Dict[str, RatFunc]] = None):
        self.scenario = scenario
        self.case = case
        self.table = table
        self.parse_table = parse_table
        self.definitions = definitions
        self.derivation = derivation
        self.relations = relations
        self.assumptions = assumptions
        self.derivation_notes = derivation_notes or {}
        # derivation images that keep dependent symbols formal, for the
        # stages that differentiate before substituting closed forms
        self.formal_overrides = formal_overrides or {}
        self._check_definitions()

    @property
    def tag(self) -> str:
        return f"{self.scenario}/{self.case}"

    def relation(self, name: str) -> Relation:
        for r in self.relations:
            if r.name == name:
                return r
        raise KeyError(f"no relation named {name!r} in {self.tag}")

    def _check_definitions(self) -> None:
        # definition expansion must reach a fixed point: later definitions
        # may use earlier symbols, never themselves or later ones
        seen: set = set()
        for name, rf, _ in self.definitions:
            present = set(rf.num.variables_present()) | set(rf.den.variables_present())
            if name in present:
                raise CyclicDefinition(f"definition of {name!r} references itself")
            seen.add(name)

    # -- operations -----------------------------------------------------

    def parse(self, text: str) -> Poly:
        from .textio import parse_poly

        return parse_poly(text, self.parse_table)

    def expand_definitions(self, e) -> RatFunc:
        """Rewrite defined symbols into core variables (idempotent)."""
        if isinstance(e, Poly):
            e = RatFunc.from_poly(
                e.retabled(self.parse_table), self.assumptions)
        else:
            e = RatFunc(e.num.retabled(self.parse_table),
                        e.den.retabled(self.parse_table), e.assumptions)
        images = {}
        for name, rf, _ in self.definitions:
            images[name] = RatFunc(rf.num.retabled(self.parse_table),
                                   rf.den.retabled(self.parse_table),
                                   rf.assumptions)
        for _ in range(len(self.definitions) + 1):
            present = (set(e.num.variables_present())
                       | set(e.den.variables_present()))
            todo = {n: rf for n, rf in images.items() if n in present}
            if not todo:
                num = e.num.retabled(self.table)
                den = e.den.retabled(self.table)
                return RatFunc(num, den, e.assumptions)
            num = rf_substitute(e.num, todo, e.assumptions)
            den = rf_substitute(e.den, todo, e.assumptions)
            e = num / den
        raise CyclicDefinition(f"definition rewriting did not stabilize in {self.tag}")

    def derive_poly(self, p: Poly, formal: bool = False) -> RatFunc:
        rules = self.derivation
        if formal and self.formal_overrides:
            rules = {**self.derivation, **self.formal_overrides}
        result = RatFunc.constant(self.table, 0, self.assumptions)
        for name in p.variables_present():
            rule = rules.get(name)
            if rule is None:
                raise UndefinedDerivation(
                    f"no derivation rule for {name!r} in {self.tag}")
            dp = p.partial_derivative(name)
            if dp.is_zero():
                continue
            result = result + RatFunc.from_poly(dp, self.assumptions) * rule
        return result

    def derive(self, e, formal: bool = False) -> RatFunc:
        """Directional derivative along the gradient direction.

        Linear, satisfies the Leibniz rule, and extends to quotients by
        D(p/q) = (D(p) q - p D(q)) / q^2.  With ``formal=True`` the
        derivation images that keep dependent symbols formal replace the
        closed-form ones.
        """
        if isinstance(e, Poly):
            return self.derive_poly(e, formal)
        dn = self.derive_poly(e.num, formal)
        dd = self.derive_poly(e.den, formal)
        den_rf = RatFunc.from_poly(e.den, e.assumptions)
        num_rf = RatFunc.from_poly(e.num, e.assumptions)
        return (dn * den_rf - num_rf * dd) / (den_rf * den_rf)

    def check_identity(self, lhs, rhs, reduction: Sequence[str] = ()
                       ) -> Tuple[bool, Poly]:
        """Check lhs == rhs modulo the named solved relations.

        Both sides are definition-expanded, the cross-multiplied
        difference is reduced by each named relation in order, and the
        residual polynomial is returned (zero iff the identity holds).
        """
        a = self.expand_definitions(lhs)
        b = self.expand_definitions(rhs)
        diff = a - b
        residual = diff.num
        for name in reduction:
            residual = reduce_by_relation(residual, self.relation(name))
        return residual.is_zero(), residual

    def sub_defs(self, e) -> RatFunc:
        """Alias for definition expansion (reads better at call sites)."""
        return self.expand_definitions(e)


class PositivityWitness:
    """Certificate that a polynomial is a positive combination of even powers.

    The decomposition consists of strictly positive coefficients on
    monomials with all-even exponents, at least one of which is a pure
    power of the forced variable.  Vanishing over the reals then forces
    the designated variable to zero (or is impossible outright when the
    pure power is the constant term).
    """

    __slots__ = ("target", "terms", "forced", "never_zero")

    def __init__(self, target: Poly, terms: List[Tuple[Fraction, tuple]],
                 forced: str, never_zero: bool):
        self.target = target
        self.terms = terms
        self.forced = forced
        self.never_zero = never_zero

    def reconstruct(self) -> Poly:
        total = Poly.zero(self.target.table)
        for c, mono in self.terms:
            total = total + Poly(self.target.table, {mono: c})
        return total

    def describe(self) -> str:
        from .textio import serialize_poly

        parts = ", ".join(
            f"({c}, {serialize_poly(Poly(self.target.table, {m: Fraction(1)}))})"
            for c, m in self.terms)
        kind = "never vanishes over the reals" if self.never_zero else \
            f"vanishing forces {self.forced} = 0"
        return f"positive even-power decomposition [{parts}]; {kind}"


def sos_h_witness(p: Poly, forced: str) -> Optional[PositivityWitness]:
    """Certify that p = 0 over the reals forces ``forced`` = 0.

    Succeeds iff every monomial has all-even exponents and a strictly
    positive coefficient, and some monomial is a pure power of the forced
    variable.  A positive constant term upgrades the certificate: the
    polynomial can never vanish at real points at all.
    """
    if p.is_zero():
        return None
    idx = p.table.position(forced)
    pure_power = False
    never_zero = False
    terms = []
    for mono, c in p.sorted_terms():
        if c <= 0:
            return None
        if any(e % 2 for e in mono):
            return None
        if all(e == 0 for i, e in enumerate(mono) if i != idx):
            pure_power = True
            if mono[idx] == 0:
                never_zero = True
        terms.append((c, mono))
    if not pure_power:
        return None
    return PositivityWitness(p, terms, forced, never_zero)


def derived_pair(ctx: StructureContext, a: Poly, b: Poly,
                 mu_a, mu_b, formal: bool = False) -> Tuple[RatFunc, RatFunc]:
    """Derivative coefficients for a homogeneous pair relation a*x + b*y = 0.

    The unknowns x, y are isotropic under the derivation (D(x) = mu_a * x,
    D(y) = mu_b * y), so differentiating the relation yields the new
    coefficient pair (D(a) + a*mu_a, D(b) + b*mu_b) on the same unknowns.
    """
    mu_a = ctx.expand_definitions(mu_a) if isinstance(mu_a, Poly) else mu_a
    mu_b = ctx.expand_definitions(mu_b) if isinstance(mu_b, Poly) else mu_b
    da = ctx.derive(a, formal) + RatFunc.from_poly(a, ctx.assumptions) * mu_a
    db = ctx.derive(b, formal) + RatFunc.from_poly(b, ctx.assumptions) * mu_b
    return da, db


def pair_determinant(a: Poly, b: Poly, da: RatFunc, db: RatFunc) -> RatFunc:
    """Determinant of the 2x2 homogeneous system {(a, b), (da, db)}."""
    return RatFunc.from_poly(a, da.assumptions) * db \
        - RatFunc.from_poly(b, db.assumptions) * da


# -- context builders --------------------------------------------------------


def _rf(table: VariableTable, num_text: str, den_text: str,
        asm: AssumptionSet) -> RatFunc:
    from .textio import parse_poly

    return RatFunc(parse_poly(num_text, table), parse_poly(den_text, table), asm)


def _build_delta2(case: str) -> StructureContext:
    if case not in ("A", "B"):
        raise UnknownScenario(f"delta2 has no case {case!r}")
    table = VariableTable(["H", "h1", "n", "w22", "wAA"])
    parse_table = table.extend(["l1", "l2", "lA"])
    asm = AssumptionSet()
    from .textio import parse_poly

    def P(text: str) -> Poly:
        return parse_poly(text, table)

    asm.add(P("H"), "mean curvature nonzero on the working set")
    asm.add(P("h1"), "gradient of H nonzero on the working set")
    asm.add(P("n"), "dimension is a positive integer")
    asm.add(P("n - 1"), "dimension at least 3")
    asm.add(P("n + 1"), "dimension positive")

    definitions = [
        ("l1", _rf(table, "-n*H", "2", asm),
         "gradient eigenvalue of the shape operator"),
        ("l2", _rf(table, "n^2*H + n*H", "2*n - 2", asm),
         "second principal curvature from the trace identity"),
        ("lA", _rf(table, "n*H", "n - 1", asm),
         "repeated principal curvature from the trace identity"),
    ]
    derivation = {
        "H": _rf(table, "h1", "1", asm),
        "n": _rf(table, "0", "1", asm),
        # D(w) = w^2 + (gradient eigenvalue) * (own eigenvalue)
        "w22": _rf(table, "4*n*w22^2 - 4*w22^2 - n^3*H^2 - n^2*H^2",
                   "4*n - 4", asm),
        "wAA": _rf(table, "2*n*wAA^2 - 2*wAA^2 - n^2*H^2", "2*n - 2", asm),
    }
    relations = [
        Relation("curvature-product",
                 P("2*n^2*w22*wAA - 4*n*w22*wAA + 2*w22*wAA + n^3*H^2 + n^2*H^2"),
                 note="product of the two diagonal coefficients fixed by the "
                      "sectional curvature of the 2-A plane"),
        Relation("gradient-rate-2",
                 P("n*h1 + h1 - 2*n*H*w22"),
                 note="rate of H along the gradient through the second "
                      "curvature direction"),
        Relation("gradient-rate-A",
                 P("2*h1 - n*H*wAA - H*wAA"),
                 note="rate of H along the gradient through a repeated "
                      "curvature direction"),
    ]
    return StructureContext("delta2", case, table, parse_table, definitions,
                            derivation, relations, asm)


def _build_delta3(case: str) -> StructureContext:
    from .textio import parse_poly

    if case == "A":
        table = VariableTable(["H", "h1", "l3", "w22", "w33"])
        parse_table = table.extend(["l1", "l2", "l4", "w44"])

        def P(text: str) -> Poly:
            return parse_poly(text, table)

        asm = AssumptionSet()
        asm.add(P("H"), "mean curvature nonzero on the working set")
        asm.add(P("h1"), "gradient of H nonzero on the working set")
        asm.add(P("2*H - l3"), "second and third curvatures distinct")
        asm.add(P("2*l3 - 4*H"), "third curvature differs from the "
                                 "complementary eigenvalue")
        asm.add(P("l3 + 2*H"), "third curvature differs from the gradient "
                               "eigenvalue")
        asm.add(P("6*H - l3"), "second curvature differs from the gradient "
                               "eigenvalue")

        # closed forms of the two diagonal coefficients: solve the linear
        # system {sum rule along the gradient, product-sum rule}
        a11, a12, b1 = P("6*H - l3"), P("l3 + 2*H"), P("4*h1")
        a21, a22, b2 = P("h1"), P("h1"), P("-16*H^3")
        w22_rf, w33_rf, det = cramer_solve_2x2(a11, a12, a21, a22, b1, b2, asm)

        definitions = [
            ("l1", _rf(table, "-2*H", "1", asm), "gradient eigenvalue"),
            ("l4", _rf(table, "2*H", "1", asm), "complementary eigenvalue"),
            ("l2", _rf(table, "4*H - l3", "1", asm),
             "trace identity for the second curvature"),
            ("w44", _rf(table, "h1", "2*H", asm),
             "diagonal coefficient of the complementary direction"),
            ("w22", w22_rf, "closed form from the solved linear system"),
            ("w33", w33_rf, "closed form from the solved linear system"),
        ]
        derivation = {
            "H": _rf(table, "h1", "1", asm),
            "h1": _rf(table, "3*h1^2 - 16*H^4", "2*H", asm),
            # D(l3) = (l3 + 2H) * w33 with w33 in closed form
            "l3": RatFunc(P("l3 + 2*H") * w33_rf.num, w33_rf.den, asm),
            "w22": _rf(table, "w22^2 - 8*H^2 + 2*H*l3", "1", asm),
            "w33": _rf(table, "w33^2 - 2*H*l3", "1", asm),
        }
        relations = [
            Relation("gradient-sum",
                     P("6*H*w22 - l3*w22 + l3*w33 + 2*H*w33 - 4*h1"),
                     note="derivative of the curvature-sum identity along "
                          "the gradient"),
            Relation("product-sum",
                     P("h1*w22 + h1*w33 + 16*H^3"),
                     note="sum of the two curvature-product identities"),
        ]
        formal = {
            "l3": RatFunc(P("l3*w33 + 2*H*w33").retabled(table),
                          P("1").retabled(table), asm),
        }
        return StructureContext("delta3", case, table, parse_table,
                                definitions, derivation, relations, asm,
                                formal_overrides=formal)

    if case == "B":
        table = VariableTable(["H", "h1", "w22"])
        parse_table = table.extend(["l2", "l3", "l4", "w33", "w44"])

        def P(text: str) -> Poly:
            return parse_poly(text, table)

        asm = AssumptionSet()
        asm.add(P("H"), "mean curvature nonzero on the working set")
        asm.add(P("h1"), "gradient of H nonzero on the working set")
        definitions = [
            ("l2", _rf(table, "2*H", "1", asm), "all middle curvatures collapse"),
            ("l3", _rf(table, "2*H", "1", asm), "all middle curvatures collapse"),
            ("l4", _rf(table, "2*H", "1", asm), "complementary eigenvalue"),
            ("w33", _rf(table, "w22", "1", asm), "equal diagonal coefficients"),
            ("w44", _rf(table, "w22", "1", asm), "equal diagonal coefficients"),
        ]
        derivation = {
            "H": _rf(table, "h1", "1", asm),
            "w22": _rf(table, "w22^2 - 4*H^2", "1", asm),
        }
        relations = [
            Relation("curvature-product",
                     P("w22^2 + 4*H^2"),
                     note="sectional-curvature product identity after the "
                          "curvatures collapse"),
        ]
        return StructureContext("delta3", case, table, parse_table,
                                definitions, derivation, relations, asm)

    raise UnknownScenario(f"delta3 has no case {case!r}")


def _delta4_distinctness(P, asm: AssumptionSet, which: Sequence[str]) -> None:
    texts = {
        "l2-l3": ("5*H - 2*l3 - l4", "second and third curvatures distinct"),
        "l2-l4": ("5*H - l3 - 2*l4", "second and fourth curvatures distinct"),
        "l3-l4": ("l3 - l4", "third and fourth curvatures distinct"),
        "l2-l5": ("5*H - 2*l3 - 2*l4", "second curvature differs from the "
                                       "complementary eigenvalue"),
        "l3-l5": ("2*l3 - 5*H", "third curvature differs from the "
                                "complementary eigenvalue"),
        "l4-l5": ("2*l4 - 5*H", "fourth curvature differs from the "
                                "complementary eigenvalue"),
        "l2-l1": ("15*H - 2*l3 - 2*l4", "second curvature differs from the "
                                        "gradient eigenvalue"),
        "l3-l1": ("2*l3 + 5*H", "third curvature differs from the gradient "
                                "eigenvalue"),
        "l4-l1": ("2*l4 + 5*H", "fourth curvature differs from the gradient "
                                "eigenvalue"),
    }
    for key in which:
        text, note = texts[key]
        asm.add(P(text), note)


def _build_delta4(case: str) -> StructureContext:
    from .textio import parse_poly

    if case == "A":
        table = VariableTable(["H", "h1", "rho", "l3", "l4"])
        parse_table = table.extend(
            ["l1", "l2", "l5", "w22", "w33", "w44", "w55"])

        def P(text: str) -> Poly:
            return parse_poly(text, table)

        asm = AssumptionSet()
        asm.add(P("H"), "mean curvature nonzero on the working set")
        asm.add(P("h1"), "gradient of H nonzero on the working set")
        _delta4_distinctness(P, asm, ["l2-l3", "l2-l4", "l3-l4", "l2-l5",
                                      "l3-l5", "l4-l5", "l2-l1", "l3-l1",
                                      "l4-l1"])
        definitions = [
            ("l1", _rf(table, "-5*H", "2", asm), "gradient eigenvalue"),
            ("l5", _rf(table, "5*H", "2", asm), "complementary eigenvalue"),
            ("l2", _rf(table, "5*H - l3 - l4", "1", asm),
             "trace identity for the second curvature"),
            ("w55", _rf(table, "h1", "2*H", asm),
             "diagonal coefficient of the complementary direction"),
            ("w22", _rf(table, "-25*H^3 + 5*H^2*l3 + 5*H^2*l4", "h1", asm),
             "curvature-product identity solved for the coefficient"),
            ("w33", _rf(table, "-5*H^2*l3", "h1", asm),
             "curvature-product identity solved for the coefficient"),
            ("w44", _rf(table, "-5*H^2*l4", "h1", asm),
             "curvature-product identity solved for the coefficient"),
        ]
        derivation = {
            "H": _rf(table, "h1", "1", asm),
            "h1": _rf(table, "3*h1^2 - 25*H^4", "2*H", asm),
            "rho": _rf(table, "0", "1", asm),
            "l3": _rf(table, "-10*H^2*l3^2 - 25*H^3*l3", "2*h1", asm),
            "l4": _rf(table, "-10*H^2*l4^2 - 25*H^3*l4", "2*h1", asm),
        }
        relations = [
            Relation("scalar-curvature",
                     P("2*rho + 25*H^2 + 4*l3^2 + 4*l4^2 + 4*l3*l4 "
                       "- 20*H*l3 - 20*H*l4"),
                     solve_var="rho", solve_power=1,
                     note="scalar curvature through the squared curvatures"),
            Relation("pair-sum",
                     P("-4*l3^2 - 4*l3*l4 - 4*l4^2 + 20*H*l3 + 20*H*l4 "
                       "- 25*H^2 - 2*rho"),
                     solve_var="l3", solve_power=2,
                     note="sum of pairwise curvature products through the "
                          "scalar curvature"),
        ]
        # The coefficient-products relation is built from the definitions so
        # it is exactly the cleared sum of pairwise products of the diagonal
        # coefficients plus the scalar-curvature combination.
        ctx = StructureContext("delta4", case, table, parse_table,
                               definitions, derivation, relations, asm)
        s = ctx.sub_defs(ctx.parse("w22*w33 + w33*w44 + w44*w22")) \
            + _rf(table, "25*H^2 + 2*rho", "4", asm)
        num, _ = s.clear_denominators()
        _, num = num.content_primitive()
        relations = relations + [
            Relation("coefficient-products", num,
                     note="sum of pairwise products of the diagonal "
                          "coefficients against the scalar curvature"),
        ]
        return StructureContext("delta4", case, table, parse_table,
                                definitions, derivation, relations, asm)

    if case == "B":
        table = VariableTable(["H", "h1", "l3", "rho"])
        parse_table = table.extend(["l1", "l2", "l4", "l5", "w33", "w55"])

        def P(text: str) -> Poly:
            return parse_poly(text, table)

        asm = AssumptionSet()
        asm.add(P("H"), "mean curvature nonzero on the working set")
        asm.add(P("h1"), "gradient of H nonzero on the working set")
        asm.add(P("3*l3 - 5*H"), "third and fourth curvatures distinct")
        asm.add(P("2*l3 - 5*H"), "third curvature differs from the "
                                 "complementary eigenvalue")
        asm.add(P("4*l3 - 5*H"), "fourth curvature differs from the "
                                 "complementary eigenvalue")
        asm.add(P("2*l3 + 5*H"), "third curvature differs from the gradient "
                                 "eigenvalue")
        asm.add(P("4*l3 - 15*H"), "fourth curvature differs from the "
                                  "gradient eigenvalue")
        asm.add(P("12*l3 - 20*H"), "denominator of the curvature rate")
        asm.add(P("6*l3 - 10*H"), "denominator of the coefficient closed form")
        definitions = [
            ("l1", _rf(table, "-5*H", "2", asm), "gradient eigenvalue"),
            ("l5", _rf(table, "5*H", "2", asm), "complementary eigenvalue"),
            ("l2", _rf(table, "l3", "1", asm), "collapsed curvature pair"),
            ("l4", _rf(table, "5*H - 2*l3", "1", asm),
             "trace identity for the fourth curvature"),
            ("w55", _rf(table, "h1", "2*H", asm),
             "diagonal coefficient of the complementary direction"),
            ("w33", _rf(table, "20*l3*h1 - 25*H*h1",
                        "12*l3^2 + 10*H*l3 - 50*H^2", asm),
             "closed form of the diagonal coefficient"),
        ]
        derivation = {
            "H": _rf(table, "h1", "1", asm),
            "h1": _rf(table, "3*h1^2 - 25*H^4", "2*H", asm),
            "rho": _rf(table, "0", "1", asm),
            "l3": _rf(table, "20*l3*h1 - 25*H*h1", "12*l3 - 20*H", asm),
        }
        relations = [
            Relation("scalar-curvature",
                     P("12*l3^2 - 40*H*l3 + 25*H^2 + 2*rho"),
                     solve_var="rho", solve_power=1,
                     note="scalar curvature after the curvature pair "
                          "collapses"),
        ]
        return StructureContext("delta4", case, table, parse_table,
                                definitions, derivation, relations, asm)

    if case == "C":
        table = VariableTable(["H", "rho"])
        parse_table = table.extend(["l1", "l2", "l3", "l4", "l5"])

        def P(text: str) -> Poly:
            return parse_poly(text, table)

        asm = AssumptionSet()
        definitions = [
            ("l1", _rf(table, "-5*H", "2", asm), "gradient eigenvalue"),
            ("l5", _rf(table, "5*H", "2", asm), "complementary eigenvalue"),
            ("l2", _rf(table, "5*H", "3", asm), "collapsed curvature triple"),
            ("l3", _rf(table, "5*H", "3", asm), "collapsed curvature triple"),
            ("l4", _rf(table, "5*H", "3", asm), "collapsed curvature triple"),
        ]
        derivation = {"H": _rf(table, "0", "1", asm),
                      "rho": _rf(table, "0", "1", asm)}
        return StructureContext("delta4", case, table, parse_table,
                                definitions, derivation, [], asm)

    if case == "lemmaDiag":
        table = VariableTable(["H", "h1", "rho", "l3", "l4", "w33", "w44"])
        parse_table = table.extend(["l1", "l2", "l5"])

        def P(text: str) -> Poly:
            return parse_poly(text, table)

        asm = AssumptionSet()
        asm.add(P("H"), "mean curvature nonzero on the working set")
        asm.add(P("h1"), "gradient of H nonzero on the working set")
        _delta4_distinctness(P, asm, ["l2-l3", "l2-l4", "l3-l4", "l2-l5",
                                      "l3-l5", "l4-l5", "l2-l1", "l3-l1",
                                      "l4-l1"])
        definitions = [
            ("l1", _rf(table, "-5*H", "2", asm), "gradient eigenvalue"),
            ("l5", _rf(table, "5*H", "2", asm), "complementary eigenvalue"),
            ("l2", _rf(table, "5*H - l3 - l4", "1", asm),
             "trace identity for the second curvature"),
        ]
        derivation = {
            "H": _rf(table, "h1", "1", asm),
            "h1": _rf(table, "3*h1^2 - 25*H^4", "2*H", asm),
            "rho": _rf(table, "0", "1", asm),
            "l3": _rf(table, "2*l3*w33 + 5*H*w33", "2", asm),
            "l4": _rf(table, "2*l4*w44 + 5*H*w44", "2", asm),
            "w33": _rf(table, "2*w33^2 - 5*H*l3", "2", asm),
            "w44": _rf(table, "2*w44^2 - 5*H*l4", "2", asm),
        }
        relations = [
            Relation("scalar-combination",
                     P("4*l3^2 + 4*l4^2 + 4*l3*l4 - 20*H*l3 - 20*H*l4 "
                       "+ 25*H^2 + 2*rho"),
                     solve_var="rho", solve_power=1,
                     note="squared-curvature combination fixed by the "
                          "constant scalar curvature"),
        ]
        return StructureContext("delta4", case, table, parse_table,
                                definitions, derivation, relations, asm)

    if case == "lemmaOffdiag":
        table = VariableTable(["H", "h1", "l3", "k"])
        parse_table = table.extend(["l1", "l5", "w33", "w55"])

        def P(text: str) -> Poly:
            return parse_poly(text, table)

        asm = AssumptionSet()
        asm.add(P("H"), "mean curvature nonzero on the working set")
        asm.add(P("h1"), "gradient of H nonzero on the working set")
        asm.add(P("2*l3 - 5*H"), "third curvature differs from the "
                                 "complementary eigenvalue")
        definitions = [
            ("l1", _rf(table, "-5*H", "2", asm), "gradient eigenvalue"),
            ("l5", _rf(table, "5*H", "2", asm), "complementary eigenvalue"),
            ("w55", _rf(table, "h1", "2*H", asm),
             "diagonal coefficient of the complementary direction"),
            ("w33", _rf(table, "2*k*H*l3 - 5*k*H^2 + h1", "2*H", asm),
             "diagonal coefficient through the constant ratio"),
        ]
        derivation = {
            "H": _rf(table, "h1", "1", asm),
            "h1": _rf(table, "3*h1^2 - 25*H^4", "2*H", asm),
            "k": _rf(table, "0", "1", asm),
            "l3": _rf(table,
                      "4*k*H*l3^2 - 25*k*H^3 + 2*l3*h1 + 5*H*h1", "4*H", asm),
        }
        return StructureContext("delta4", case, table, parse_table,
                                definitions, derivation, [], asm)

    if case == "lemmaL32":
        table = VariableTable(["H", "h1", "l2", "l3", "l4",
                               "w22", "w33", "w44"])
        parse_table = table.extend(["l1", "l5"])

        def P(text: str) -> Poly:
            return parse_poly(text, table)

        asm = AssumptionSet()
        asm.add(P("H"), "mean curvature nonzero on the working set")
        asm.add(P("h1"), "gradient of H nonzero on the working set")
        asm.add(P("l2 - l3"), "second and third curvatures distinct")
        asm.add(P("l2 - l4"), "second and fourth curvatures distinct")
        asm.add(P("l3 - l4"), "third and fourth curvatures distinct")
        definitions = [
            ("l1", _rf(table, "-5*H", "2", asm), "gradient eigenvalue"),
            ("l5", _rf(table, "5*H", "2", asm), "complementary eigenvalue"),
        ]
        derivation = {
            "H": _rf(table, "h1", "1", asm),
            "h1": _rf(table, "3*h1^2 - 25*H^4", "2*H", asm),
            "l2": _rf(table, "2*l2*w22 + 5*H*w22", "2", asm),
            "l3": _rf(table, "2*l3*w33 + 5*H*w33", "2", asm),
            "l4": _rf(table, "2*l4*w44 + 5*H*w44", "2", asm),
            "w22": _rf(table, "2*w22^2 - 5*H*l2", "2", asm),
            "w33": _rf(table, "2*w33^2 - 5*H*l3", "2", asm),
            "w44": _rf(table, "2*w44^2 - 5*H*l4", "2", asm),
        }
        return StructureContext("delta4", case, table, parse_table,
                                definitions, derivation, [], asm)

    raise UnknownScenario(f"delta4 has no case {case!r}")


def build_context(scenario: str, case: str) -> StructureContext:
    """Build the structure context for a scenario/case combination."""
    if scenario == "delta2":
        return _build_delta2(case)
    if scenario == "delta3":
        return _build_delta3(case)
    if scenario == "delta4":
        return _build_delta4(case)
    raise UnknownScenario(f"unknown scenario {scenario!r}")
