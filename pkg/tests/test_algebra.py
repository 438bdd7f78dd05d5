"""Kernel arithmetic: worked examples and randomized laws."""

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from idealcmc.algebra import (
    AssumptionSet,
    DivisionByZeroPolynomial,
    MissingAssignment,
    Poly,
    RatFunc,
    TableMismatch,
    UnknownVariable,
    VariableTable,
    ZeroPolynomial,
    rf_substitute,
)
from idealcmc.textio import parse_poly, serialize_poly

T = VariableTable(["H", "h1", "n", "l2", "l3"])


def P(text: str) -> Poly:
    return parse_poly(text, T)


class TestPolyArithmetic:
    def test_add_inverse(self):
        assert (P("H + h1") + P("-H")) == P("h1")

    def test_add_identity_random(self):
        rng = random.Random(11)
        from idealcmc.selftest import random_poly

        for _ in range(25):
            p = random_poly(rng, T)
            assert Poly.zero(T) + p == p

    def test_add_rational_coefficients(self):
        assert P("2/3*H^2") + P("1/3*H^2") == P("H^2")

    def test_mul_difference_of_squares(self):
        assert P("H - l3") * P("H + l3") == P("H^2 - l3^2")

    def test_mul_identity(self):
        rng = random.Random(12)
        from idealcmc.selftest import random_poly

        one = Poly.constant(T, 1)
        for _ in range(25):
            p = random_poly(rng, T)
            assert p * one == p

    def test_mul_coefficient_denominator(self):
        # expanded product behind one of the recorded denominators
        assert P("2*l3 + 5*H") * P("6*l3 - 10*H") == \
            P("12*l3^2 + 10*H*l3 - 50*H^2")

    def test_table_mismatch(self):
        other = VariableTable(["x"])
        with pytest.raises(TableMismatch):
            P("H") + parse_poly("x", other)

    def test_pow(self):
        assert P("H + l3") ** 2 == P("H^2 + 2*H*l3 + l3^2")


class TestCalculus:
    def test_partial_simple(self):
        assert P("H^2*l3").partial_derivative("H") == P("2*H*l3")

    def test_partial_constant(self):
        assert P("7").partial_derivative("l3").is_zero()

    def test_partial_power_rule(self):
        p = P("h1^4 + 40*H^4*h1^2")
        assert p.partial_derivative("h1") == P("4*h1^3 + 80*H^4*h1")

    def test_unknown_variable(self):
        with pytest.raises(UnknownVariable):
            P("H").partial_derivative("zz")


class TestDegreesAndLeading:
    def test_degree_quartic(self):
        p = P("h1^4 + 2*H^2*l3^2*h1^2 - 8*H^3*l3*h1^2 + 40*H^4*h1^2 "
              "+ 36*H^6*l3^2 - 144*H^7*l3 + 432*H^8")
        assert p.degree_in("h1") == 4

    def test_degree_zero_poly(self):
        assert Poly.zero(T).degree_in("H") == float("-inf")

    def test_degree_simple(self):
        assert P("H^3*l3 + l3^2").degree_in("H") == 3

    def test_leading_coeff_monic(self):
        assert P("h1^4 + 2*H^2*l3^2*h1^2").leading_coeff_in("h1") == P("1")

    def test_leading_coeff_in_H(self):
        assert P("3*H^2 + 2*H").leading_coeff_in("H") == P("3")

    def test_leading_coeff_zero_poly(self):
        with pytest.raises(ZeroPolynomial):
            Poly.zero(T).leading_coeff_in("H")


class TestEvaluate:
    def test_zero_at_zero(self):
        p = P("H^2*n^2 - 2*H^2*n + H^2")
        assert p.evaluate({"H": 0, "n": 7}) == 0

    def test_symmetric_zero(self):
        assert P("H^2 - l3^2").evaluate({"H": 3, "l3": 3}) == 0

    def test_quartic_sample_point(self):
        p = P("h1^4 + 2*H^2*l3^2*h1^2 - 8*H^3*l3*h1^2 + 40*H^4*h1^2 "
              "+ 36*H^6*l3^2 - 144*H^7*l3 + 432*H^8")
        assert p.evaluate({"H": 1, "l3": 0, "h1": 1}) == 473

    def test_missing_assignment(self):
        with pytest.raises(MissingAssignment):
            P("H*l3").evaluate({"H": 1})


class TestContentPrimitive:
    def test_integer_content(self):
        c, prim = P("6*H^2 + 9*H*l3").content_primitive()
        assert c == 3 and prim == P("2*H^2 + 3*H*l3")

    def test_fraction_content(self):
        c, prim = P("1/2*H").content_primitive()
        assert c == Fraction(1, 2) and prim == P("H")

    def test_sign_convention(self):
        c, prim = P("-4*H^2 - 8").content_primitive()
        assert c == -4 and prim == P("H^2 + 2")

    def test_roundtrip_random(self):
        rng = random.Random(13)
        from idealcmc.selftest import random_poly

        for _ in range(50):
            p = random_poly(rng, T)
            if p.is_zero():
                continue
            c, prim = p.content_primitive()
            assert prim.scale(c) == p


class TestFactorOut:
    def test_full_strip(self):
        p = P("H^3") * P("2*H - l3")
        reduced, exps = p.factor_out([P("H"), P("2*H - l3")])
        assert reduced == P("1") and exps == [3, 1]

    def test_nothing_divides(self):
        p = P("H + l3")
        reduced, exps = p.factor_out([P("h1"), P("2*H - l3")])
        assert reduced == p and exps == [0, 0]

    def test_dimension_factors(self):
        p = P("4*H^2") * P("n - 1") * P("n - 1") * P("n") * P("n + 1")
        reduced, exps = p.factor_out([P("H"), P("n - 1"), P("n + 1"), P("n")])
        assert reduced == P("4") and exps == [2, 2, 1, 1]

    def test_zero_rejected(self):
        with pytest.raises(ZeroPolynomial):
            Poly.zero(T).factor_out([P("H")])


class TestSquareRoot:
    def test_perfect_square(self):
        p = P("H^2 + 2*H*l3 + l3^2")
        assert p.square_root() == P("H + l3")

    def test_non_square(self):
        assert P("H^2 + l3").square_root() is None

    def test_scaled_square(self):
        p = (P("2*H - l3") ** 2).scale(Fraction(9, 4))
        r = p.square_root()
        assert r is not None and r * r == p


class TestRatFunc:
    def test_self_division(self):
        rng = random.Random(14)
        from idealcmc.selftest import random_nonzero

        one = RatFunc.constant(T, 1)
        for _ in range(20):
            a = RatFunc(random_nonzero(rng, T), random_nonzero(rng, T))
            assert a / a == one

    def test_additive_inverse(self):
        a = RatFunc(P("H"), P("h1"))
        assert (a + (-a)).is_zero()

    def test_halved_product(self):
        r = RatFunc(P("1"), P("2*H")) * RatFunc.from_poly(P("3*h1^2 - 16*H^4"))
        assert r.num == P("3*h1^2 - 16*H^4") and r.den == P("2*H")

    def test_zero_denominator(self):
        with pytest.raises(DivisionByZeroPolynomial):
            RatFunc(P("H"), Poly.zero(T))

    def test_normalization_content(self):
        r = RatFunc(P("1/4*H^2"), P("1"))
        assert r.num == P("H^2") and r.den == P("4")

    def test_assumption_cancellation(self):
        asm = AssumptionSet()
        asm.add(P("n - 1"), "dimension")
        r = RatFunc(P("n^2*H - n*H"), P("2*n - 2"), asm)
        assert r.num == P("n*H") and r.den == P("2")


class TestSubstitute:
    def test_curvature_sum(self):
        img = {"l2": RatFunc.from_poly(P("4*H - l3"))}
        r = rf_substitute(P("l2 + l3"), img)
        assert r.num == P("4*H") and r.den == P("1")

    def test_identity_table(self):
        p = P("H^2 + l3")
        r = rf_substitute(p, {})
        assert r.num == p and r.den == P("1")

    def test_square_of_quotient(self):
        img = {"l2": RatFunc(P("h1"), P("2*H"))}
        r = rf_substitute(P("l2^2"), img)
        assert r.num == P("h1^2") and r.den == P("4*H^2")

    def test_clear_denominators(self):
        r = RatFunc(P("3*h1^2 - 16*H^4"), P("2*H"))
        num, den = r.clear_denominators()
        assert num == P("3*h1^2 - 16*H^4") and den == P("2*H")
        z = RatFunc(Poly.zero(T), P("H"))
        num, den = z.clear_denominators()
        assert num.is_zero() and den == P("1")


# randomized algebraic laws (hypothesis-driven on top of the seeded suites)

small_coeff = st.integers(min_value=-9, max_value=9)


@st.composite
def polys(draw, table=T, max_terms=4, max_degree=4):
    terms = {}
    for _ in range(draw(st.integers(0, max_terms))):
        mono = [0] * len(table)
        for _ in range(draw(st.integers(0, max_degree))):
            mono[draw(st.integers(0, len(table) - 1))] += 1
        c = draw(small_coeff)
        if c:
            key = tuple(mono)
            terms[key] = terms.get(key, Fraction(0)) + c
    return Poly(table, terms)


@settings(max_examples=60, deadline=None)
@given(polys(), polys(), polys())
def test_ring_laws_hypothesis(p, q, r):
    assert (p + q) + r == p + (q + r)
    assert p * q == q * p
    assert p * (q + r) == p * q + p * r


@settings(max_examples=60, deadline=None)
@given(polys(), polys())
def test_derivative_leibniz_hypothesis(p, q):
    for v in ("H", "l3"):
        lhs = (p * q).partial_derivative(v)
        rhs = p.partial_derivative(v) * q + p * q.partial_derivative(v)
        assert lhs == rhs


@settings(max_examples=60, deadline=None)
@given(polys(), polys())
def test_eval_homomorphism_hypothesis(p, q):
    point = {v: Fraction(i - 2, 3) for i, v in enumerate(T.names)}
    assert (p + q).evaluate(point) == p.evaluate(point) + q.evaluate(point)
    assert (p * q).evaluate(point) == p.evaluate(point) * q.evaluate(point)
