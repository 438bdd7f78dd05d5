"""Exact sparse multivariate polynomial and rational-function arithmetic.

Coefficients are arbitrary-precision rationals (``fractions.Fraction``);
there is no floating point anywhere.  A polynomial is a map from exponent
vectors to nonzero coefficients over a fixed, ordered variable table.  The
canonical term order is graded lexicographic with respect to the table's
declaration order, which makes equality, serialization and digests
deterministic.

All values are immutable after construction and all operations are pure.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Optional, Sequence

Rational = Fraction

NEG_INFINITY = float("-inf")  # degree of the zero polynomial


class AlgebraError(Exception):
    """Base class for algebra errors."""


class TableMismatch(AlgebraError):
    """Operands do not share a variable table."""


class UnknownVariable(AlgebraError):
    """A variable name is not present in the governing table."""


class ZeroPolynomial(AlgebraError):
    """The operation is undefined for the zero polynomial."""


class MissingAssignment(AlgebraError):
    """An evaluation point does not cover every occurring variable."""


class DivisionByZeroPolynomial(AlgebraError):
    """A denominator is (or composes to) the zero polynomial."""


class NonExactDivision(AlgebraError):
    """An internal division that must be exact left a remainder."""


class CyclicDefinition(AlgebraError):
    """Definition rewriting does not reach a fixed point."""


def _as_fraction(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    raise TypeError(f"exact rational expected, got {type(c).__name__}")


class VariableTable:
    """Ordered, immutable sequence of variable names.

    The order is fixed at creation and induces the canonical monomial
    order.  ``extend`` returns a fresh table; the original is never
    mutated.
    """

    __slots__ = ("names", "index")

    def __init__(self, names: Sequence[str]):
        names = tuple(names)
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate variable names in {names!r}")
        for n in names:
            if not n or not n[0].isalpha() or not n.isalnum():
                raise ValueError(f"invalid variable name {n!r}")
        self.names = names
        self.index = {n: i for i, n in enumerate(names)}

    def __len__(self) -> int:
        return len(self.names)

    def __iter__(self) -> Iterator[str]:
        return iter(self.names)

    def __contains__(self, name: str) -> bool:
        return name in self.index

    def __eq__(self, other) -> bool:
        return isinstance(other, VariableTable) and self.names == other.names

    def __hash__(self) -> int:
        return hash(self.names)

    def __repr__(self) -> str:
        return f"VariableTable({', '.join(self.names)})"

    def position(self, name: str) -> int:
        try:
            return self.index[name]
        except KeyError:
            raise UnknownVariable(f"{name!r} not in {self.names}") from None

    def extend(self, extra: Sequence[str]) -> "VariableTable":
        return VariableTable(self.names + tuple(n for n in extra if n not in self.index))


def _grlex_key(table_len: int):
    def key(mono: tuple) -> tuple:
        return (sum(mono), mono)

    return key


class Poly:
    """Sparse exact-rational polynomial over a :class:`VariableTable`.

    Stored as ``{exponent tuple: nonzero Fraction}``.  Two polynomials are
    equal iff their tables and term maps are identical, which is the
    canonical form.
    """

    __slots__ = ("table", "terms")

    def __init__(self, table: VariableTable, terms: Mapping[tuple, Fraction]):
        self.table = table
        clean = {}
        n = len(table)
        for mono, c in terms.items():
            c = _as_fraction(c)
            if c == 0:
                continue
            if len(mono) != n or any(e < 0 or not isinstance(e, int) for e in mono):
                raise ValueError(f"bad exponent vector {mono!r} for table of size {n}")
            clean[mono] = c
        self.terms = clean

    # -- constructors ---------------------------------------------------

    @staticmethod
    def zero(table: VariableTable) -> "Poly":
        return Poly(table, {})

    @staticmethod
    def constant(table: VariableTable, c) -> "Poly":
        c = _as_fraction(c)
        if c == 0:
            return Poly.zero(table)
        return Poly(table, {(0,) * len(table): c})

    @staticmethod
    def variable(table: VariableTable, name: str) -> "Poly":
        i = table.position(name)
        mono = tuple(1 if j == i else 0 for j in range(len(table)))
        return Poly(table, {mono: Fraction(1)})

    def retabled(self, table: VariableTable) -> "Poly":
        """Re-express over another table containing all occurring variables."""
        if table == self.table:
            return self
        pos = []
        for i, name in enumerate(self.table.names):
            if name in table:
                pos.append(table.position(name))
            else:
                pos.append(-1)
        terms = {}
        n = len(table)
        for mono, c in self.terms.items():
            new = [0] * n
            for i, e in enumerate(mono):
                if e:
                    if pos[i] < 0:
                        raise UnknownVariable(
                            f"{self.table.names[i]!r} not in target table")
                    new[pos[i]] = e
            terms[tuple(new)] = terms.get(tuple(new), Fraction(0)) + c
        return Poly(table, terms)

    # -- predicates and views -------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(sum(m) == 0 for m in self.terms)

    def constant_value(self) -> Fraction:
        if self.is_zero():
            return Fraction(0)
        if not self.is_constant():
            raise ValueError("not a constant polynomial")
        return next(iter(self.terms.values()))

    def total_degree(self):
        if not self.terms:
            return NEG_INFINITY
        return max(sum(m) for m in self.terms)

    def is_homogeneous(self) -> bool:
        degs = {sum(m) for m in self.terms}
        return len(degs) <= 1

    def variables_present(self) -> tuple:
        seen = set()
        for m in self.terms:
            for i, e in enumerate(m):
                if e:
                    seen.add(i)
        return tuple(self.table.names[i] for i in sorted(seen))

    def term_count(self) -> int:
        return len(self.terms)

    def sorted_terms(self):
        """Terms in descending canonical (graded-lex) order."""
        key = _grlex_key(len(self.table))
        return sorted(self.terms.items(), key=lambda kv: key(kv[0]), reverse=True)

    def leading_term(self):
        if not self.terms:
            raise ZeroPolynomial("zero polynomial has no leading term")
        key = _grlex_key(len(self.table))
        mono = max(self.terms, key=key)
        return mono, self.terms[mono]

    # -- ring operations -------------------------------------------------

    def _check(self, other: "Poly") -> None:
        if self.table != other.table:
            raise TableMismatch(f"{self.table!r} vs {other.table!r}")

    def __add__(self, other: "Poly") -> "Poly":
        self._check(other)
        terms = dict(self.terms)
        for m, c in other.terms.items():
            s = terms.get(m)
            if s is None:
                terms[m] = c
            else:
                s = s + c
                if s:
                    terms[m] = s
                else:
                    del terms[m]
        out = Poly.__new__(Poly)
        out.table = self.table
        out.terms = terms
        return out

    def __neg__(self) -> "Poly":
        out = Poly.__new__(Poly)
        out.table = self.table
        out.terms = {m: -c for m, c in self.terms.items()}
        return out

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other: "Poly") -> "Poly":
        self._check(other)
        a, b = self.terms, other.terms
        if len(a) > len(b):
            a, b = b, a
        terms: dict = {}
        for m1, c1 in a.items():
            for m2, c2 in b.items():
                m = tuple(e1 + e2 for e1, e2 in zip(m1, m2))
                s = terms.get(m)
                if s is None:
                    terms[m] = c1 * c2
                else:
                    s = s + c1 * c2
                    if s:
                        terms[m] = s
                    else:
                        del terms[m]
        out = Poly.__new__(Poly)
        out.table = self.table
        out.terms = terms
        return out

    def scale(self, c) -> "Poly":
        c = _as_fraction(c)
        if c == 0:
            return Poly.zero(self.table)
        out = Poly.__new__(Poly)
        out.table = self.table
        out.terms = {m: k * c for m, k in self.terms.items()}
        return out

    def __pow__(self, n: int) -> "Poly":
        if n < 0:
            raise ValueError("negative power of a polynomial")
        result = Poly.constant(self.table, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Poly)
            and self.table == other.table
            and self.terms == other.terms
        )

    def __hash__(self) -> int:
        return hash((self.table, frozenset(self.terms.items())))

    def __repr__(self) -> str:
        from . import textio

        return f"Poly({textio.serialize_poly(self)!r})"

    # -- calculus and structure -------------------------------------------

    def partial_derivative(self, name: str) -> "Poly":
        i = self.table.position(name)
        terms = {}
        for m, c in self.terms.items():
            e = m[i]
            if e:
                new = m[:i] + (e - 1,) + m[i + 1:]
                terms[new] = terms.get(new, Fraction(0)) + c * e
        return Poly(self.table, terms)

    def degree_in(self, name: str):
        i = self.table.position(name)
        if not self.terms:
            return NEG_INFINITY
        return max(m[i] for m in self.terms)

    def leading_coeff_in(self, name: str) -> "Poly":
        if self.is_zero():
            raise ZeroPolynomial("leading coefficient of the zero polynomial")
        i = self.table.position(name)
        d = max(m[i] for m in self.terms)
        terms = {}
        for m, c in self.terms.items():
            if m[i] == d:
                terms[m[:i] + (0,) + m[i + 1:]] = c
        return Poly(self.table, terms)

    def coeff_in(self, name: str, power: int) -> "Poly":
        """Coefficient of ``name**power`` as a polynomial in the other variables."""
        i = self.table.position(name)
        terms = {}
        for m, c in self.terms.items():
            if m[i] == power:
                terms[m[:i] + (0,) + m[i + 1:]] = c
        return Poly(self.table, terms)

    def evaluate(self, assignment: Mapping[str, Fraction]) -> Fraction:
        pos = {}
        for name, value in assignment.items():
            pos[self.table.position(name)] = _as_fraction(value)
        total = Fraction(0)
        for m, c in self.terms.items():
            v = c
            for i, e in enumerate(m):
                if e:
                    if i not in pos:
                        raise MissingAssignment(
                            f"no value for {self.table.names[i]!r}")
                    v *= pos[i] ** e
            total += v
        return total

    def substitute_poly(self, name: str, value: "Poly") -> "Poly":
        """Substitute a polynomial for one variable (exact, polynomial result)."""
        self._check(value)
        i = self.table.position(name)
        # group by exponent of the substituted variable
        grouped: dict = {}
        for m, c in self.terms.items():
            e = m[i]
            rest = m[:i] + (0,) + m[i + 1:]
            grouped.setdefault(e, {})[rest] = c
        result = Poly.zero(self.table)
        powers = {0: Poly.constant(self.table, 1)}
        maxe = max(grouped) if grouped else 0
        for e in range(1, maxe + 1):
            powers[e] = powers[e - 1] * value
        for e, terms in grouped.items():
            result = result + Poly(self.table, terms) * powers[e]
        return result

    def content_primitive(self):
        """Split into ``(content, primitive)`` with ``content * primitive == self``.

        The primitive part has coprime integer coefficients and a positive
        leading coefficient in the canonical order; the content of the zero
        polynomial is 0.
        """
        if self.is_zero():
            return Fraction(0), self
        from math import gcd

        num_gcd = 0
        den_lcm = 1
        for c in self.terms.values():
            num_gcd = gcd(num_gcd, abs(c.numerator))
            den_lcm = den_lcm // gcd(den_lcm, c.denominator) * c.denominator
        content = Fraction(num_gcd, den_lcm)
        _, lead = self.leading_term()
        if lead < 0:
            content = -content
        return content, self.scale(1 / content)

    def divide_exact(self, divisor: "Poly") -> Optional["Poly"]:
        """Return ``self / divisor`` if the division is exact, else ``None``."""
        self._check(divisor)
        if divisor.is_zero():
            raise DivisionByZeroPolynomial("division by the zero polynomial")
        if self.is_zero():
            return self
        key = _grlex_key(len(self.table))
        # fast rejection: in any exact division both the leading and the
        # trailing monomial of the divisor divide the corresponding
        # extremes of the dividend (the canonical order is multiplicative)
        dm = max(divisor.terms, key=key)
        pm = max(self.terms, key=key)
        if any(a < b for a, b in zip(pm, dm)):
            return None
        dmin = min(divisor.terms, key=key)
        pmin = min(self.terms, key=key)
        if any(a < b for a, b in zip(pmin, dmin)):
            return None
        dm, dc = divisor.leading_term()
        rem = dict(self.terms)
        qterms: dict = {}
        while rem:
            m = max(rem, key=key)
            c = rem[m]
            qm = tuple(a - b for a, b in zip(m, dm))
            if any(e < 0 for e in qm):
                return None
            qc = c / dc
            qterms[qm] = qterms.get(qm, Fraction(0)) + qc
            for m2, c2 in divisor.terms.items():
                mm = tuple(a + b for a, b in zip(qm, m2))
                s = rem.get(mm, Fraction(0)) - qc * c2
                if s:
                    rem[mm] = s
                else:
                    rem.pop(mm, None)
        return Poly(self.table, qterms)

    def factor_out(self, factors: Sequence["Poly"], max_multiplicity: int = 64):
        """Strip exact powers of the given factors.

        Returns ``(reduced, exponents)`` with
        ``reduced * prod(f**e) == self`` and each exponent maximal up to
        ``max_multiplicity``.  Every trial division is exact or rejected.
        """
        if max_multiplicity < 1:
            raise ValueError("max_multiplicity must be >= 1")
        if self.is_zero():
            raise ZeroPolynomial("cannot strip factors from the zero polynomial")
        reduced = self
        exponents = []
        for f in factors:
            if f.is_zero():
                raise ZeroPolynomial("zero polynomial cannot be a factor")
            e = 0
            if not f.is_constant():
                while e < max_multiplicity:
                    q = reduced.divide_exact(f)
                    if q is None:
                        break
                    reduced = q
                    e += 1
            exponents.append(e)
        return reduced, exponents

    def square_root(self) -> Optional["Poly"]:
        """Exact polynomial square root, or ``None`` if self is not a square."""
        if self.is_zero():
            return self
        mono, c = self.leading_term()
        if any(e % 2 for e in mono) or c < 0:
            return None
        num = _isqrt_exact(c.numerator)
        den = _isqrt_exact(c.denominator)
        if num is None or den is None:
            return None
        root_lead = Poly(self.table, {tuple(e // 2 for e in mono): Fraction(num, den)})
        root = root_lead
        # Newton-style completion: match remaining terms against 2*lead.
        remainder = self - root * root
        two_lead = root_lead.scale(2)
        key = _grlex_key(len(self.table))
        guard = len(self.terms) * (self.total_degree() + 1) + 8
        while not remainder.is_zero():
            guard -= 1
            if guard < 0:
                return None
            m = max(remainder.terms, key=key)
            cm = remainder.terms[m]
            lm, lc = two_lead.leading_term()
            qm = tuple(a - b for a, b in zip(m, lm))
            if any(e < 0 for e in qm):
                return None
            t = Poly(self.table, {qm: cm / lc})
            root = root + t
            remainder = self - root * root
        return root


def _isqrt_exact(n: int) -> Optional[int]:
    from math import isqrt

    r = isqrt(n)
    return r if r * r == n else None


# -- spec-named operation aliases ----------------------------------------


def poly_add(p: Poly, q: Poly) -> Poly:
    return p + q


def poly_mul(p: Poly, q: Poly) -> Poly:
    return p * q


def poly_partial_derivative(p: Poly, v: str) -> Poly:
    return p.partial_derivative(v)


def poly_degree_in(p: Poly, v: str):
    return p.degree_in(v)


def poly_leading_coeff_in(p: Poly, v: str) -> Poly:
    return p.leading_coeff_in(v)


def poly_evaluate(p: Poly, assignment: Mapping[str, Fraction]) -> Fraction:
    return p.evaluate(assignment)


def poly_content_primitive(p: Poly):
    return p.content_primitive()


def poly_factor_out(p: Poly, factors: Sequence[Poly], max_multiplicity: int = 64):
    return p.factor_out(factors, max_multiplicity)


class AssumptionSet:
    """Ordered set of polynomials asserted nonvanishing on the working set.

    Each entry keeps a human-readable provenance note.  Membership is
    decided on content-normalized primitive parts, so a nonzero rational
    multiple of a member is recognized as the same assumption.
    """

    __slots__ = ("entries",)

    def __init__(self, entries: Iterable = ()):  # entries: (Poly, str)
        self.entries = []
        for poly, note in entries:
            self.add(poly, note)

    def add(self, poly: Poly, note: str) -> None:
        # deliberate duplicates (same primitive part, different provenance)
        # are kept: the ledger records every reason a quantity is nonzero
        if poly.is_zero():
            raise ZeroPolynomial("the zero polynomial cannot be assumed nonzero")
        self.entries.append((poly, note))

    def find(self, poly: Poly):
        if poly.is_zero():
            return None
        _, prim = poly.content_primitive()
        for i, (q, _) in enumerate(self.entries):
            if q.table == prim.table and q.content_primitive()[1] == prim:
                return i
        return None

    def __contains__(self, poly: Poly) -> bool:
        return self.find(poly) is not None

    def __iter__(self):
        return iter(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def polys(self):
        return [p for p, _ in self.entries]

    def merged(self, other: "AssumptionSet") -> "AssumptionSet":
        out = AssumptionSet(self.entries)
        for p, note in other.entries:
            out.add(p, note)
        return out

    def copy(self) -> "AssumptionSet":
        return AssumptionSet(self.entries)


class RatFunc:
    """Quotient of two polynomials with a tracked assumption set.

    Normal form: numerator and denominator have integer coefficients with
    no common integer content, the denominator's content is positive, and
    no tracked assumption factor divides both exactly.
    """

    __slots__ = ("num", "den", "assumptions")

    def __init__(self, num: Poly, den: Poly, assumptions: Optional[AssumptionSet] = None):
        if den.is_zero():
            raise DivisionByZeroPolynomial("zero denominator")
        num._check(den)
        self.assumptions = assumptions if assumptions is not None else AssumptionSet()
        if num.is_zero():
            self.num = num
            self.den = Poly.constant(num.table, 1)
            return
        # cancel tracked assumption factors; try the (small) denominator
        # first so factors absent from it are rejected cheaply
        if not den.is_constant():
            for a in self.assumptions.polys():
                if a.is_constant() or a.table != num.table:
                    continue
                while True:
                    qd = den.divide_exact(a)
                    if qd is None:
                        break
                    qn = num.divide_exact(a)
                    if qn is None:
                        break
                    num, den = qn, qd
                if den.is_constant():
                    break
        # rational content normalization: integer coefficients, positive
        # denominator content, coprime contents
        cn, pn = num.content_primitive()
        cd, pd = den.content_primitive()
        ratio = cn / cd  # num/den == ratio * pn/pd
        self.num = pn.scale(Fraction(ratio.numerator))
        self.den = pd.scale(Fraction(ratio.denominator))

    @staticmethod
    def from_poly(p: Poly, assumptions: Optional[AssumptionSet] = None) -> "RatFunc":
        return RatFunc(p, Poly.constant(p.table, 1), assumptions)

    @staticmethod
    def constant(table: VariableTable, c, assumptions=None) -> "RatFunc":
        return RatFunc.from_poly(Poly.constant(table, c), assumptions)

    @property
    def table(self) -> VariableTable:
        return self.num.table

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def _merge(self, other: "RatFunc") -> AssumptionSet:
        return self.assumptions.merged(other.assumptions)

    def __add__(self, other: "RatFunc") -> "RatFunc":
        other = self._coerce(other)
        return RatFunc(
            self.num * other.den + other.num * self.den,
            self.den * other.den,
            self._merge(other),
        )

    def __neg__(self) -> "RatFunc":
        return RatFunc(-self.num, self.den, self.assumptions)

    def __sub__(self, other: "RatFunc") -> "RatFunc":
        return self + (-self._coerce(other))

    def __mul__(self, other: "RatFunc") -> "RatFunc":
        other = self._coerce(other)
        return RatFunc(self.num * other.num, self.den * other.den, self._merge(other))

    def __truediv__(self, other: "RatFunc") -> "RatFunc":
        other = self._coerce(other)
        if other.num.is_zero():
            raise DivisionByZeroPolynomial("division by the zero rational function")
        return RatFunc(self.num * other.den, self.den * other.num, self._merge(other))

    def _coerce(self, other) -> "RatFunc":
        if isinstance(other, RatFunc):
            return other
        if isinstance(other, Poly):
            return RatFunc.from_poly(other, self.assumptions)
        return RatFunc.constant(self.table, other, self.assumptions)

    def __eq__(self, other) -> bool:
        if not isinstance(other, RatFunc):
            return NotImplemented
        return (self.num * other.den) == (other.num * self.den)

    def __hash__(self):
        raise TypeError("RatFunc is not hashable")

    def __repr__(self) -> str:
        from . import textio

        return f"RatFunc({textio.serialize_ratfunc(self)!r})"

    def clear_denominators(self):
        """Return ``(numerator, denominator)`` of the normal form.

        The caller is responsible for recording the denominator as a
        nonvanishing assumption where the context requires it.
        """
        if self.num.is_zero():
            return self.num, Poly.constant(self.table, 1)
        return self.num, self.den


def rf_arith(mode: str, a: RatFunc, b: RatFunc) -> RatFunc:
    if mode == "add":
        return a + b
    if mode == "mul":
        return a * b
    if mode == "div":
        return a / b
    raise ValueError(f"unknown mode {mode!r}")


def rf_substitute(p: Poly, table: Mapping[str, RatFunc],
                  assumptions: Optional[AssumptionSet] = None) -> RatFunc:
    """Compose a polynomial with rational-function images of its variables.

    Unlisted variables substitute to themselves.  The composition is a ring
    homomorphism; denominators of the images are merged into the result's
    assumption tracking by normal RatFunc arithmetic.
    """
    base = AssumptionSet() if assumptions is None else assumptions.copy()
    images = {}
    for name, rf in table.items():
        p.table.position(name)  # raises UnknownVariable when absent
        images[name] = rf
        base = base.merged(rf.assumptions)
    result = RatFunc.constant(p.table, 0, base)
    # cache powers of each substituted image
    powers: dict = {}

    def image_power(i: int, name: str, e: int) -> RatFunc:
        key = (name, e)
        if key in powers:
            return powers[key]
        rf = images[name]
        acc = powers.get((name, 1))
        if acc is None:
            acc = rf
            powers[(name, 1)] = acc
        cur = powers.get((name, e - 1)) if e > 1 else None
        if e > 1:
            if cur is None:
                cur = image_power(i, name, e - 1)
            acc = cur * rf
            powers[key] = acc
        return acc

    one = Poly.constant(p.table, 1)
    for mono, c in p.sorted_terms():
        kept = list(mono)
        term_rf = None
        for i, e in enumerate(mono):
            name = p.table.names[i]
            if e and name in images:
                kept[i] = 0
                factor = image_power(i, name, e)
                term_rf = factor if term_rf is None else term_rf * factor
        kept_poly = Poly(p.table, {tuple(kept): c})
        part = RatFunc.from_poly(kept_poly, base)
        if term_rf is not None:
            part = part * term_rf
        result = result + part
    return result
