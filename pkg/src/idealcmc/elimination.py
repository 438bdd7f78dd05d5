"""Sylvester resultants, fraction-free determinants and elimination chains.

Resultants are computed by one of two strategies with identical results:

* ``direct`` — a subresultant polynomial remainder sequence over the
  coefficient ring (every division exact), equivalently the determinant
  of the Sylvester matrix;
* ``interpolated`` — for jointly homogeneous inputs with two parameter
  variables, the parameters are specialized at integer points, univariate
  integer resultants are taken per point, and the (homogeneous, exactly
  degree-bounded) result is recovered by Newton interpolation.

Both paths are exact over the rationals.  Where an eliminant is too large
to materialize, a modular certificate can still prove it nonzero: a
nonzero residue of the resultant modulo a prime (with leading
coefficients preserved) is a rigorous proof of nonvanishing.
"""

from __future__ import annotations

import time
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .algebra import (
    AssumptionSet,
    DivisionByZeroPolynomial,
    NonExactDivision,
    Poly,
    RatFunc,
    VariableTable,
    ZeroPolynomial,
)


class EliminationError(Exception):
    """Base class for elimination errors."""


class ZeroPolynomialInElimination(EliminationError):
    """A resultant operand is the zero polynomial."""


class BothConstant(EliminationError):
    """Both operands are constant in the eliminated variable."""


class SingularSystem(EliminationError):
    """A linear system's determinant is the zero polynomial."""


class DegenerateChain(EliminationError):
    """An elimination stage produced the zero polynomial."""


class BudgetExceeded(EliminationError):
    """The time budget ran out; carries the partial trace.

    ``pending`` holds the polynomials of the stage that could not be
    completed, so callers can continue by other means (for example a
    modular nonvanishing certificate).
    """

    def __init__(self, message: str, trace: "EliminationTrace",
                 pending: Optional[List["Poly"]] = None):
        super().__init__(message)
        self.trace = trace
        self.pending = pending


class Deadline:
    """Wall-clock budget; ``check`` raises nothing, callers poll ``expired``."""

    def __init__(self, seconds: Optional[float]):
        self.seconds = seconds
        self.start = time.monotonic()

    def expired(self) -> bool:
        return self.seconds is not None and (time.monotonic() - self.start) > self.seconds

    def remaining(self) -> Optional[float]:
        if self.seconds is None:
            return None
        return self.seconds - (time.monotonic() - self.start)


class PolyMatrix:
    """Row-major rectangular grid of polynomials over one table."""

    __slots__ = ("rows", "nrows", "ncols", "table")

    def __init__(self, rows: Sequence[Sequence[Poly]]):
        if not rows or not rows[0]:
            raise ValueError("matrix dimensions must be at least 1x1")
        self.nrows = len(rows)
        self.ncols = len(rows[0])
        self.table = rows[0][0].table
        for r in rows:
            if len(r) != self.ncols:
                raise ValueError("ragged matrix")
            for e in r:
                if e.table != self.table:
                    raise ValueError("matrix entries must share one table")
        self.rows = [list(r) for r in rows]

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def is_square(self) -> bool:
        return self.nrows == self.ncols


def sylvester_matrix(f: Poly, g: Poly, v: str) -> PolyMatrix:
    """Sylvester matrix of f and g with respect to v.

    The (m+n)x(m+n) layout has n rows of f-coefficients followed by m rows
    of g-coefficients, each shifted one column per row, all coefficients
    taken as polynomials in the remaining variables.
    """
    if f.is_zero() or g.is_zero():
        raise ZeroPolynomialInElimination("Sylvester matrix of a zero polynomial")
    m = int(f.degree_in(v))
    n = int(g.degree_in(v))
    if m + n < 1:
        raise BothConstant(f"both operands constant in {v!r}")
    table = f.table
    fc = [f.coeff_in(v, m - k) for k in range(m + 1)]
    gc = [g.coeff_in(v, n - k) for k in range(n + 1)]
    size = m + n
    zero = Poly.zero(table)
    rows = []
    for i in range(n):
        row = [zero] * size
        for k, c in enumerate(fc):
            row[i + k] = c
        rows.append(row)
    for i in range(m):
        row = [zero] * size
        for k, c in enumerate(gc):
            row[i + k] = c
        rows.append(row)
    return PolyMatrix(rows)


def bareiss_determinant(M: PolyMatrix) -> Poly:
    """Exact determinant by fraction-free (Bareiss) elimination.

    Every intermediate division is exact; a non-exact division signals an
    internal bug and aborts rather than rounding.
    """
    if not M.is_square():
        raise ValueError("determinant of a non-square matrix")
    n = M.nrows
    table = M.table
    a = [row[:] for row in M.rows]
    if n == 1:
        return a[0][0]
    sign = 1
    prev = Poly.constant(table, 1)
    for k in range(n - 1):
        if a[k][k].is_zero():
            pivot_row = None
            for i in range(k + 1, n):
                if not a[i][k].is_zero():
                    pivot_row = i
                    break
            if pivot_row is None:
                return Poly.zero(table)
            a[k], a[pivot_row] = a[pivot_row], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = a[k][k] * a[i][j] - a[i][k] * a[k][j]
                q = num.divide_exact(prev)
                if q is None:
                    raise NonExactDivision(
                        f"Bareiss step ({i},{j}) at pivot {k} is not exact")
                a[i][j] = q
            a[i][k] = Poly.zero(table)
        prev = a[k][k]
    det = a[n - 1][n - 1]
    return -det if sign < 0 else det


# -- univariate integer subresultant resultant ----------------------------


def _trim_int(f: List[int]) -> List[int]:
    i = 0
    while i < len(f) and f[i] == 0:
        i += 1
    return f[i:]


def _prem_int(A: List[int], B: List[int]) -> List[int]:
    """Pseudo-remainder: lc(B)^(deg A - deg B + 1) * A modulo B."""
    dA, dB = len(A) - 1, len(B) - 1
    lB = B[0]
    R = A[:]
    for i in range(dA - dB + 1):
        lead = R[i]
        R = [c * lB for c in R]
        # after scaling, eliminate position i with quotient term lead (scaled once less)
        if lead:
            for j in range(dB + 1):
                R[i + j] -= lead * B[j]
    return _trim_int(R[dA - dB + 1:])


def resultant_int(F: Sequence[int], G: Sequence[int]) -> int:
    """Resultant of two integer polynomials given as descending coefficients.

    Subresultant PRS; exact integer arithmetic throughout.  Degree-zero
    conventions: two constants have resultant 1, and a constant c against
    a degree-m polynomial gives c**m.
    """
    A = _trim_int(list(F))
    B = _trim_int(list(G))
    if not A or not B:
        raise ZeroPolynomialInElimination("resultant of the zero polynomial")
    s = 1
    dA, dB = len(A) - 1, len(B) - 1
    if dA == 0 and dB == 0:
        return 1
    if dA < dB:
        A, B = B, A
        if (dA * dB) % 2 == 1:
            s = -s
        dA, dB = dB, dA
    if dB == 0:
        return s * B[0] ** dA
    g = 1
    h = 1
    while True:
        dA, dB = len(A) - 1, len(B) - 1
        delta = dA - dB
        if (dA % 2) == 1 and (dB % 2) == 1:
            s = -s
        R = _prem_int(A, B)
        if not R:
            return 0
        A = B
        denom = g * h ** delta
        B = [c // denom for c in R]
        if any(c * denom != r for c, r in zip(B, R)):
            raise NonExactDivision("subresultant division left a remainder")
        g = A[0]
        if delta > 0:
            h = g ** delta // h ** (delta - 1)
        if len(B) - 1 == 0:
            dA = len(A) - 1
            res = B[0] ** dA
            if dA >= 1:
                q, r = divmod(res, h ** (dA - 1))
                if r:
                    raise NonExactDivision("final subresultant normalization not exact")
                res = q
            return s * res


def _int_coeff_lists(f: Poly, g: Poly, v: str) -> Tuple[List[int], List[int], Fraction]:
    """Integer coefficient lists of univariate f, g plus the rational rescale.

    Returns (F, G, scale) with resultant(f, g) == scale * resultant(F, G).
    """
    m = int(f.degree_in(v))
    n = int(g.degree_in(v))
    cf, pf = f.content_primitive()
    cg, pg = g.content_primitive()
    F = []
    G = []
    for k in range(m, -1, -1):
        F.append(int(pf.coeff_in(v, k).constant_value()))
    for k in range(n, -1, -1):
        G.append(int(pg.coeff_in(v, k).constant_value()))
    scale = cf ** n * cg ** m
    return F, G, scale


# -- direct multivariate resultant via subresultant PRS -------------------


def _poly_coeffs_in(p: Poly, v: str) -> List[Poly]:
    d = int(p.degree_in(v))
    return [p.coeff_in(v, d - k) for k in range(d + 1)]


def _prem_poly(A: List[Poly], B: List[Poly], table: VariableTable,
               deadline: Optional[Deadline] = None) -> List[Poly]:
    dA, dB = len(A) - 1, len(B) - 1
    lB = B[0]
    R = A[:]
    for i in range(dA - dB + 1):
        if deadline is not None and deadline.expired():
            raise BudgetExceeded("pseudo-division ran out of budget",
                                 EliminationTrace([]))
        lead = R[i]
        R = [c * lB for c in R]
        if not lead.is_zero():
            for j in range(dB + 1):
                R[i + j] = R[i + j] - lead * B[j]
    R = R[dA - dB + 1:]
    while R and R[0].is_zero():
        R = R[1:]
    return R


_PRS_WORK_LIMIT = 10 ** 8  # deterministic infeasibility guard


def _prs_predicted_work(f: Poly, g: Poly, v: str) -> int:
    m = int(f.degree_in(v))
    n = int(g.degree_in(v))
    bits = 0
    for p in (f, g):
        for c in p.terms.values():
            bits = max(bits, c.numerator.bit_length(),
                       c.denominator.bit_length())
    return m * n * max(bits, 1)


def _resultant_prs_poly(f: Poly, g: Poly, v: str,
                        deadline: Optional[Deadline] = None) -> Poly:
    if deadline is not None and _prs_predicted_work(f, g, v) > _PRS_WORK_LIMIT:
        raise BudgetExceeded(
            "direct resultant is predictably infeasible within any budget",
            EliminationTrace([]), pending=[f, g])
    table = f.table
    A = _poly_coeffs_in(f, v)
    B = _poly_coeffs_in(g, v)
    one = Poly.constant(table, 1)
    s = 1
    dA, dB = len(A) - 1, len(B) - 1
    if dA < dB:
        A, B = B, A
        if (dA * dB) % 2 == 1:
            s = -s
        dA, dB = dB, dA
    if dB == 0:
        res = B[0] ** dA
        return -res if s < 0 else res
    g_ = one
    h_ = one
    while True:
        if deadline is not None and deadline.expired():
            raise BudgetExceeded("direct resultant ran out of budget",
                                 EliminationTrace([]))
        dA, dB = len(A) - 1, len(B) - 1
        delta = dA - dB
        if (dA % 2) == 1 and (dB % 2) == 1:
            s = -s
        R = _prem_poly(A, B, table, deadline)
        if not R:
            return Poly.zero(table)
        A = B
        denom = g_ * h_ ** delta
        newB = []
        for c in R:
            q = c.divide_exact(denom)
            if q is None:
                raise NonExactDivision("polynomial subresultant division not exact")
            newB.append(q)
        B = newB
        g_ = A[0]
        if delta > 0:
            num = g_ ** delta
            q = num.divide_exact(h_ ** (delta - 1))
            if q is None:
                raise NonExactDivision("subresultant h-update not exact")
            h_ = q
        if len(B) - 1 == 0:
            dA = len(A) - 1
            res = B[0] ** dA
            if dA >= 1:
                q = res.divide_exact(h_ ** (dA - 1))
                if q is None:
                    raise NonExactDivision("final subresultant normalization not exact")
                res = q
            return -res if s < 0 else res


# -- interpolated resultant for homogeneous bivariate-parameter inputs ----


def _newton_interpolate(xs: List[int], ys: List[Fraction]) -> List[Fraction]:
    """Coefficients (ascending) of the interpolating polynomial."""
    n = len(xs)
    coef = [Fraction(y) for y in ys]
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - j])
    # Horner expansion of the Newton form.
    poly = [coef[n - 1]]
    for k in range(n - 2, -1, -1):
        nxt = [Fraction(0)] * (len(poly) + 1)
        for i, c in enumerate(poly):
            nxt[i + 1] += c
            nxt[i] -= c * xs[k]
        nxt[0] += coef[k]
        poly = nxt
    while len(poly) > 1 and poly[-1] == 0:
        poly.pop()
    return poly


def _specialize_int(p: Poly, v: str, x: str, y: str, t: int) -> List[int]:
    """Integer coefficient list (descending in v) of p at x=t, y=1."""
    iv = p.table.position(v)
    ix = p.table.position(x)
    iy = p.table.position(y)
    acc: dict = {}
    for mono, c in p.terms.items():
        val = c * t ** mono[ix]
        acc[mono[iv]] = acc.get(mono[iv], Fraction(0)) + val
    if not acc:
        return []
    d = max(acc)
    out = []
    for k in range(d, -1, -1):
        c = acc.get(k, Fraction(0))
        if c.denominator != 1:
            raise NonExactDivision("specialization of non-integer coefficients")
        out.append(c.numerator)
    return _trim_int(out)


def _resultant_interpolated(f: Poly, g: Poly, v: str, params: Tuple[str, str],
                            deadline: Optional[Deadline] = None) -> Poly:
    """Exact resultant of jointly homogeneous f, g with two parameters.

    Specializes (x, y) := (t, 1) at integer points, computes univariate
    integer resultants, and rebuilds the (homogeneous, degree exactly
    a*deg_v(g) + b*deg_v(f) - deg_v(f)*deg_v(g)) result by interpolation.
    """
    x, y = params
    table = f.table
    a = int(f.total_degree())
    b = int(g.total_degree())
    a3 = int(f.degree_in(v))
    b3 = int(g.degree_in(v))
    cf, f = f.content_primitive()
    cg, g = g.content_primitive()
    rescale = cf ** b3 * cg ** a3  # Res(cf*f, cg*g) = cf^deg_v(g) cg^deg_v(f) Res(f, g)
    D = a * b3 + b * a3 - a3 * b3
    need = D + 1
    xs: List[int] = []
    ys: List[Fraction] = []
    t = 0
    while len(xs) < need + 2:  # two extra points for the self-check
        candidates = (t,) if t == 0 else (t, -t)
        for tt in candidates:
            F = _specialize_int(f, v, x, y, tt)
            G = _specialize_int(g, v, x, y, tt)
            if len(F) - 1 != a3 or len(G) - 1 != b3:
                continue  # leading coefficient vanished; skip this point
            xs.append(tt)
            ys.append(Fraction(resultant_int(F, G)))
            if len(xs) >= need + 2:
                break
        t += 1
        if deadline is not None and deadline.expired():
            raise BudgetExceeded("interpolated resultant ran out of budget",
                                 EliminationTrace([]))
    check_xs, check_ys = xs[need:], ys[need:]
    xs, ys = xs[:need], ys[:need]
    if all(yv == 0 for yv in ys):
        return Poly.zero(table)
    coeffs = _newton_interpolate(xs, ys)
    # rebuild the homogeneous bivariate polynomial
    terms: dict = {}
    ix = table.position(x)
    iy = table.position(y)
    n = len(table)
    for j, c in enumerate(coeffs):
        if c == 0:
            continue
        if c.denominator != 1:
            raise NonExactDivision("interpolated resultant is not integral")
        mono = [0] * n
        mono[ix] = j
        mono[iy] = D - j
        terms[tuple(mono)] = c
    result = Poly(table, terms)
    for tt, expect in zip(check_xs, check_ys):
        got = sum(
            c * tt ** j for j, c in enumerate(coeffs)
        )
        if got != expect:
            raise NonExactDivision("interpolated resultant failed its self-check")
    if rescale != 1:
        result = result.scale(rescale)
    return result


_DIRECT_SIZE_LIMIT = 2500  # term-count product guard for the direct path


def resultant(f: Poly, g: Poly, v: str,
              deadline: Optional[Deadline] = None) -> Tuple[Poly, str]:
    """Resultant of f and g with respect to v, plus the method tag used.

    Conventions: if both operands are constant in v the resultant is 1;
    if only one is constant its value is raised to the other's degree.
    The result does not depend on the strategy chosen.
    """
    if f.is_zero() or g.is_zero():
        raise ZeroPolynomialInElimination("resultant of the zero polynomial")
    m = int(f.degree_in(v))
    n = int(g.degree_in(v))
    table = f.table
    if m == 0 and n == 0:
        return Poly.constant(table, 1), "direct"
    if n == 0:
        return g ** m, "direct"
    if m == 0:
        return f ** n, "direct"
    others = sorted(
        (set(f.variables_present()) | set(g.variables_present())) - {v},
        key=table.position,
    )
    # univariate over Q: integer fast path
    if not others:
        F, G, scale = _int_coeff_lists(f, g, v)
        value = Fraction(resultant_int(F, G)) * scale
        return Poly.constant(table, value), "direct"
    work = (m + n) * f.term_count() * g.term_count()
    if (
        len(others) == 2
        and f.is_homogeneous()
        and g.is_homogeneous()
        and work > _DIRECT_SIZE_LIMIT
    ):
        return _resultant_interpolated(f, g, v, (others[0], others[1]), deadline), \
            "interpolated"
    return _resultant_prs_poly(f, g, v, deadline), "direct"


# -- elimination chains ----------------------------------------------------


class EliminationStep:
    """One recorded elimination event."""

    __slots__ = ("variable", "input_digests", "stripped", "output_degree",
                 "output_terms", "method")

    def __init__(self, variable, input_digests, stripped, output_degree,
                 output_terms, method):
        self.variable = variable
        self.input_digests = input_digests
        self.stripped = stripped
        self.output_degree = output_degree
        self.output_terms = output_terms
        self.method = method

    def as_dict(self) -> dict:
        return {
            "variable": self.variable,
            "input_digests": self.input_digests,
            "stripped": self.stripped,
            "output_degree": self.output_degree,
            "output_terms": self.output_terms,
            "method": self.method,
        }


class EliminationTrace:
    """Ordered record of elimination steps; replay-deterministic."""

    def __init__(self, steps: Optional[List[EliminationStep]] = None):
        self.steps = steps or []

    def append(self, step: EliminationStep) -> None:
        self.steps.append(step)

    def as_list(self) -> list:
        return [s.as_dict() for s in self.steps]


def strip_assumed_factors(p: Poly, assumptions: AssumptionSet,
                          extra: Sequence[Poly] = ()) -> Tuple[Poly, list]:
    """Strip integer content and assumed-nonzero factors from p.

    Returns the reduced polynomial (primitive, positive leading sign) and a
    list of (factor text, exponent) actually removed.  Factors over other
    tables or not dividing p are skipped.
    """
    from . import textio

    if p.is_zero():
        return p, []
    removed = []
    factors = []
    for q in list(assumptions.polys()) + list(extra):
        if q.table != p.table or q.is_constant():
            continue
        _, qp = q.content_primitive()
        if all(qp != seen for seen in factors):
            factors.append(qp)
    reduced = p
    if factors:
        reduced, exps = reduced.factor_out(factors)
        for q, e in zip(factors, exps):
            if e:
                removed.append((textio.serialize_poly(q), e))
    _, reduced = reduced.content_primitive()
    return reduced, removed


def eliminate_chain(system: Sequence[Poly], order: Sequence[str],
                    assumptions: AssumptionSet, budget: Optional[float] = None
                    ) -> Tuple[Poly, EliminationTrace]:
    """Successive pairwise resultants along the given variable order.

    At each stage, inputs are content- and assumption-stripped, resultants
    of consecutive pairs are taken in input order, and the results feed the
    next stage.  A zero result at any stage is returned immediately as a
    degenerate signal.  Exceeding the budget raises :class:`BudgetExceeded`
    with the partial trace.
    """
    from . import textio

    if len(system) < 2:
        raise ValueError("an elimination chain needs at least two polynomials")
    for v in order:
        if not any(p.degree_in(v) not in (0, float("-inf")) for p in system):
            raise ValueError(f"no input involves eliminated variable {v!r}")
    deadline = Deadline(budget)
    trace = EliminationTrace()
    table = system[0].table
    universal = [Poly.variable(table, n) for n in ("H", "h1") if n in table]
    current = []
    for p in system:
        if p.is_zero():
            raise ZeroPolynomialInElimination("zero polynomial in chain input")
        reduced, _ = strip_assumed_factors(p, assumptions, universal)
        current.append(reduced)
    for v in order:
        if len(current) < 2:
            break
        nxt = []
        for i in range(len(current) - 1):
            if deadline.expired():
                raise BudgetExceeded(f"budget exhausted before eliminating {v!r}",
                                     trace, pending=list(current))
            f, g = current[i], current[i + 1]
            try:
                r, method = resultant(f, g, v, deadline)
            except BudgetExceeded:
                raise BudgetExceeded(
                    f"budget exhausted while eliminating {v!r}", trace,
                    pending=list(current)) from None
            if r.is_zero():
                trace.append(EliminationStep(
                    v,
                    [textio.poly_digest(f), textio.poly_digest(g)],
                    [], "-inf", 0, method))
                return r, trace
            reduced, removed = strip_assumed_factors(r, assumptions, universal)
            trace.append(EliminationStep(
                v,
                [textio.poly_digest(f), textio.poly_digest(g)],
                removed,
                int(reduced.total_degree()),
                reduced.term_count(),
                method))
            nxt.append(reduced)
        current = nxt
    return current[0], trace


def cramer_solve_2x2(a11: Poly, a12: Poly, a21: Poly, a22: Poly,
                     b1: Poly, b2: Poly,
                     assumptions: Optional[AssumptionSet] = None
                     ) -> Tuple[RatFunc, RatFunc, Poly]:
    """Exact solution of a 2x2 linear system over the fraction field.

    Returns (x1, x2, determinant); the determinant is recorded into the
    assumption set (it must be nonvanishing for the solution to be valid).
    """
    det = a11 * a22 - a12 * a21
    if det.is_zero():
        raise SingularSystem("2x2 system has identically zero determinant")
    asm = assumptions if assumptions is not None else AssumptionSet()
    asm.add(det, "determinant of a solved 2x2 linear system")
    x1 = RatFunc(b1 * a22 - b2 * a12, det, asm)
    x2 = RatFunc(a11 * b2 - a21 * b1, det, asm)
    return x1, x2, det


# -- modular certificates ---------------------------------------------------

CERTIFICATE_PRIMES = (2147483647, 2147483629, 2147483587, 2147483579, 2147483563)


def _int_lists_bivariate(p: Poly, x: str, y: str) -> List[int]:
    """Descending integer coefficients of homogeneous bivariate p at y=1."""
    _, prim = p.content_primitive()
    ix = prim.table.position(x)
    d = int(prim.degree_in(x))
    out = []
    for k in range(d, -1, -1):
        c = prim.coeff_in(x, k).constant_value()
        out.append(int(c))
    return out


def resultant_mod_p(F: Sequence[int], G: Sequence[int], p: int) -> int:
    """Euclidean resultant of integer coefficient lists reduced mod p."""
    f = _trim_int([c % p for c in F])
    g = _trim_int([c % p for c in G])
    if not f or not g:
        return 0
    res = 1
    sign = 1
    while True:
        df, dg = len(f) - 1, len(g) - 1
        if df == 0 and dg == 0:
            break
        if df < dg:
            if (df * dg) % 2 == 1:
                sign = -sign
            f, g = g, f
            continue
        if dg == 0:
            res = res * pow(g[0], df, p) % p
            return res * sign % p
        inv = pow(g[0], p - 2, p)
        r = f[:]
        for i in range(df - dg + 1):
            c = r[i] * inv % p
            if c:
                for j in range(dg + 1):
                    r[i + j] = (r[i + j] - c * g[j]) % p
        r = _trim_int(r[df - dg + 1:])
        if not r:
            return 0
        dr = len(r) - 1
        res = res * pow(g[0], df - dr, p) % p
        if (df * dg) % 2 == 1:
            sign = -sign
        f, g = g, r
    return res * sign % p


def gcd_mod_p(F: Sequence[int], G: Sequence[int], p: int) -> List[int]:
    """Monic gcd of the mod-p reductions (descending coefficients)."""
    f = _trim_int([c % p for c in F])
    g = _trim_int([c % p for c in G])
    while g:
        df, dg = len(f) - 1, len(g) - 1
        if df < dg:
            f, g = g, f
            continue
        inv = pow(g[0], p - 2, p)
        r = f[:]
        for i in range(df - dg + 1):
            c = r[i] * inv % p
            if c:
                for j in range(dg + 1):
                    r[i + j] = (r[i + j] - c * g[j]) % p
        r = _trim_int(r[df - dg + 1:])
        f, g = g, r
    if f:
        inv = pow(f[0], p - 2, p)
        f = [c * inv % p for c in f]
    return f


def certify_resultant_nonzero(f: Poly, g: Poly, v: str, y: str) -> Optional[dict]:
    """Rigorous nonvanishing certificate for Res_v(f, g), f,g bivariate in (v,y).

    Reduces both inputs modulo a prime that preserves their leading
    coefficients and computes the resultant of the reductions.  A nonzero
    residue proves the exact integer resultant nonzero (reduction commutes
    with the resultant when degrees are preserved).  Returns evidence
    ``{prime, residue, degree_f, degree_g}`` or None if every listed prime
    is degenerate or yields zero.
    """
    F = _int_lists_bivariate(f, v, y)
    G = _int_lists_bivariate(g, v, y)
    for p in CERTIFICATE_PRIMES:
        if F[0] % p == 0 or G[0] % p == 0:
            continue
        residue = resultant_mod_p(F, G, p)
        if residue != 0:
            return {
                "prime": p,
                "residue": residue,
                "degree_f": len(F) - 1,
                "degree_g": len(G) - 1,
            }
    return None


def gcd_in(f: Poly, g: Poly, v: str) -> Optional[Poly]:
    """Common factor of f and g in the main variable v, when one exists.

    Handles inputs that are quadratic in v or in v**2 (even exponents
    only): the quadratic is split exactly through a polynomial square root
    of its discriminant, and candidates are verified by exact trial
    division into both inputs.  Returns a primitive common factor of
    positive v-degree, or None.
    """
    table = f.table
    iv = table.position(v)
    candidates: List[Poly] = []

    def quadratic_roots(a: Poly, b: Poly, c: Poly):
        disc = b * b - a * c.scale(4)
        root = disc.square_root()
        if root is None or not a.is_constant():
            return []
        inv2a = Fraction(1) / (2 * a.constant_value())
        return [(-b + root.scale(sgn)).scale(inv2a) for sgn in (1, -1)]

    for p in (f, g):
        d = int(p.degree_in(v))
        if d == 2:
            for u in quadratic_roots(p.coeff_in(v, 2), p.coeff_in(v, 1),
                                     p.coeff_in(v, 0)):
                candidates.append(Poly.variable(table, v) - u)
        elif d == 4 and all(m[iv] % 2 == 0 for m in p.terms):
            # quadratic in v**2
            for u in quadratic_roots(p.coeff_in(v, 4), p.coeff_in(v, 2),
                                     p.coeff_in(v, 0)):
                candidates.append(Poly.variable(table, v) ** 2 - u)
    for cand in candidates:
        _, prim = cand.content_primitive()
        if f.divide_exact(prim) is not None and g.divide_exact(prim) is not None:
            return prim
    return None
