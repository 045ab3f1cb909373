"""Resultants of presentations and their p-adic valuations.

The resultant is normalized so that Res(x_0^d, ..., x_n^d) = 1. It is
homogeneous of degree d^n in the coefficients of each form, so of total
degree (n+1) d^n.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .arith import (
    INF,
    BudgetError,
    as_matrix,
    bareiss_det,
    common_denominator,
    det,
    ord_p,
    ord_p_tuple,
)
from .presentation import (
    Presentation,
    SingularMatrixError,
    conjugate,
    monomial_position,
    monomials,
)

MAX_COEFFS = 60


def resultant_degree(n: int, d: int) -> int:
    return (n + 1) * d ** n


def _check_size(P: Presentation):
    if (P.n + 1) * P.D > MAX_COEFFS:
        raise BudgetError(f"(n, d) = ({P.n}, {P.d}) exceeds the supported resultant size")


def _integer_forms(P: Presentation):
    """Scale each form to integers; return (int forms, rational correction)."""
    forms = []
    correction = Fraction(1)
    for f in P.coeffs:
        c = common_denominator(f)
        forms.append([int(a * c) for a in f])
        correction /= Fraction(c) ** (P.d ** P.n)
    return forms, correction


def sylvester_resultant(P: Presentation) -> Fraction:
    if P.n != 1:
        raise ValueError("Sylvester resultant needs n = 1")
    (a, b), correction = _integer_forms(P)
    d = P.d
    size = 2 * d
    rows = []
    for coeffs in (a, b):
        for shift in range(d):
            row = [0] * size
            row[shift:shift + d + 1] = coeffs
            rows.append(row)
    return bareiss_det(rows) * correction


@lru_cache(maxsize=None)
def _macaulay_layout(n: int, d: int):
    nu = (n + 1) * (d - 1) + 1
    mons = monomials(n, nu)
    pos = {m: k for k, m in enumerate(mons)}
    rows = []
    for m in mons:
        i = next(j for j in range(n + 1) if m[j] >= d)
        shift = tuple(m[j] - (d if j == i else 0) for j in range(n + 1))
        rows.append((i, shift))
    extraneous = [k for k, m in enumerate(mons) if sum(1 for v in m if v >= d) >= 2]
    return mons, pos, rows, extraneous


def _macaulay_dets(n: int, d: int, forms):
    mons, pos, rows, extraneous = _macaulay_layout(n, d)
    base = monomials(n, d)
    size = len(mons)
    M = []
    for i, shift in rows:
        row = [0] * size
        for e, c in zip(base, forms[i]):
            if c:
                row[pos[tuple(x + y for x, y in zip(shift, e))]] = c
        M.append(row)
    sub = [[M[r][c] for c in extraneous] for r in extraneous]
    return bareiss_det(M), bareiss_det(sub)


def macaulay_resultant(P: Presentation) -> Fraction:
    """Macaulay's quotient det(M)/det(M'), with a one-parameter perturbation
    F_i + t x_i^d and exact interpolation at t = 0 when det(M') vanishes."""
    _check_size(P)
    n, d = P.n, P.d
    forms, correction = _integer_forms(P)
    num, den = _macaulay_dets(n, d, forms)
    if den != 0:
        q, r = divmod(num, den)
        assert r == 0, "Macaulay quotient is not exact"
        return q * correction

    pure = [monomial_position(n, d)[tuple(d if j == i else 0 for j in range(n + 1))]
            for i in range(n + 1)]
    need = resultant_degree(n, d) + 1
    points = []
    t = 0
    while len(points) < need:
        t += 1
        shifted = [list(f) for f in forms]
        for i in range(n + 1):
            shifted[i][pure[i]] += t
        num, den = _macaulay_dets(n, d, shifted)
        if den != 0:
            points.append((t, Fraction(num, den)))
    value = Fraction(0)
    for k, (tk, yk) in enumerate(points):
        w = Fraction(1)
        for j, (tj, _) in enumerate(points):
            if j != k:
                w *= Fraction(-tj, tk - tj)
        value += yk * w
    assert value.denominator == 1
    return value * correction


def resultant(P: Presentation) -> Fraction:
    if P.n == 1:
        return sylvester_resultant(P)
    return macaulay_resultant(P)


# ---------------------------------------------------------------------------
# valuations

@dataclass(frozen=True)
class ResultantValuation:
    p: int
    ord_rho: object
    min_coeff_ord: object
    ord_R_phi: object

    def as_dict(self):
        def enc(v):
            return "inf" if v == INF else int(v)
        return {"p": self.p, "ord_rho": enc(self.ord_rho),
                "min_coeff_ord": enc(self.min_coeff_ord), "ord_R_phi": enc(self.ord_R_phi)}


def valuation_report(P: Presentation, p: int, rho=None) -> ResultantValuation:
    """ord_p of the resultant, of the coefficients, and of the normalized resultant.

    The coefficients need not be normalized at p.
    """
    if rho is None:
        rho = resultant(P)
    o_rho = ord_p(rho, p)
    m = ord_p_tuple(P.flat, p)
    o_R = INF if o_rho == INF else o_rho - resultant_degree(P.n, P.d) * m
    return ResultantValuation(p, o_rho, m, o_R)


@dataclass(frozen=True)
class ConjugationCheck:
    lhs: object
    rhs_formula: object
    min_ord_after: object
    min_ord_bound: object
    equality_holds: bool
    inequality_holds: bool

    @property
    def holds(self) -> bool:
        return self.equality_holds and self.inequality_holds


def check_conjugation_valuation(P: Presentation, gamma, p: int) -> ConjugationCheck:
    """Compare ord_p rho(a^G) with ord_p rho(a) + (n+d) d^n ord_p(det G), and the
    coefficient bound min ord(a^G) >= min ord(a) + (d+1) ord_p(G), where ord_p(G)
    is the least valuation among the entries of G."""
    G = as_matrix(gamma)
    dG = det(G)
    if dG == 0:
        raise SingularMatrixError("conjugating matrix is singular")
    n, d = P.n, P.d
    Q = conjugate(P, G)
    lhs = ord_p(resultant(Q), p)
    rhs = ord_p(resultant(P), p) + (n + d) * d ** n * ord_p(dG, p)
    after = ord_p_tuple(Q.flat, p)
    bound = ord_p_tuple(P.flat, p) + (d + 1) * ord_p_tuple([x for row in G for x in row], p)
    return ConjugationCheck(lhs, rhs, after, bound, lhs == rhs, after >= bound)

