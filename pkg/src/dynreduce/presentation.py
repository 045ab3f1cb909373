"""Presentations of degree-d endomorphisms of P^n and the conjugation action.

A presentation stores n+1 forms of degree d, each as the tuple of its
C(n+d, d) coefficients listed over monomials in descending lexicographic order
of exponent vectors (for n = 1: x^d, x^(d-1) y, ..., y^d).
"""

from __future__ import annotations

import math
import operator
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .arith import (
    DomainError,
    as_matrix,
    bareiss_det,
    common_denominator,
    ord_p,
    ord_p_tuple,
    reduce_mod_p,
)


class SingularMatrixError(DomainError):
    pass


class PresentationError(DomainError):
    pass


@lru_cache(maxsize=None)
def monomials(n: int, d: int) -> tuple:
    """Exponent vectors of degree d in n+1 variables, descending lex order."""
    def rec(nvars, total):
        if nvars == 1:
            return [(total,)]
        out = []
        for first in range(total, -1, -1):
            out.extend((first,) + rest for rest in rec(nvars - 1, total - first))
        return out
    return tuple(rec(n + 1, d))


@lru_cache(maxsize=None)
def monomial_position(n: int, d: int) -> dict:
    return {e: k for k, e in enumerate(monomials(n, d))}


def num_monomials(n: int, d: int) -> int:
    return math.comb(n + d, d)


@dataclass(frozen=True)
class Presentation:
    n: int
    d: int
    coeffs: tuple  # n+1 tuples of D Fractions

    def __post_init__(self):
        if self.n < 1 or self.d < 1:
            raise PresentationError("need n >= 1 and d >= 1")
        D = num_monomials(self.n, self.d)
        if len(self.coeffs) != self.n + 1 or any(len(f) != D for f in self.coeffs):
            raise PresentationError(
                f"expected {self.n + 1} forms of {D} coefficients each")
        if not any(c != 0 for f in self.coeffs for c in f):
            raise PresentationError("all coefficients are zero")

    @property
    def D(self) -> int:
        return num_monomials(self.n, self.d)

    @property
    def N(self) -> int:
        return (self.n + 1) * self.D - 1

    @property
    def flat(self) -> tuple:
        return tuple(c for f in self.coeffs for c in f)

    def form(self, i: int) -> dict:
        """Form i as a sparse {exponent: coefficient} mapping."""
        return {e: c for e, c in zip(monomials(self.n, self.d), self.coeffs[i]) if c != 0}

    def scale(self, c) -> "Presentation":
        c = Fraction(c)
        return Presentation(self.n, self.d, tuple(tuple(c * a for a in f) for f in self.coeffs))

    def is_integral(self) -> bool:
        return all(Fraction(c).denominator == 1 for c in self.flat)

    def __str__(self):
        names = "xyzw" if self.n < 4 else None
        parts = []
        for i in range(self.n + 1):
            terms = []
            for e, c in self.form(i).items():
                mono = "*".join(
                    (names[j] if names else f"x{j}") + (f"^{k}" if k > 1 else "")
                    for j, k in enumerate(e) if k)
                terms.append(f"{c}*{mono}" if mono else str(c))
            parts.append(" + ".join(terms) or "0")
        return "[" + ", ".join(parts) + "]"


def make_presentation(n: int, d: int, coeffs) -> Presentation:
    """Build a presentation from nested per-form coefficient lists or one flat list."""
    D = num_monomials(n, d)
    coeffs = list(coeffs)
    if coeffs and not isinstance(coeffs[0], (list, tuple)):
        if len(coeffs) != (n + 1) * D:
            raise PresentationError(f"expected {(n + 1) * D} coefficients, got {len(coeffs)}")
        coeffs = [coeffs[i * D:(i + 1) * D] for i in range(n + 1)]
    return Presentation(n, d, tuple(tuple(Fraction(c) for c in f) for f in coeffs))


def from_forms(n: int, d: int, forms: Sequence[dict]) -> Presentation:
    """Build a presentation from sparse forms {exponent tuple: coefficient}."""
    pos = monomial_position(n, d)
    rows = []
    for f in forms:
        row = [Fraction(0)] * len(pos)
        for e, c in f.items():
            e = tuple(e)
            if e not in pos:
                raise PresentationError(f"monomial {e} is not of degree {d} in {n + 1} variables")
            row[pos[e]] += Fraction(c)
        rows.append(tuple(row))
    if len(rows) != n + 1:
        raise PresentationError(f"expected {n + 1} forms, got {len(rows)}")
    return Presentation(n, d, tuple(rows))


def is_morphism(P: Presentation) -> bool:
    from .resultant import resultant

    return resultant(P) != 0


# ---------------------------------------------------------------------------
# conjugation

def _times_linear(poly: dict, lin: Sequence, add, mul) -> dict:
    out: dict = {}
    for e, c in poly.items():
        for k, g in enumerate(lin):
            if g == 0:
                continue
            e2 = e[:k] + (e[k] + 1,) + e[k + 1:]
            v = mul(c, g)
            out[e2] = add(out[e2], v) if e2 in out else v
    return out


def substitution_columns(g, n: int, d: int, add=operator.add, mul=operator.mul, one=Fraction(1)):
    """For each monomial x^e of degree d, the coefficient vector of x^e after
    substituting x_j -> sum_k g[j][k] x_k (listed in the standard monomial order).

    Ring operations are passed in so the same code serves Q and finite fields.
    """
    mons = monomials(n, d)
    zero_e = (0,) * (n + 1)
    # powers[j][k] = (sum_k g[j][k] x_k)^k as a sparse polynomial
    powers = []
    for j in range(n + 1):
        row = [{zero_e: one}]
        for _ in range(d):
            row.append(_times_linear(row[-1], g[j], add, mul))
        powers.append(row)
    cols = []
    for e in mons:
        poly = {zero_e: one}
        for j, k in enumerate(e):
            if k:
                poly = _poly_mul(poly, powers[j][k], add, mul)
        cols.append(poly)
    return cols


def _poly_mul(a: dict, b: dict, add, mul) -> dict:
    out: dict = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = tuple(x + y for x, y in zip(ea, eb))
            v = mul(ca, cb)
            out[e] = add(out[e], v) if e in out else v
    return out


def conjugate(P: Presentation, gamma) -> Presentation:
    """Presentation of adj(gamma) o phi o gamma."""
    G = as_matrix(gamma)
    m = P.n + 1
    if len(G) != m:
        raise PresentationError(f"matrix must be {m}x{m}")
    # work over Z: scaling gamma by s scales the result by s^(n+d)
    s = common_denominator(x for row in G for x in row)
    Gi = [[int(x * s) for x in row] for row in G]
    if bareiss_det(Gi) == 0:
        raise SingularMatrixError("conjugating matrix is singular")
    c = common_denominator(P.flat)
    A = _int_adjugate(Gi)
    cols = substitution_columns(Gi, P.n, P.d, one=1)
    pos = monomial_position(P.n, P.d)
    D = P.D
    composed = []
    for f in P.coeffs:
        row = [0] * D
        for a, col in zip(f, cols):
            if a:
                a = int(a * c)
                for e, v in col.items():
                    row[pos[e]] += a * v
        composed.append(row)
    scale = Fraction(1, c * s ** (P.n + P.d))
    new = []
    for i in range(m):
        row = [0] * D
        for j in range(m):
            aij = A[i][j]
            if aij:
                cj = composed[j]
                for k in range(D):
                    row[k] += aij * cj[k]
        new.append(tuple(scale * v for v in row))
    return Presentation(P.n, P.d, tuple(new))


def _int_adjugate(G):
    m = len(G)
    if m == 1:
        return [[1]]
    A = [[0] * m for _ in range(m)]
    for i in range(m):
        for j in range(m):
            minor = [row[:j] + row[j + 1:] for k, row in enumerate(G) if k != i]
            A[j][i] = (-1) ** (i + j) * bareiss_det(minor)
    return A


def projectively_equal(P: Presentation, Q: Presentation) -> bool:
    """Equality as points of P^N, by cross-multiplying at the first nonzero coordinate."""
    if (P.n, P.d) != (Q.n, Q.d):
        return False
    a, b = P.flat, Q.flat
    k = next(i for i, c in enumerate(a) if c != 0)
    if b[k] == 0:
        return False
    return all(x * b[k] == y * a[k] for x, y in zip(a, b))


# ---------------------------------------------------------------------------
# normalization and reduction

@dataclass(frozen=True)
class NormalizedPresentation:
    base: Presentation
    p: int

    def __post_init__(self):
        if ord_p_tuple(self.base.flat, self.p) != 0:
            raise PresentationError(f"presentation is not normalized at {self.p}")


@dataclass(frozen=True)
class ReducedPoint:
    n: int
    d: int
    p: int
    coords: tuple  # (n+1)*D residues in [0, p)

    def __post_init__(self):
        if not any(self.coords):
            raise PresentationError("reduced point is zero")

    def form(self, i: int) -> tuple:
        D = num_monomials(self.n, self.d)
        return self.coords[i * D:(i + 1) * D]

    def lift(self) -> Presentation:
        return make_presentation(self.n, self.d, list(self.coords))


def normalize_at(P: Presentation, p: int) -> NormalizedPresentation:
    m = ord_p_tuple(P.flat, p)
    return NormalizedPresentation(P.scale(Fraction(p) ** (-m)), p)


def reduce_at(NP: NormalizedPresentation) -> ReducedPoint:
    P = NP.base
    return ReducedPoint(P.n, P.d, NP.p, tuple(reduce_mod_p(c, NP.p) for c in P.flat))


def primitive_integral(P: Presentation) -> Presentation:
    """Scale P to integer coefficients with gcd 1, keeping signs."""
    den = common_denominator(P.flat)
    ints = [int(c * den) for c in P.flat]
    g = math.gcd(*ints)
    return P.scale(Fraction(den, g))


def integral_at(P: Presentation, p: int) -> bool:
    return all(ord_p(c, p) >= 0 for c in P.flat)
