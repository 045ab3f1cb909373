"""GIT semistability of reduced points of P^N(F_p) under conjugation.

A point x is unstable when, after moving it by some g in GL_{n+1}, a diagonal
one-parameter subgroup diag(t^r_0, ..., t^r_n) with sum(r) == 0 scales every
nonzero coordinate by a positive power of t. Under conjugation the coordinate
(i, e) picks up the weight <e - u_i, r>.

The search runs over one representative g per coset g*B, where B is the lower
triangular Borel subgroup, and only over dominant r (r_0 >= ... >= r_n). Every
destabilizing pair can be moved into that form, so the search is complete.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from functools import lru_cache
from itertools import product
from typing import Optional

from .arith import BudgetError, UsageError, reduce_mod_p
from .cone import nonzero_cone_point, strict_cone_feasible
from .ff import GF, field
from .presentation import (
    Presentation,
    ReducedPoint,
    conjugate,
    make_presentation,
    monomial_position,
    monomials,
    normalize_at,
    reduce_at,
    substitution_columns,
)


@dataclass(frozen=True)
class WeightFunctional:
    i: int
    e: tuple
    w: tuple


@lru_cache(maxsize=None)
def coordinate_weights(n: int, d: int) -> tuple:
    out = []
    for i in range(n + 1):
        for e in monomials(n, d):
            out.append(WeightFunctional(i, e, tuple(e[j] - (j == i) for j in range(n + 1))))
    return tuple(out)


@lru_cache(maxsize=None)
def _dominance_rows(n: int) -> tuple:
    return tuple(tuple(1 if k == j else -1 if k == j + 1 else 0 for k in range(n + 1))
                 for j in range(n))


@dataclass(frozen=True)
class OnePSWitness:
    flag_matrix: tuple
    r: tuple
    p: int
    degree: int = 1

    def as_dict(self):
        return {"flag_matrix": [list(row) for row in self.flag_matrix],
                "r": list(self.r), "field": [self.p, self.degree]}


@dataclass(frozen=True)
class SemistabilityOptions:
    degree: int = 1            # flags over F_{p^degree}
    max_n: int = 2
    max_p: int = 7
    max_flags: int = 200_000
    enumeration: str = "flags"  # or "all": every invertible matrix, no coset reduction
    boundary: bool = False      # also classify strictly semistable points


DEFAULT_OPTIONS = SemistabilityOptions()


@dataclass
class SemistabilityResult:
    semistable: bool
    witness: Optional[OnePSWitness] = None
    strictly_semistable: Optional[bool] = None
    flags_checked: int = 0
    boundary_witness: Optional[OnePSWitness] = dc_field(default=None, repr=False)

    def as_dict(self):
        out = {"semistable": self.semistable,
               "witness": self.witness.as_dict() if self.witness else None,
               "flags_checked": self.flags_checked}
        if self.strictly_semistable is not None:
            out["strictly_semistable"] = self.strictly_semistable
        return out


# ---------------------------------------------------------------------------
# flags

def _canonical_vectors(F: GF, m: int, pivots: frozenset):
    """Vectors vanishing at ``pivots`` whose first nonzero entry is 1."""
    free = [k for k in range(m) if k not in pivots]
    for a, lead in enumerate(free):
        tail = free[a + 1:]
        for values in product(range(F.q), repeat=len(tail)):
            v = [0] * m
            v[lead] = 1
            for k, val in zip(tail, values):
                v[k] = val
            yield lead, tuple(v)


def flag_representatives(F: GF, m: int) -> list:
    """One matrix per full flag of F^m; column j spans, with the later columns,
    the j-th step of the flag. Sorted lexicographically by entries."""
    reps = []

    def rec(cols, pivots):
        if len(cols) == m:
            # cols were chosen last column first
            reps.append(tuple(tuple(c[row] for c in reversed(cols)) for row in range(m)))
            return
        for lead, v in _canonical_vectors(F, m, pivots):
            rec(cols + [v], pivots | {lead})

    rec([], frozenset())
    reps.sort()
    return reps


def all_invertible(F: GF, m: int):
    for entries in product(range(F.q), repeat=m * m):
        g = tuple(tuple(entries[r * m:(r + 1) * m]) for r in range(m))
        if F.det(g) != 0:
            yield g


def count_flags(q: int, m: int) -> int:
    total = 1
    for k in range(1, m + 1):
        total *= (q ** k - 1) // (q - 1)
    return total


@dataclass(frozen=True)
class _FlagAction:
    g: tuple
    adj: tuple
    sub: tuple  # sub[e_index] = ((target_index, coeff), ...)


def _flag_action(F: GF, n: int, d: int, g) -> _FlagAction:
    pos = monomial_position(n, d)
    cols = substitution_columns(g, n, d, add=F.add, mul=F.mul, one=1)
    sub = tuple(tuple((pos[e], c) for e, c in col.items() if c) for col in cols)
    return _FlagAction(g, F.adjugate(g), sub)


@lru_cache(maxsize=16)
def _flag_actions(n: int, d: int, p: int, k: int) -> tuple:
    F = field(p, k)
    return tuple(_flag_action(F, n, d, g) for g in flag_representatives(F, n + 1))


def _act(F: GF, n: int, D: int, act: _FlagAction, coords) -> list:
    composed = []
    for i in range(n + 1):
        row = [0] * D
        for a, col in zip(coords[i * D:(i + 1) * D], act.sub):
            if a:
                for t, c in col:
                    row[t] = F.add(row[t], F.mul(a, c))
        composed.append(row)
    out = []
    for i in range(n + 1):
        for t in range(D):
            s = 0
            for j in range(n + 1):
                if act.adj[i][j] and composed[j][t]:
                    s = F.add(s, F.mul(act.adj[i][j], composed[j][t]))
            out.append(s)
    return out


@lru_cache(maxsize=65536)
def _destabilizing(n: int, d: int, support: frozenset):
    weights = coordinate_weights(n, d)
    rows = {weights[k].w for k in support}
    return strict_cone_feasible(sorted(rows), weak_rows=_dominance_rows(n))


@lru_cache(maxsize=65536)
def _boundary(n: int, d: int, support: frozenset):
    weights = coordinate_weights(n, d)
    rows = {weights[k].w for k in support}
    return nonzero_cone_point(sorted(rows), weak_rows=_dominance_rows(n))


def _check_budget(n: int, p: int, opts: SemistabilityOptions):
    if n > opts.max_n:
        raise BudgetError(f"semistability for n = {n} exceeds the budget (max n = {opts.max_n})")
    if p > opts.max_p:
        raise BudgetError(f"semistability over F_{p} exceeds the budget (max p = {opts.max_p})")
    q = p ** opts.degree
    total = count_flags(q, n + 1)
    if opts.enumeration == "all":
        total = q ** ((n + 1) ** 2)
    if total > opts.max_flags:
        raise BudgetError(f"{total} flags exceed the budget of {opts.max_flags}")


def is_semistable(x: ReducedPoint, opts: SemistabilityOptions = DEFAULT_OPTIONS) -> SemistabilityResult:
    """Decide semistability of x; unstable verdicts carry a verifiable witness."""
    if not any(x.coords):
        raise UsageError("zero point")
    n, d, p = x.n, x.d, x.p
    _check_budget(n, p, opts)
    F = field(p, opts.degree)
    D = len(monomials(n, d))
    if opts.enumeration == "flags":
        actions = _flag_actions(n, d, p, opts.degree)
    elif opts.enumeration == "all":
        actions = (_flag_action(F, n, d, g) for g in all_invertible(F, n + 1))
    else:
        raise UsageError(f"unknown enumeration {opts.enumeration!r}")

    checked = 0
    boundary = None
    for act in actions:
        checked += 1
        y = _act(F, n, D, act, x.coords)
        support = frozenset(k for k, v in enumerate(y) if v)
        r = _destabilizing(n, d, support)
        if r is not None:
            return SemistabilityResult(False, OnePSWitness(act.g, r, p, opts.degree),
                                       flags_checked=checked)
        if opts.boundary and boundary is None:
            r0 = _boundary(n, d, support)
            if r0 is not None:
                boundary = OnePSWitness(act.g, r0, p, opts.degree)
    res = SemistabilityResult(True, flags_checked=checked)
    if opts.boundary:
        res.strictly_semistable = boundary is not None
        res.boundary_witness = boundary
    return res


def is_semistable_presentation(P: Presentation, p: int,
                               opts: SemistabilityOptions = DEFAULT_OPTIONS) -> SemistabilityResult:
    return is_semistable(reduce_at(normalize_at(P, p)), opts)


# ---------------------------------------------------------------------------
# witness verification, deliberately routed through the rational conjugation code

def conjugate_point(x: ReducedPoint, g, degree: int = 1) -> tuple:
    """Coordinates of x conjugated by the matrix g over F_{p^degree}."""
    if degree == 1:
        Q = conjugate(x.lift(), [[int(v) for v in row] for row in g])
        return tuple(int(c) % x.p for c in Q.flat)
    F = field(x.p, degree)
    return tuple(_act(F, x.n, len(monomials(x.n, x.d)), _flag_action(F, x.n, x.d, g), x.coords))


def verify_witness(x: ReducedPoint, witness: OnePSWitness) -> bool:
    if sum(witness.r) != 0 or not any(witness.r):
        return False
    F = field(x.p, witness.degree)
    if F.det(witness.flag_matrix) == 0:
        return False
    y = conjugate_point(x, witness.flag_matrix, witness.degree)
    weights = coordinate_weights(x.n, x.d)
    for v, wf in zip(y, weights):
        if v and sum(a * b for a, b in zip(wf.w, witness.r)) < 1:
            return False
    return True


def reduced_resultant_nonzero(x: ReducedPoint) -> bool:
    from .resultant import resultant

    return resultant(x.lift()) % x.p != 0


def all_reduced_points(n: int, d: int, p: int, projective: bool = True):
    """Every nonzero point of F_p^{(n+1)D}, one per projective class if requested."""
    size = (n + 1) * len(monomials(n, d))
    for coords in product(range(p), repeat=size):
        if not any(coords):
            continue
        if projective and next(c for c in coords if c) != 1:
            continue
        yield ReducedPoint(n, d, p, coords)


def point_from_forms(n: int, d: int, p: int, forms) -> ReducedPoint:
    P = make_presentation(n, d, forms)
    return ReducedPoint(n, d, p, tuple(reduce_mod_p(c, p) for c in P.flat))
