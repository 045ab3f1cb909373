"""Exact feasibility of small polyhedral systems by Fourier-Motzkin elimination.

Used by the semistability test to decide whether a set of weight rows admits a
one-parameter subgroup that makes every row strictly positive.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Optional, Sequence

from .arith import UsageError, lcm

MAX_DIM = 4


def _normalize(coeffs, b):
    """Scale a constraint coeffs.x >= b by a positive factor to a canonical form."""
    scale = max((abs(c) for c in coeffs), default=0)
    if scale == 0:
        scale = abs(b) or 1
    return tuple(c / scale for c in coeffs), b / scale


def fm_solve(constraints, nvars: int) -> Optional[list]:
    """Find x in Q^nvars with coeffs.x >= b for every (coeffs, b), or None.

    Variables are eliminated from last to first; the intermediate systems are
    kept and used for back-substitution, choosing integers near 0 where the
    bounds allow.
    """
    system = set()
    for coeffs, b in constraints:
        system.add(_normalize(tuple(Fraction(c) for c in coeffs), Fraction(b)))
    stages = [None] * (nvars + 1)
    for k in range(nvars, 0, -1):
        stages[k] = system
        pos, neg, rest = [], [], set()
        for coeffs, b in system:
            c = coeffs[k - 1]
            if c > 0:
                pos.append((coeffs, b))
            elif c < 0:
                neg.append((coeffs, b))
            else:
                rest.add((coeffs[:k - 1], b))
        for cp, bp in pos:
            for cn, bn in neg:
                wp, wn = -cn[k - 1], cp[k - 1]
                coeffs = tuple(wp * x + wn * y for x, y in zip(cp[:k - 1], cn[:k - 1]))
                rest.add(_normalize(coeffs, wp * bp + wn * bn))
        system = set()
        for coeffs, b in rest:
            if not any(coeffs):
                if b > 0:
                    return None
                continue
            system.add((coeffs, b))
    for coeffs, b in system:
        if b > 0:
            return None

    x: list = []
    for k in range(1, nvars + 1):
        lo = hi = None
        for coeffs, b in stages[k]:
            c = coeffs[k - 1]
            if c == 0:
                continue
            bound = (b - sum(ci * xi for ci, xi in zip(coeffs, x))) / c
            if c > 0:
                lo = bound if lo is None else max(lo, bound)
            else:
                hi = bound if hi is None else min(hi, bound)
        x.append(_pick(lo, hi))
    return x


def _pick(lo, hi):
    if lo is None and hi is None:
        return Fraction(0)
    if lo is None:
        return Fraction(min(0, math.floor(hi)))
    if hi is None:
        return Fraction(max(0, math.ceil(lo)))
    if math.ceil(lo) <= hi:
        return Fraction(min(max(0, math.ceil(lo)), math.floor(hi)))
    return lo


def _reduced(rows, m):
    # substitute r_last = -(r_0 + ... + r_{m-2})
    return [tuple(row[j] - row[-1] for j in range(m - 1)) for row in rows]


def _check_rows(rows, weak_rows):
    rows = [tuple(int(v) for v in row) for row in rows]
    weak_rows = [tuple(int(v) for v in row) for row in weak_rows]
    if not rows and not weak_rows:
        raise UsageError("need at least one row")
    m = len((rows or weak_rows)[0])
    if m > MAX_DIM:
        raise UsageError(f"cone dimension {m} above supported bound {MAX_DIM}")
    if m < 2 or any(len(r) != m for r in rows + weak_rows):
        raise UsageError("rows must share a length of at least 2")
    return rows, weak_rows, m


def strict_cone_feasible(rows: Sequence[Sequence[int]], weak_rows=()) -> Optional[tuple]:
    """Integer r with sum(r) == 0 and <row, r> >= 1 for all rows, or None.

    Strictness is handled by scale invariance: if some rational r makes every
    row positive, a multiple makes every row at least 1. ``weak_rows`` only
    need <row, r> >= 0.
    """
    rows, weak_rows, m = _check_rows(rows, weak_rows)
    if not rows:
        raise UsageError("strict_cone_feasible needs at least one strict row")
    cons = [(c, 1) for c in _reduced(rows, m)] + [(c, 0) for c in _reduced(weak_rows, m)]
    x = fm_solve(cons, m - 1)
    if x is None:
        return None
    return _integral_vector(x + [-sum(x)])


def nonzero_cone_point(rows: Sequence[Sequence[int]], weak_rows=()) -> Optional[tuple]:
    """Integer r != 0 with sum(r) == 0 and <row, r> >= 0 for all rows, or None."""
    rows, weak_rows, m = _check_rows(rows, weak_rows)
    base = [(c, 0) for c in _reduced(rows + weak_rows, m)]
    for j in range(m - 1):
        for s in (1, -1):
            unit = tuple(s if i == j else 0 for i in range(m - 1))
            x = fm_solve(base + [(unit, 1)], m - 1)
            if x is not None:
                return _integral_vector(x + [-sum(x)])
    return None


def _integral_vector(x) -> tuple:
    scale = lcm(*(Fraction(v).denominator for v in x))
    return tuple(int(Fraction(v) * scale) for v in x)


def grid_feasible(rows, bound: int, weak_rows=()) -> Optional[tuple]:
    """Brute-force oracle: search integer r with |r_i| <= bound and sum(r) == 0."""
    from itertools import product

    rows = [tuple(r) for r in rows]
    m = len(rows[0])
    for head in product(range(-bound, bound + 1), repeat=m - 1):
        last = -sum(head)
        if abs(last) > bound:
            continue
        r = head + (last,)
        if (all(sum(a * b for a, b in zip(row, r)) >= 1 for row in rows)
                and all(sum(a * b for a, b in zip(row, r)) >= 0 for row in weak_rows)):
            return r
    return None
