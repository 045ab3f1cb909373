"""Exact arithmetic: p-adic valuations on Q, reduction mod p, small exact matrices.

Rationals are plain :class:`fractions.Fraction` values. Valuations of zero are
``math.inf``, which compares above every integer, so ``min`` over a tuple of
valuations is always defined.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import reduce
from itertools import permutations
from typing import Iterable, Sequence

INF = math.inf

Matrix = tuple  # tuple of row tuples


class DomainError(ValueError):
    """Base class for domain errors raised by this package."""


class NotIntegralError(DomainError):
    pass


class UsageError(DomainError):
    pass


class BudgetError(RuntimeError):
    """Raised when a computation would exceed a configured size budget."""


# ---------------------------------------------------------------------------
# primes

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin for n < 3.3e24; beyond that the same 13 bases
    give a very strong probable-prime test."""
    if n < 2:
        return False
    for q in _MR_BASES:
        if n % q == 0:
            return n == q
    t, s = n - 1, 0
    while t % 2 == 0:
        t //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, t, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def check_prime(p) -> int:
    p = int(p)
    if not is_prime(p):
        raise UsageError(f"{p} is not prime")
    return p


# ---------------------------------------------------------------------------
# valuations

def _ord_int(n: int, p: int) -> int:
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k


def ord_p(x, p: int):
    """Exponent of p in the rational x; ``INF`` for zero."""
    x = Fraction(x)
    if x == 0:
        return INF
    return _ord_int(x.numerator, p) - _ord_int(x.denominator, p)


def ord_p_tuple(xs: Sequence, p: int):
    if len(xs) == 0:
        raise UsageError("ord_p_tuple of an empty sequence")
    return min(ord_p(x, p) for x in xs)


def reduce_mod_p(x, p: int) -> int:
    """Image of x in F_p, as an integer in [0, p)."""
    x = Fraction(x)
    if ord_p(x, p) < 0:
        raise NotIntegralError(f"{x} is not integral at {p}")
    return x.numerator * pow(x.denominator, -1, p) % p


# ---------------------------------------------------------------------------
# integer helpers

def lcm(*xs: int) -> int:
    return reduce(lambda a, b: a * b // math.gcd(a, b), xs, 1)


def common_denominator(xs: Iterable) -> int:
    return lcm(*(Fraction(x).denominator for x in xs))


# ---------------------------------------------------------------------------
# matrices

def as_matrix(rows) -> Matrix:
    m = tuple(tuple(Fraction(v) for v in row) for row in rows)
    if not m or any(len(r) != len(m) for r in m):
        raise UsageError("matrix must be square and nonempty")
    return m


def identity(m: int) -> Matrix:
    return tuple(tuple(Fraction(int(i == j)) for j in range(m)) for i in range(m))


def matmul(a, b) -> Matrix:
    cols = list(zip(*b))
    return tuple(tuple(sum((x * y for x, y in zip(row, col)), Fraction(0)) for col in cols)
                 for row in a)


def scalar_matrix(c, m: int) -> Matrix:
    return tuple(tuple(Fraction(c) if i == j else Fraction(0) for j in range(m)) for i in range(m))


def bareiss_det(rows: Sequence[Sequence[int]]) -> int:
    """Fraction-free determinant of an integer matrix."""
    a = [list(r) for r in rows]
    m = len(a)
    if m == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(m - 1):
        if a[k][k] == 0:
            for i in range(k + 1, m):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        piv = a[k][k]
        rk = a[k]
        for i in range(k + 1, m):
            ri = a[i]
            aik = ri[k]
            for j in range(k + 1, m):
                ri[j] = (piv * ri[j] - aik * rk[j]) // prev
            ri[k] = 0
        prev = piv
    return sign * a[m - 1][m - 1]


def det(mat) -> Fraction:
    """Exact determinant of a rational matrix (rows scaled to integers, then Bareiss)."""
    scale = 1
    rows = []
    for row in mat:
        c = common_denominator(row)
        scale *= c
        rows.append([int(Fraction(v) * c) for v in row])
    return Fraction(bareiss_det(rows), scale)


def adjugate(mat) -> Matrix:
    """Classical adjugate (transposed cofactor matrix)."""
    m = len(mat)
    if m == 1:
        return ((Fraction(1),),)
    cof = [[Fraction(0)] * m for _ in range(m)]
    for i in range(m):
        for j in range(m):
            minor = [row[:j] + row[j + 1:] for k, row in enumerate(mat) if k != i]
            cof[j][i] = (-1) ** (i + j) * det(minor)
    return tuple(tuple(r) for r in cof)


def perm_sign(perm: Sequence[int]) -> int:
    sign = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def leibniz_det(mat, add, mul, zero, neg):
    """Determinant over an arbitrary commutative ring given by its operations.

    Only used for the tiny matrices (size <= 4) that show up over finite fields.
    """
    m = len(mat)
    total = zero
    for perm in permutations(range(m)):
        term = None
        for i, j in enumerate(perm):
            term = mat[i][j] if term is None else mul(term, mat[i][j])
        if perm_sign(perm) < 0:
            term = neg(term)
        total = add(total, term)
    return total
