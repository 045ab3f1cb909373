"""Small finite fields F_q, q = p^k, with elements encoded as integers in [0, q).

The encoding writes an element as its coefficient vector in base p over a fixed
irreducible polynomial, so the prime subfield F_p is exactly ``range(p)``.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import product

from .arith import BudgetError, check_prime, leibniz_det

MAX_TABLE_Q = 512


def _poly_mulmod(a, b, modulus, p):
    k = len(modulus) - 1
    prod = [0] * (2 * k - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] = (prod[i + j] + x * y) % p
    # modulus is monic, coefficients low to high
    for deg in range(len(prod) - 1, k - 1, -1):
        c = prod[deg]
        if c:
            for j in range(k + 1):
                prod[deg - k + j] = (prod[deg - k + j] - c * modulus[j]) % p
    return prod[:k]


def _is_irreducible(poly, p):
    """True if the monic poly (low to high) is irreducible over F_p (brute force)."""
    k = len(poly) - 1
    for deg in range(1, k // 2 + 1):
        for tail in product(range(p), repeat=deg):
            div = list(tail) + [1]
            # polynomial long division
            rem = list(poly)
            for top in range(k, deg - 1, -1):
                c = rem[top]
                if c:
                    for j in range(deg + 1):
                        rem[top - deg + j] = (rem[top - deg + j] - c * div[j]) % p
            if not any(rem[:deg]):
                return False
    return True


def irreducible_poly(p: int, k: int):
    for tail in product(range(p), repeat=k):
        poly = list(tail) + [1]
        if poly[0] and _is_irreducible(poly, p):
            return tuple(poly)
    raise AssertionError("no irreducible polynomial found")


class GF:
    """The field with p**k elements."""

    def __init__(self, p: int, k: int = 1):
        self.p = check_prime(p)
        self.k = k
        self.q = p ** k
        if k == 1:
            self.modulus = (0, 1)
            self._mul = None
        else:
            if self.q > MAX_TABLE_Q:
                raise BudgetError(f"field of size {self.q} is too large")
            self.modulus = irreducible_poly(p, k)
            self._build_tables()
        self.zero = 0
        self.one = 1

    def __repr__(self):
        return f"GF({self.p}^{self.k})"

    def _digits(self, a):
        out = []
        for _ in range(self.k):
            out.append(a % self.p)
            a //= self.p
        return out

    def _undigits(self, ds):
        a = 0
        for c in reversed(ds):
            a = a * self.p + c
        return a

    def _build_tables(self):
        q = self.q
        digits = [self._digits(a) for a in range(q)]
        self._add = [[self._undigits([(x + y) % self.p for x, y in zip(digits[a], digits[b])])
                      for b in range(q)] for a in range(q)]
        self._mul = [[self._undigits(_poly_mulmod(digits[a], digits[b], self.modulus, self.p))
                      for b in range(q)] for a in range(q)]
        self._neg = [self._undigits([(-x) % self.p for x in digits[a]]) for a in range(q)]
        self._inv = [0] * q
        for a in range(1, q):
            for b in range(1, q):
                if self._mul[a][b] == 1:
                    self._inv[a] = b
                    break

    def add(self, a, b):
        if self._mul is None:
            return (a + b) % self.p
        return self._add[a][b]

    def neg(self, a):
        if self._mul is None:
            return (-a) % self.p
        return self._neg[a]

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        if self._mul is None:
            return a * b % self.p
        return self._mul[a][b]

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero in a finite field")
        if self._mul is None:
            return pow(a, -1, self.p)
        return self._inv[a]

    def elements(self):
        return range(self.q)

    def det(self, mat):
        return leibniz_det(mat, self.add, self.mul, 0, self.neg)

    def adjugate(self, mat):
        m = len(mat)
        if m == 1:
            return ((1,),)
        out = [[0] * m for _ in range(m)]
        for i in range(m):
            for j in range(m):
                minor = [row[:j] + row[j + 1:] for r, row in enumerate(mat) if r != i]
                c = self.det(minor)
                out[j][i] = c if (i + j) % 2 == 0 else self.neg(c)
        return tuple(tuple(r) for r in out)

    def matmul(self, a, b):
        cols = list(zip(*b))
        out = []
        for row in a:
            new = []
            for col in cols:
                s = 0
                for x, y in zip(row, col):
                    s = self.add(s, self.mul(x, y))
                new.append(s)
            out.append(tuple(new))
        return tuple(out)


@lru_cache(maxsize=None)
def field(p: int, k: int = 1) -> GF:
    return GF(p, k)
