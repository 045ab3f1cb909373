"""Integer factorization sufficient for resultants of small presentations."""

from __future__ import annotations

import math

from .arith import is_prime

TRIAL_BOUND = 100_000
# is_prime is deterministic below 3.3e24
PRIME_BITS = 81
RHO_ITERATIONS = 200_000


def _brent(n: int, c: int, limit: int):
    """One Pollard-Brent run with x -> x^2 + c; a nontrivial factor or None."""
    y, r, q, g = 2, 1, 1, 1
    x = ys = y
    steps = 0
    while g == 1:
        x = y
        for _ in range(r):
            y = (y * y + c) % n
        k = 0
        while k < r and g == 1:
            ys = y
            for _ in range(min(128, r - k)):
                y = (y * y + c) % n
                q = q * abs(x - y) % n
            g = math.gcd(q, n)
            k += 128
        r *= 2
        steps += r
        if steps > limit:
            return None
    if g == n:
        g = 1
        while g == 1:
            ys = (ys * ys + c) % n
            g = math.gcd(abs(x - ys), n)
    return g if 1 < g < n else None


def _split(n: int, limit: int):
    for c in (1, 3, 5):
        g = _brent(n, c, limit)
        if g:
            return g
    return None


def factor_integer(n: int, trial_bound: int = TRIAL_BOUND, prime_bits: int = PRIME_BITS,
                   rho_iterations: int = RHO_ITERATIONS):
    """Return ({prime: exponent}, cofactor) with n = +-prod(p^e) * cofactor.

    Trial division runs up to ``trial_bound`` and Pollard-Brent rho splits
    what remains. Only factors certified prime (at most ``prime_bits`` bits)
    are reported; anything else is multiplied into the unfactored cofactor.
    """
    n = abs(int(n))
    if n == 0:
        raise ValueError("cannot factor 0")
    primes: dict = {}
    q = 2
    while q <= trial_bound and q * q <= n:
        while n % q == 0:
            primes[q] = primes.get(q, 0) + 1
            n //= q
        q += 1 if q == 2 else 2
    cofactor = 1
    stack = [n] if n > 1 else []
    while stack:
        m = stack.pop()
        # every prime factor of m exceeds trial_bound, so m < trial_bound^2 is prime
        if m < trial_bound * trial_bound or (m.bit_length() <= prime_bits and is_prime(m)):
            primes[m] = primes.get(m, 0) + 1
            continue
        if is_prime(m):
            # probable prime above the certified range
            cofactor *= m
            continue
        g = _split(m, rho_iterations)
        if g is None:
            cofactor *= m
        else:
            stack.extend((g, m // g))
    return dict(sorted(primes.items())), cofactor
