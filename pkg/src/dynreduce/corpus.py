"""Pseudorandom and exhaustive corpora of presentations.

Every generator takes an explicit :class:`random.Random` (or a seed) so that
corpora are reproducible byte for byte.
"""

from __future__ import annotations

import random
from fractions import Fraction

from .arith import det, ord_p
from .presentation import (
    Presentation,
    ReducedPoint,
    conjugate,
    make_presentation,
    num_monomials,
)
from .resultant import resultant
from .semistability import (
    SemistabilityOptions,
    all_reduced_points,
    is_semistable,
    is_semistable_presentation,
    reduced_resultant_nonzero,
)

DEFAULT_BOX = 5


def random_presentation(rng: random.Random, n: int, d: int, box: int = DEFAULT_BOX,
                        denominators: bool = False, density: float = 1.0) -> Presentation:
    """A random morphism with coefficients in [-box, box] (optionally divided by
    small denominators)."""
    size = (n + 1) * num_monomials(n, d)
    while True:
        coeffs = []
        for _ in range(size):
            c = Fraction(rng.randint(-box, box)) if rng.random() < density else Fraction(0)
            if denominators and rng.random() < 0.3:
                c /= rng.randint(1, box)
            coeffs.append(c)
        if not any(coeffs):
            continue
        P = make_presentation(n, d, coeffs)
        if resultant(P) != 0:
            return P


def random_matrix(rng: random.Random, m: int, box: int = 4, denominators: bool = False):
    while True:
        g = []
        for _ in range(m):
            row = []
            for _ in range(m):
                c = Fraction(rng.randint(-box, box))
                if denominators and rng.random() < 0.3:
                    c /= rng.randint(1, box)
                row.append(c)
            g.append(tuple(row))
        g = tuple(g)
        if det(g) != 0:
            return g


def random_p_unimodular(rng: random.Random, m: int, p: int, box: int = 4):
    """A matrix in GL_m(Z_(p)): entries integral at p, determinant a p-unit.
    Denominators prime to p are allowed."""
    while True:
        g = []
        for _ in range(m):
            row = []
            for _ in range(m):
                c = Fraction(rng.randint(-box, box))
                if rng.random() < 0.3:
                    den = rng.randint(1, box)
                    if den % p:
                        c /= den
                row.append(c)
            g.append(tuple(row))
        g = tuple(g)
        dg = det(g)
        if dg != 0 and ord_p(dg, p) == 0:
            return g


def good_reduction_map(rng: random.Random, n: int, d: int, primes, box: int = DEFAULT_BOX):
    """A random integral morphism whose resultant is a unit at every prime listed."""
    while True:
        P = random_presentation(rng, n, d, box)
        rho = resultant(P)
        if all(ord_p(rho, p) == 0 for p in primes):
            return P


def diagonal_scaling(n: int, factor) -> tuple:
    return tuple(tuple(Fraction(factor) if (i == j == 0) else Fraction(int(i == j))
                       for j in range(n + 1)) for i in range(n + 1))


def conjugated_good(P: Presentation, p: int, k: int = 1) -> Presentation:
    """P conjugated by diag(p^k, 1, ..., 1): a planted non-minimal presentation."""
    return conjugate(P, diagonal_scaling(P.n, Fraction(p) ** k))


def semistable_bad_lift(rng: random.Random, n: int, d: int, p: int, lift_box: int = 2,
                        tries: int = 10_000):
    """A morphism over Q whose reduction at p is semistable but not a morphism.

    Draws random reduced points until one is semistable with vanishing
    resultant, then lifts by adding random multiples of p. Returns None if
    nothing turns up within ``tries`` draws.
    """
    size = (n + 1) * num_monomials(n, d)
    for _ in range(tries):
        coords = tuple(rng.randrange(p) for _ in range(size))
        if not any(coords):
            continue
        x = ReducedPoint(n, d, p, coords)
        if reduced_resultant_nonzero(x) or not is_semistable(x).semistable:
            continue
        for _ in range(20):
            lifted = [c + p * rng.randint(-lift_box, lift_box) for c in coords]
            P = make_presentation(n, d, lifted)
            if resultant(P) != 0:
                return P
    return None


def semistable_corpus(seed: int, count: int, ds=(2, 3), primes=(2, 3, 5), bad_fraction=0.5):
    """Presentations semistable at their attached prime: (P, p) pairs.

    About ``bad_fraction`` of them have bad reduction (ord_p rho > 0)."""
    rng = random.Random(seed)
    out = []
    combos = [(d, p) for d in ds for p in primes]
    while len(out) < count:
        d, p = combos[len(out) % len(combos)]
        if rng.random() < bad_fraction:
            P = semistable_bad_lift(rng, 1, d, p)
            if P is not None:
                out.append((P, p))
                continue
        P = random_presentation(rng, 1, d)
        if is_semistable_presentation(P, p).semistable:
            out.append((P, p))
    return out


def boundary_scan(n: int, d: int, p: int, opts: SemistabilityOptions | None = None):
    """Classify every point of P^N(F_p): yields (point, verdict, result)."""
    opts = opts or SemistabilityOptions(boundary=True)
    for x in all_reduced_points(n, d, p):
        res = is_semistable(x, opts)
        if not res.semistable:
            verdict = "unstable"
        elif res.strictly_semistable:
            verdict = "strictly-semistable"
        else:
            verdict = "stable"
        yield x, verdict, res
