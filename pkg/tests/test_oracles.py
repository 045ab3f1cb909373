"""Cross-checks against sympy, an independent implementation."""

from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import rng, seeds
from dynreduce.corpus import random_presentation
from dynreduce.factor import factor_integer
from dynreduce.resultant import resultant

sympy = pytest.importorskip("sympy")


@given(seeds, st.sampled_from([2, 3, 4]))
def test_binary_resultant_matches_sympy(seed, d):
    P = random_presentation(rng(seed), 1, d, denominators=True)
    z = sympy.Symbol("z")
    # dehomogenize at y = 1; leading coefficients x^d sit first
    f, g = (sum(sympy.Rational(c.numerator, c.denominator) * z ** (d - k) for k, c in enumerate(form))
            for form in P.coeffs)
    ref = sympy.resultant(sympy.Poly(f, z), sympy.Poly(g, z)) if P.coeffs[0][0] and P.coeffs[1][0] else None
    if ref is not None:
        assert resultant(P) == ref


@given(st.integers(2, 10**15))
def test_factor_matches_sympy(n):
    primes, cof = factor_integer(n)
    assert cof == 1
    assert primes == sympy.factorint(n)
