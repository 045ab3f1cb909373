from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import rng, seeds
from dynreduce.arith import det, ord_p
from dynreduce.corpus import (
    conjugated_good,
    diagonal_scaling,
    good_reduction_map,
    semistable_bad_lift,
    semistable_corpus,
)
from dynreduce.minimality import (
    CERTIFIED,
    EXHAUSTED,
    GOOD,
    IMPROVED,
    NOT_EVEN_POTENTIAL,
    UNKNOWN,
    NotMorphismError,
    candidates,
    certify_or_search_minimal,
    count_candidates,
    effective_bound,
    globalize_over_Q,
    minimal_resultant_divisor,
    n1_candidates,
    potential_good_reduction_status,
    search,
    verify_improvement,
)
from dynreduce.presentation import conjugate, make_presentation, primitive_integral, projectively_equal
from dynreduce.resultant import resultant, valuation_report
from dynreduce.semistability import is_semistable_presentation

SQUARES = make_presentation(1, 2, [[1, 0, 0], [0, 0, 1]])
TWO_X2 = make_presentation(1, 2, [[2, 0, 0], [0, 0, 1]])


def _ord(P, p):
    return valuation_report(P, p).ord_R_phi


def _brute_min(P, p, bound):
    return min([_ord(P, p)] + [o for o, _ in search(P, p, bound)])


def test_candidate_family_shape():
    cands = list(n1_candidates(2, 2))
    assert len(cands) == count_candidates(1, 2, 2) == 1 + 2 * (2 + 4)
    keys = [c.key for c in cands]
    assert keys == sorted(keys)
    for c in cands:
        assert det(c.gamma) != 0
        eps, a, b = c.key
        assert 0 <= b < 2**a


def test_effective_bound_shrinks_large_balls():
    assert effective_bound(1, 2, 3) == 3
    assert effective_bound(1, 1009, 3) == 1
    assert effective_bound(1, 10007, 3) == 0


def test_certified_good_reduction():
    cert = certify_or_search_minimal(SQUARES, 2)
    assert cert.status == CERTIFIED and cert.achieved_ord == 0


def test_improved_example():
    cert = certify_or_search_minimal(TWO_X2, 2, 3)
    assert cert.status == IMPROVED
    assert cert.achieved_ord == 2 and cert.new_ord == 0
    assert cert.gamma == ((1, 0), (0, 2))
    assert verify_improvement(TWO_X2, cert)
    assert cert.certified


def test_non_morphism_rejected():
    with pytest.raises(NotMorphismError):
        certify_or_search_minimal(make_presentation(1, 2, [1, 0, 0, 1, 0, 0]), 2)


def test_semistable_bad_reduction_degree3():
    P = semistable_bad_lift(random.Random(1), 1, 3, 2)
    assert P is not None
    cert = certify_or_search_minimal(P, 2, 3)
    assert cert.status == CERTIFIED and cert.achieved_ord > 0
    assert all(o >= cert.achieved_ord for o, _ in search(P, 2, 3))
    st_ = potential_good_reduction_status(P, 2)
    assert st_.status == NOT_EVEN_POTENTIAL
    assert is_semistable_presentation(st_.semistable_presentation, 2).semistable
    assert st_.semistable_ord > 0


def test_stalled_search_is_unknown_and_monotone():
    P = conjugated_good(SQUARES, 2, 4)
    cert = certify_or_search_minimal(P, 2, 3)
    assert cert.status == IMPROVED and cert.best_ord == 2 and not cert.certified
    assert potential_good_reduction_status(P, 2, 3).status == UNKNOWN
    assert certify_or_search_minimal(P, 2, 4).best_ord == 0
    assert certify_or_search_minimal(P, 2, 1).best_ord >= cert.best_ord


def test_exhausted_status():
    P = conjugated_good(SQUARES, 3, 4)
    cert = certify_or_search_minimal(P, 3, 0)
    assert cert.status == EXHAUSTED and cert.bound == 0


def test_pgr_good():
    assert potential_good_reduction_status(SQUARES, 7).status == GOOD
    assert potential_good_reduction_status(TWO_X2, 2).status == GOOD


@pytest.mark.parametrize("seed", range(6))
def test_theorem_consistency_at_bound_plus_one(seed):
    for P, p in semistable_corpus(seed, 3, ds=(2, 3), primes=(2, 3)):
        achieved = _ord(P, p)
        assert all(o >= achieved for o, _ in search(P, p, 4))


@given(seeds, st.sampled_from([2, 3, 5]), st.sampled_from([2, 3]))
@settings(max_examples=15)
def test_planted_maps_unstable_and_recovered(seed, p, d):
    base = good_reduction_map(rng(seed), 1, d, (p,))
    P = conjugated_good(base, p)
    assert _ord(P, p) > 0
    assert not is_semistable_presentation(P, p).semistable
    cert = certify_or_search_minimal(P, p, 3)
    assert cert.status == IMPROVED and cert.new_ord == 0
    assert verify_improvement(primitive_integral(P), cert)


@given(seeds, st.sampled_from([2, 3]))
@settings(max_examples=15)
def test_monotone_in_bound(seed, p):
    r = rng(seed)
    base = good_reduction_map(r, 1, 2, (p,))
    P = conjugated_good(base, p, r.randint(1, 3))
    prev = None
    for b in range(4):
        best = certify_or_search_minimal(P, p, b).best_ord
        assert prev is None or best <= prev
        prev = best


def test_hnf_candidates_n2():
    cands = list(candidates(2, 2, 1))
    assert len(cands) == count_candidates(2, 2, 1) - 1  # the all-even matrix 2I is skipped
    P = conjugate(make_presentation(2, 2, [[1, 0, 0, 0, 0, 0], [0, 0, 0, 1, 0, 0],
                                           [0, 0, 0, 0, 0, 1]]), diagonal_scaling(2, 2))
    cert = certify_or_search_minimal(P, 2, 1)
    assert cert.status == IMPROVED and cert.new_ord == 0 and cert.heuristic


# ---------------------------------------------------------------------------
# divisor and globalization

def test_divisor_examples():
    assert minimal_resultant_divisor(make_presentation(1, 2, [1, 0, -1, 0, 1, 0])).divisor == {}
    assert minimal_resultant_divisor(TWO_X2).divisor == {}
    P = make_presentation(1, 2, [3, 0, 1, 0, 1, 0])
    rep = minimal_resultant_divisor(P, 3)
    assert rep.divisor == {p: _brute_min(P, p, 4) for p in [3] if _brute_min(P, p, 4)}
    assert rep.divisor == {3: 1}


@pytest.mark.parametrize("seed", range(8))
def test_divisor_matches_brute_force(seed):
    r = random.Random(seed)
    base = good_reduction_map(r, 1, 2, (2, 3), box=3)
    P = conjugated_good(base, r.choice([2, 3]))
    rep = minimal_resultant_divisor(P, 3)
    rho = resultant(primitive_integral(P))
    for p in rep.certificates:
        assert ord_p(rho, p) > 0
        m = _brute_min(P, p, effective_bound(1, p, 4))
        assert rep.divisor.get(p, 0) == m


def test_globalize_examples():
    rep = globalize_over_Q(TWO_X2)
    assert projectively_equal(rep.presentation, SQUARES)
    rep = globalize_over_Q(SQUARES)
    assert rep.presentation == SQUARES and rep.steps == []
    P = conjugate(SQUARES, diagonal_scaling(1, 6))
    rep = globalize_over_Q(P)
    assert rep.checks_ok
    assert projectively_equal(rep.presentation, SQUARES)
    assert [s.p for s in rep.steps] == [2, 3]


@given(seeds)
@settings(max_examples=8)
def test_globalize_two_primes(seed):
    r = rng(seed)
    p, q = r.choice([(2, 3), (2, 5), (3, 5)])
    base = good_reduction_map(r, 1, 2, (p, q), box=3)
    P = conjugate(base, diagonal_scaling(1, p * q))
    rep = globalize_over_Q(P)
    assert rep.checks_ok
    assert _ord(rep.presentation, p) == 0 and _ord(rep.presentation, q) == 0
