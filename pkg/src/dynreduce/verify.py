"""Property suites run from the command line (``dynreduce verify``).

Each suite draws a deterministic corpus from a seed, checks one family of
properties item by item, and reports pass/fail counts together with the first
failing item as a morphism document.
"""

from __future__ import annotations

import itertools
import os
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .arith import UsageError, ord_p, ord_p_tuple
from .corpus import (
    diagonal_scaling,
    good_reduction_map,
    random_matrix,
    random_p_unimodular,
    random_presentation,
    semistable_corpus,
)
from .io import presentation_to_doc
from .minimality import globalize_over_Q, search
from .presentation import ReducedPoint, conjugate, primitive_integral
from .resultant import check_conjugation_valuation, resultant, valuation_report
from .semistability import (
    all_reduced_points,
    is_semistable,
    is_semistable_presentation,
    reduced_resultant_nonzero,
    verify_witness,
)

SUITES = ("prop22", "homss", "theorem", "globalize")

DEFAULT_PARAMS = {
    "prop22": {"n": [1], "d": [2], "p": [2, 3, 5]},
    "homss": {"n": [1], "d": [2], "p": [3]},
    "theorem": {"n": [1], "d": [2, 3], "p": [2, 3, 5], "B": [3]},
    "globalize": {"n": [1], "d": [2, 3], "p": [2, 3, 5], "B": [3]},
}


def parse_params(text: Optional[str]) -> dict:
    """Parse "n=1,d=2..3,p=2,3,5,B=3" into {"n": [1], "d": [2, 3], ...}."""
    out: dict = {}
    if not text:
        return out
    key = None
    for token in text.split(","):
        token = token.strip()
        if not token:
            continue
        if "=" in token:
            key, token = (s.strip() for s in token.split("=", 1))
            out[key] = []
        if key is None:
            raise UsageError(f"params: value {token!r} before any key")
        try:
            if ".." in token:
                lo, hi = token.split("..")
                out[key].extend(range(int(lo), int(hi) + 1))
            else:
                out[key].append(int(token))
        except ValueError:
            raise UsageError(f"params: {token!r} is not an integer or range") from None
    return out


@dataclass
class SuiteReport:
    suite: str
    seed: int
    params: dict
    passed: int = 0
    failed: int = 0
    first_failure: Optional[dict] = None
    notes: dict = field(default_factory=dict)

    def as_dict(self):
        return {"suite": self.suite, "seed": self.seed, "params": self.params,
                "passed": self.passed, "failed": self.failed,
                "total": self.passed + self.failed,
                "first_counterexample": self.first_failure, "notes": self.notes}


# ---------------------------------------------------------------------------
# items: each returns (ok, failure document or None, note)

def _prop22_item(n, d, p, seed):
    rng = random.Random(seed)
    P = random_presentation(rng, n, d, denominators=True)
    base = valuation_report(P, p)
    problems = []
    k = rng.randint(-3, 3)
    if valuation_report(P.scale(Fraction(p) ** k), p).ord_R_phi != base.ord_R_phi:
        problems.append("scaling")
    G = random_matrix(rng, n + 1)
    chk = check_conjugation_valuation(P, G, p)
    if not chk.equality_holds:
        problems.append("conjugation-equality")
    if not chk.inequality_holds:
        problems.append("conjugation-inequality")
    U = random_p_unimodular(rng, n + 1, p)
    Q = conjugate(P, U)
    if ord_p(resultant(Q), p) != base.ord_rho or ord_p_tuple(Q.flat, p) != base.min_coeff_ord:
        problems.append("unimodular-invariance")
    if problems:
        return False, presentation_to_doc(P, label="prop22 counterexample", p=p, failed=problems,
                                          gamma=[[str(x) for x in r] for r in G],
                                          unimodular=[[str(x) for x in r] for r in U]), None
    return True, None, None


def _homss_item(n, d, p, coords):
    x = ReducedPoint(n, d, p, tuple(coords))
    res = is_semistable(x)
    bad = None
    if not res.semistable and not verify_witness(x, res.witness):
        bad = "witness-rejected"
    elif not res.semistable and reduced_resultant_nonzero(x):
        bad = "morphism-judged-unstable"
    if bad:
        return False, presentation_to_doc(x.lift(), label="homss counterexample", p=p,
                                          failed=[bad]), None
    return True, None, "good" if reduced_resultant_nonzero(x) else "bad"


def _theorem_item(d, p, bound, seed):
    [(P, p)] = semistable_corpus(seed, 1, ds=(d,), primes=(p,))
    achieved = valuation_report(P, p).ord_R_phi
    ok = is_semistable_presentation(P, p).semistable
    improvement = None
    for o, cand in search(P, p, bound):
        if o < achieved:
            improvement = cand
            ok = False
            break
    if not ok:
        extra = {"gamma": [list(r) for r in improvement.gamma]} if improvement else {}
        return False, presentation_to_doc(P, label="theorem counterexample", p=p, **extra), None
    return True, None, "bad" if achieved > 0 else "good"


def _globalize_item(n, d, p, q, bound, seed):
    rng = random.Random(seed)
    base = good_reduction_map(rng, n, d, (p, q))
    P = conjugate(base, diagonal_scaling(n, p * q))
    rep = globalize_over_Q(P, bound)
    final = rep.presentation
    ok = (rep.checks_ok
          and valuation_report(final, p).ord_R_phi == 0
          and valuation_report(final, q).ord_R_phi == 0)
    if not ok:
        return False, presentation_to_doc(primitive_integral(P), label="globalize counterexample",
                                          primes=[p, q]), None
    return True, None, None


def _run_item(task):
    kind, args = task
    return {"prop22": _prop22_item, "homss": _homss_item,
            "theorem": _theorem_item, "globalize": _globalize_item}[kind](*args)


# ---------------------------------------------------------------------------

def _tasks(suite: str, seed: int, count: Optional[int], params: dict):
    rng = random.Random(seed)
    get = params.get
    if suite == "prop22":
        combos = list(itertools.product(get("n"), get("d"), get("p")))
        return [("prop22", combos[i % len(combos)] + (rng.getrandbits(64),))
                for i in range(count or 100)]
    if suite == "homss":
        tasks = []
        for n, d, p in itertools.product(get("n"), get("d"), get("p")):
            pts = [x.coords for x in all_reduced_points(n, d, p, projective=False)]
            if count is not None and count < len(pts):
                pts = rng.sample(pts, count)
            tasks.extend(("homss", (n, d, p, c)) for c in pts)
        return tasks
    if suite == "theorem":
        combos = list(itertools.product(get("d"), get("p"), get("B")))
        return [("theorem", combos[i % len(combos)] + (rng.getrandbits(64),))
                for i in range(count or 50)]
    if suite == "globalize":
        pairs = [(p, q) for p in get("p") for q in get("p") if p < q]
        if not pairs:
            raise UsageError("globalize needs at least two primes")
        combos = list(itertools.product(get("n"), get("d"), pairs, get("B")))
        tasks = []
        for i in range(count or 20):
            n, d, (p, q), b = combos[i % len(combos)]
            tasks.append(("globalize", (n, d, p, q, b, rng.getrandbits(64))))
        return tasks
    raise UsageError(f"unknown suite {suite!r}")


def run_suite(suite: str, seed: int = 0, count: Optional[int] = None,
              params: Optional[dict] = None, workers: Optional[int] = None) -> SuiteReport:
    if suite not in SUITES:
        raise UsageError(f"unknown suite {suite!r}; choose from {', '.join(SUITES)}")
    merged = dict(DEFAULT_PARAMS[suite])
    merged.update(params or {})
    tasks = _tasks(suite, seed, count, merged)
    if workers is None:
        workers = int(os.environ.get("WORKERS", "1") or 1)
    if workers > 1:
        from multiprocessing import Pool

        with Pool(workers) as pool:
            results = pool.map(_run_item, tasks, chunksize=max(1, len(tasks) // (4 * workers)))
    else:
        results = [_run_item(t) for t in tasks]
    report = SuiteReport(suite, seed, merged)
    for ok, doc, note in results:
        if ok:
            report.passed += 1
        else:
            report.failed += 1
            if report.first_failure is None:
                report.first_failure = doc
        if note:
            report.notes[note] = report.notes.get(note, 0) + 1
    return report

