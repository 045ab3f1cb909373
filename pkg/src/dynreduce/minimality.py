"""Local and global minimal resultants.

At a prime p a presentation whose reduction is semistable realizes the
minimal order of the resultant, so it is certified without search. Otherwise
a ball of lattice classes around the current coordinates is searched: for
n = 1 the candidates are

    T = [[p^a, b], [0, 1]]  and  W T W = [[1, 0], [b, p^a]],  0 <= b < p^a <= p^B,

which together reach every vertex of the Bruhat-Tits tree within distance B.
For n >= 2 the search walks Hermite normal forms and only gives upper bounds.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from itertools import product
from typing import Optional

from .arith import BudgetError, DomainError, det
from .factor import factor_integer
from .presentation import Presentation, conjugate, primitive_integral
from .resultant import resultant, valuation_report
from .semistability import DEFAULT_OPTIONS, SemistabilityOptions, is_semistable_presentation

log = logging.getLogger(__name__)

CERTIFIED = "CERTIFIED_SEMISTABLE"
EXHAUSTED = "SEARCH_EXHAUSTED"
IMPROVED = "IMPROVED"

DEFAULT_BOUND = 3
MAX_CANDIDATES = 50_000
# per-prime budget; larger balls are shrunk to the largest radius that fits
SEARCH_BUDGET = 5_000


class NotMorphismError(DomainError):
    pass


@dataclass(frozen=True)
class ConjugationCandidate:
    gamma: tuple
    key: tuple
    description: str


def n1_candidates(p: int, bound: int):
    """Swap x scaling x translation family, in tie-break order (eps, alpha, beta)."""
    for eps in (0, 1):
        for alpha in range(bound + 1):
            if eps and alpha == 0:
                continue
            for beta in range(p ** alpha):
                if eps:
                    g = ((1, 0), (beta, p ** alpha))
                else:
                    g = ((p ** alpha, beta), (0, 1))
                yield ConjugationCandidate(g, (eps, alpha, beta),
                                           f"eps={eps} alpha={alpha} beta={beta}")


def hnf_candidates(n: int, p: int, bound: int, limit: int = MAX_CANDIDATES):
    """Upper triangular Hermite forms with diagonal p^a_i (a_i <= bound), entries
    right of the diagonal in row i reduced mod p^a_i, not all divisible by p."""
    m = n + 1
    count = 0
    for a in product(range(bound + 1), repeat=m):
        slots = [(i, j) for i in range(m) for j in range(i + 1, m)]
        ranges = [range(p ** a[i]) for i, _ in slots]
        for vals in product(*ranges):
            g = [[0] * m for _ in range(m)]
            for i in range(m):
                g[i][i] = p ** a[i]
            for (i, j), v in zip(slots, vals):
                g[i][j] = v
            if all(x % p == 0 for row in g for x in row):
                continue
            count += 1
            if count > limit:
                raise BudgetError(f"more than {limit} conjugation candidates")
            yield ConjugationCandidate(tuple(map(tuple, g)), (a, vals), f"hnf a={a} off={vals}")


def count_candidates(n: int, p: int, bound: int) -> int:
    if n == 1:
        return 1 + 2 * sum(p ** a for a in range(1, bound + 1))
    m = n + 1
    total = 0
    for a in product(range(bound + 1), repeat=m):
        total += p ** sum(a[i] * (m - 1 - i) for i in range(m))
    return total


def effective_bound(n: int, p: int, bound: int, budget: int = SEARCH_BUDGET) -> int:
    """Largest b <= bound whose candidate ball has at most ``budget`` members."""
    b = bound
    while b > 0 and count_candidates(n, p, b) > budget:
        b -= 1
    return b


def candidates(n: int, p: int, bound: int):
    if n == 1:
        return n1_candidates(p, bound)
    return hnf_candidates(n, p, bound)


@dataclass
class MinimalityCertificate:
    p: int
    achieved_ord: int
    status: str
    bound: Optional[int] = None
    requested_bound: Optional[int] = None
    gamma: Optional[tuple] = None
    new_ord: Optional[int] = None
    key: Optional[tuple] = None
    # whether the reported best order is proven minimal (semistable reduction)
    certified: bool = False
    heuristic: bool = False

    @property
    def best_ord(self) -> int:
        return self.new_ord if self.status == IMPROVED else self.achieved_ord

    def as_dict(self):
        out = {"p": self.p, "status": self.status, "achieved_ord": self.achieved_ord,
               "best_ord": self.best_ord, "certified": self.certified}
        if self.status != CERTIFIED:
            out["bound"] = self.bound
            if self.requested_bound is not None and self.requested_bound != self.bound:
                out["requested_bound"] = self.requested_bound
        if self.status == IMPROVED:
            out["gamma"] = [[str(x) for x in row] for row in self.gamma]
            out["new_ord"] = self.new_ord
        if self.heuristic:
            out["heuristic"] = True
        return out


def _normalized_ord(P: Presentation, p: int) -> int:
    return valuation_report(P, p).ord_R_phi


def _require_morphism(P: Presentation):
    if resultant(P) == 0:
        raise NotMorphismError("presentation does not define a morphism")


def _semistable_or_none(P, p, opts):
    try:
        return is_semistable_presentation(P, p, opts).semistable
    except BudgetError:
        return None


def search(P: Presentation, p: int, bound: int = DEFAULT_BOUND):
    """Yield (ord, candidate) for every candidate conjugate in the ball.

    The radius is shrunk first if the ball would exceed the search budget."""
    P = primitive_integral(P)
    bound = effective_bound(P.n, p, bound)
    for cand in candidates(P.n, p, bound):
        yield _normalized_ord(conjugate(P, cand.gamma), p), cand


def certify_or_search_minimal(P: Presentation, p: int, bound: int = DEFAULT_BOUND,
                              opts: SemistabilityOptions = DEFAULT_OPTIONS) -> MinimalityCertificate:
    _require_morphism(P)
    achieved = _normalized_ord(P, p)
    if achieved == 0 or _semistable_or_none(P, p, opts):
        # ord 0 means the reduction is a morphism, and morphisms are semistable
        return MinimalityCertificate(p, achieved, CERTIFIED, certified=True)

    requested, bound = bound, effective_bound(P.n, p, bound)
    if bound < requested:
        log.info("search radius at %d reduced from %d to %d", p, requested, bound)
    best = None
    for o, cand in search(P, p, bound):
        if best is None or o < best[0]:
            best = (o, cand)
    heuristic = P.n >= 2
    if best is not None and best[0] < achieved:
        o, cand = best
        Q = conjugate(primitive_integral(P), cand.gamma)
        certified = o == 0 or bool(_semistable_or_none(Q, p, opts))
        return MinimalityCertificate(p, achieved, IMPROVED, bound, requested, cand.gamma, o,
                                     cand.key, certified=certified, heuristic=heuristic)
    return MinimalityCertificate(p, achieved, EXHAUSTED, bound, requested, heuristic=heuristic)


def verify_improvement(P: Presentation, cert: MinimalityCertificate) -> bool:
    if cert.status != IMPROVED:
        return False
    if det(cert.gamma) == 0:
        return False
    Q = conjugate(P, cert.gamma)
    return _normalized_ord(Q, cert.p) == cert.new_ord and cert.new_ord < cert.achieved_ord


# ---------------------------------------------------------------------------
# global

@dataclass
class DivisorReport:
    divisor: dict                      # prime -> multiplicity > 0
    certificates: dict                 # prime -> MinimalityCertificate
    unfactored: int = 1

    def as_dict(self):
        return {"divisor": {str(p): m for p, m in sorted(self.divisor.items())},
                "certificates": {str(p): c.as_dict() for p, c in sorted(self.certificates.items())},
                "unfactored_cofactor": str(self.unfactored)}


def bad_primes(P: Presentation):
    rho = resultant(primitive_integral(P))
    if rho == 0:
        raise NotMorphismError("presentation does not define a morphism")
    primes, cofactor = factor_integer(int(rho))
    return sorted(primes), cofactor


def minimal_resultant_divisor(P: Presentation, bound: int = DEFAULT_BOUND,
                              opts: SemistabilityOptions = DEFAULT_OPTIONS) -> DivisorReport:
    P = primitive_integral(P)
    primes, cofactor = bad_primes(P)
    if cofactor != 1:
        log.warning("resultant has an unfactored cofactor %d", cofactor)
    certs = {p: certify_or_search_minimal(P, p, bound, opts) for p in primes}
    divisor = {p: c.best_ord for p, c in certs.items() if c.best_ord > 0}
    return DivisorReport(divisor, certs, cofactor)


@dataclass
class GlobalStep:
    p: int
    certificate: MinimalityCertificate
    other_ords_before: dict
    other_ords_after: dict

    @property
    def invariance_ok(self) -> bool:
        return self.other_ords_before == self.other_ords_after


@dataclass
class GlobalizationReport:
    presentation: Presentation
    steps: list = field(default_factory=list)
    unfactored: int = 1

    @property
    def uncertified(self) -> list:
        return [s.p for s in self.steps if not s.certificate.certified]

    @property
    def checks_ok(self) -> bool:
        return all(s.invariance_ok for s in self.steps)

    def as_dict(self):
        from .io import presentation_to_doc

        return {
            "presentation": presentation_to_doc(self.presentation),
            "steps": [{"p": s.p, "certificate": s.certificate.as_dict(),
                       "other_primes_unchanged": s.invariance_ok} for s in self.steps],
            "uncertified_primes": self.uncertified,
            "unfactored_cofactor": str(self.unfactored),
        }


def globalize_over_Q(P: Presentation, bound: int = DEFAULT_BOUND,
                     opts: SemistabilityOptions = DEFAULT_OPTIONS) -> GlobalizationReport:
    """Apply the local improving conjugations prime by prime.

    Each local matrix has determinant a power of p and integer entries, so it is
    invertible over Z_q for q != p and leaves ord_q of the resultant unchanged;
    this is re-checked after every step.
    """
    current = primitive_integral(P)
    primes, cofactor = bad_primes(current)
    report = GlobalizationReport(current, unfactored=cofactor)
    for p in primes:
        others = [q for q in primes if q != p]
        before = {q: _normalized_ord(current, q) for q in others}
        cert = certify_or_search_minimal(current, p, bound, opts)
        if cert.status == IMPROVED:
            current = primitive_integral(conjugate(current, cert.gamma))
        after = {q: _normalized_ord(current, q) for q in others}
        report.steps.append(GlobalStep(p, cert, before, after))
        if before != after:
            log.error("conjugation at %d changed valuations at other primes", p)
    report.presentation = current
    return report


# ---------------------------------------------------------------------------
# potential good reduction

GOOD = "GOOD"
NOT_EVEN_POTENTIAL = "NOT_EVEN_POTENTIAL"
UNKNOWN = "UNKNOWN"


@dataclass
class ReductionStatus:
    status: str
    certificate: MinimalityCertificate
    semistable_presentation: Optional[Presentation] = None
    semistable_ord: Optional[int] = None

    def as_dict(self):
        from .io import presentation_to_doc

        out = {"status": self.status, "certificate": self.certificate.as_dict()}
        if self.semistable_presentation is not None:
            out["semistable_presentation"] = presentation_to_doc(self.semistable_presentation)
            out["semistable_ord"] = self.semistable_ord
        return out


def potential_good_reduction_status(P: Presentation, p: int, bound: int = DEFAULT_BOUND,
                                    opts: SemistabilityOptions = DEFAULT_OPTIONS) -> ReductionStatus:
    """GOOD, NOT_EVEN_POTENTIAL (a semistable presentation with bad reduction
    exists, so no base extension can help), or UNKNOWN."""
    cert = certify_or_search_minimal(P, p, bound, opts)
    if cert.best_ord == 0:
        return ReductionStatus(GOOD, cert)
    P = primitive_integral(P)
    if cert.status == CERTIFIED:
        return ReductionStatus(NOT_EVEN_POTENTIAL, cert, P, cert.achieved_ord)
    # a semistable presentation realizes the minimum, so only the best
    # candidates can be semistable
    for o, cand in search(P, p, bound):
        if o != cert.best_ord:
            continue
        Q = primitive_integral(conjugate(P, cand.gamma))
        if _semistable_or_none(Q, p, opts):
            return ReductionStatus(NOT_EVEN_POTENTIAL, cert, Q, o)
    return ReductionStatus(UNKNOWN, cert)
