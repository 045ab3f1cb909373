"""Command-line interface.

Every command reads a morphism document (a path, or "-" for stdin) and prints
a JSON report. Exit status: 0 on success, 1 on domain or usage errors (bad
input, non-morphism, singular matrix, failed verification), 2 when a
configured budget is exceeded.
"""

from __future__ import annotations

import argparse
import random
import sys

from . import __version__
from .arith import BudgetError, DomainError, UsageError, check_prime
from .corpus import boundary_scan, conjugated_good, good_reduction_map, random_presentation
from .io import (
    FORMAT,
    DocumentError,
    doc_to_presentation,
    dumps,
    loads,
    matrix_from_string,
    presentation_to_doc,
)
from .minimality import (
    DEFAULT_BOUND,
    certify_or_search_minimal,
    globalize_over_Q,
    minimal_resultant_divisor,
    potential_good_reduction_status,
    verify_improvement,
)
from .presentation import conjugate, normalize_at, primitive_integral, reduce_at
from .resultant import check_conjugation_valuation, resultant, valuation_report
from .semistability import SemistabilityOptions, is_semistable, verify_witness
from .verify import SUITES, parse_params, run_suite

CORPUS_KINDS = ("random", "conjugated-good", "boundary-scan")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(1)


def _read_doc(path: str):
    if path == "-":
        text = sys.stdin.read()
    else:
        try:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise UsageError(f"{path}: {exc.strerror}") from None
    return doc_to_presentation(loads(text))


def _prime(s: str) -> int:
    try:
        return check_prime(int(s))
    except (ValueError, UsageError):
        raise argparse.ArgumentTypeError(f"{s!r} is not a prime") from None


def _nonneg(s: str) -> int:
    try:
        v = int(s)
    except ValueError:
        v = -1
    if v < 0:
        raise argparse.ArgumentTypeError(f"{s!r} is not a nonnegative integer")
    return v


def _options(args) -> SemistabilityOptions:
    return SemistabilityOptions(degree=getattr(args, "degree", 1),
                                boundary=getattr(args, "boundary", False))


def _report(command: str, options: dict, result) -> dict:
    return {"format": FORMAT, "command": command, "options": options, "result": result}


# ---------------------------------------------------------------------------
# commands: each returns (report, exit status)

def cmd_resultant(args):
    P = _read_doc(args.doc)
    return _report("resultant", {}, {"resultant": str(resultant(P))}), 0


def cmd_valuation(args):
    P = _read_doc(args.doc)
    rep = valuation_report(P, args.p).as_dict()
    rep["resultant"] = str(resultant(P))
    return _report("valuation", {"p": args.p}, rep), 0


def cmd_conjugate(args):
    P = _read_doc(args.doc)
    G = matrix_from_string(args.gamma, P.n + 1)
    Q = conjugate(P, G)
    result = {"presentation": presentation_to_doc(Q)}
    if args.p is not None:
        chk = check_conjugation_valuation(P, G, args.p)
        result["check"] = {"ord_rho_after": str(chk.lhs), "ord_rho_formula": str(chk.rhs_formula),
                           "equality_holds": chk.equality_holds,
                           "min_ord_after": str(chk.min_ord_after),
                           "min_ord_bound": str(chk.min_ord_bound),
                           "inequality_holds": chk.inequality_holds}
    opts = {"gamma": [[str(x) for x in row] for row in G], "p": args.p}
    return _report("conjugate", opts, result), 0


def cmd_semistable(args):
    P = _read_doc(args.doc)
    x = reduce_at(normalize_at(P, args.p))
    res = is_semistable(x, _options(args))
    out = res.as_dict()
    out["verdict"] = "semistable" if res.semistable else "unstable"
    out["reduction"] = presentation_to_doc(x.lift())
    if res.witness is not None:
        out["witness_verified"] = verify_witness(x, res.witness)
    opts = {"p": args.p, "degree": args.degree, "boundary": args.boundary}
    return _report("semistable", opts, out), 0


def cmd_minimize(args):
    P = _read_doc(args.doc)
    cert = certify_or_search_minimal(P, args.p, args.bound, _options(args))
    out = cert.as_dict()
    if cert.gamma is not None:
        out["verified"] = verify_improvement(primitive_integral(P), cert)
        out["presentation"] = presentation_to_doc(
            primitive_integral(conjugate(primitive_integral(P), cert.gamma)))
    return _report("minimize", {"p": args.p, "bound": args.bound}, out), 0


def cmd_divisor(args):
    P = _read_doc(args.doc)
    rep = minimal_resultant_divisor(P, args.bound, _options(args))
    return _report("divisor", {"bound": args.bound}, rep.as_dict()), 0


def cmd_globalize(args):
    P = _read_doc(args.doc)
    rep = globalize_over_Q(P, args.bound, _options(args))
    return _report("globalize", {"bound": args.bound}, rep.as_dict()), 0


def cmd_pgr(args):
    P = _read_doc(args.doc)
    st = potential_good_reduction_status(P, args.p, args.bound, _options(args))
    return _report("pgr", {"p": args.p, "bound": args.bound}, st.as_dict()), 0


def cmd_verify(args):
    params = parse_params(args.params)
    rep = run_suite(args.suite, args.seed, args.count, params)
    opts = {"suite": args.suite, "seed": args.seed, "count": args.count, "params": args.params}
    return _report("verify", opts, rep.as_dict()), 0 if rep.failed == 0 else 1


def _first(params: dict, key: str, default):
    vals = params.get(key)
    return vals[0] if vals else default


def build_corpus(kind: str, seed: int, count: int, params: dict, base=None) -> dict:
    """A corpus file: {"format", "kind", "seed", "documents": [...]}"""
    rng = random.Random(seed)
    n = _first(params, "n", 1)
    d = _first(params, "d", 2)
    docs = []
    if kind == "random":
        box = _first(params, "box", 5)
        for i in range(count):
            P = random_presentation(rng, n, d, box)
            docs.append(presentation_to_doc(P, label=f"random-{i}"))
    elif kind == "conjugated-good":
        primes = params.get("p") or [2]
        k = _first(params, "k", 1)
        for p in primes:
            check_prime(p)
        if base is not None:
            for p in primes:
                Q = primitive_integral(conjugated_good(base, p, k))
                docs.append(presentation_to_doc(Q, label=f"conjugated-good p={p} k={k}", p=p))
        else:
            for i in range(count):
                p = primes[i % len(primes)]
                P = good_reduction_map(rng, n, d, (p,))
                Q = primitive_integral(conjugated_good(P, p, k))
                docs.append(presentation_to_doc(Q, label=f"conjugated-good-{i}", p=p))
    elif kind == "boundary-scan":
        p = check_prime(_first(params, "p", 2))
        for x, verdict, _ in boundary_scan(n, d, p):
            docs.append(presentation_to_doc(x.lift(), p=p, verdict=verdict))
    else:
        raise UsageError(f"unknown corpus kind {kind!r}")
    return {"format": FORMAT, "kind": kind, "seed": seed, "documents": docs}


def cmd_corpus(args):
    params = parse_params(args.params)
    base = _read_doc(args.input) if args.input else None
    corpus = build_corpus(args.kind, args.seed, args.count, params, base)
    text = dumps(corpus)
    if args.out and args.out != "-":
        try:
            with open(args.out, "w", encoding="utf-8") as fh:
                fh.write(text)
        except OSError as exc:
            raise UsageError(f"{args.out}: {exc.strerror}") from None
        summary = {"out": args.out, "documents": len(corpus["documents"])}
        opts = {"kind": args.kind, "seed": args.seed, "count": args.count, "params": args.params}
        return _report("corpus", opts, summary), 0
    return corpus, 0


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="dynreduce", description="Reduction of morphisms of projective space.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def doc_cmd(name, func, help_text):
        sp = sub.add_parser(name, help=help_text)
        sp.add_argument("doc", help='morphism document, or "-" for stdin')
        sp.set_defaults(func=func)
        return sp

    doc_cmd("resultant", cmd_resultant, "resultant of the presentation")
    sp = doc_cmd("valuation", cmd_valuation, "valuations of the resultant at p")
    sp.add_argument("--p", type=_prime, required=True)
    sp = doc_cmd("conjugate", cmd_conjugate, "conjugate by a matrix")
    sp.add_argument("--gamma", required=True, help='matrix as "a,b;c,d" or a JSON list of rows')
    sp.add_argument("--p", type=_prime, help="also check the valuation formulas at p")
    sp = doc_cmd("semistable", cmd_semistable, "semistability of the reduction at p")
    sp.add_argument("--p", type=_prime, required=True)
    sp.add_argument("--degree", type=int, default=1, help="search flags over F_{p^degree}")
    sp.add_argument("--boundary", action="store_true", help="also decide strict semistability")
    for name, func, needs_p in (("minimize", cmd_minimize, True), ("pgr", cmd_pgr, True),
                                ("divisor", cmd_divisor, False), ("globalize", cmd_globalize, False)):
        sp = doc_cmd(name, func, {"minimize": "certify or search for a minimal presentation at p",
                                  "pgr": "potential good reduction status at p",
                                  "divisor": "minimal resultant divisor",
                                  "globalize": "presentation minimal at every bad prime"}[name])
        if needs_p:
            sp.add_argument("--p", type=_prime, required=True)
        sp.add_argument("--bound", type=_nonneg, default=DEFAULT_BOUND)

    sp = sub.add_parser("verify", help="run a property suite")
    sp.add_argument("--suite", choices=SUITES, required=True)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--count", type=_nonneg)
    sp.add_argument("--params", default=None, help='e.g. "n=1,d=2..3,p=2,3,5,B=3"')
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("corpus", help="generate a corpus of morphism documents")
    sp.add_argument("--kind", choices=CORPUS_KINDS, required=True)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--count", type=_nonneg, default=20)
    sp.add_argument("--params", default=None, help='e.g. "n=1,d=3,p=2,k=1"')
    sp.add_argument("--input", help="base document for conjugated-good")
    sp.add_argument("--out", help="output file (default stdout)")
    sp.set_defaults(func=cmd_corpus)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        report, status = args.func(args)
    except BudgetError as exc:
        sys.stderr.write(f"dynreduce: budget exceeded: {exc}\n")
        return 2
    except DocumentError as exc:
        sys.stderr.write(f"dynreduce: invalid document: {exc}\n")
        return 1
    except DomainError as exc:
        sys.stderr.write(f"dynreduce: {exc}\n")
        return 1
    sys.stdout.write(dumps(report))
    return status


if __name__ == "__main__":
    sys.exit(main())
