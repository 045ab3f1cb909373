"""Morphism documents and report serialization.

A morphism document is a JSON object::

    {"format": 1, "n": 1, "d": 2, "label": "optional",
     "forms": [[["1", [2, 0]], ["-1", [0, 2]]], [["1", [1, 1]]]]}

Each form lists [coefficient, exponent vector] pairs; coefficients are decimal
strings "num" or "num/den" and unlisted monomials are zero.
"""

from __future__ import annotations

import json
import re
from fractions import Fraction

from .arith import DomainError
from .presentation import Presentation, PresentationError, from_forms, monomials

FORMAT = 1
_RATIONAL = re.compile(r"^\s*[+-]?\d+(\s*/\s*\d+)?\s*$")


class DocumentError(DomainError):
    pass


def parse_rational(s, where: str = "value") -> Fraction:
    if isinstance(s, bool) or not isinstance(s, (str, int)):
        raise DocumentError(f"{where}: expected a rational string, got {s!r}")
    if isinstance(s, str) and not _RATIONAL.match(s):
        raise DocumentError(f"{where}: {s!r} is not an exact rational")
    try:
        return Fraction(s.replace(" ", "") if isinstance(s, str) else s)
    except ZeroDivisionError:
        raise DocumentError(f"{where}: zero denominator") from None


def loads(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None


def doc_to_presentation(doc) -> Presentation:
    if not isinstance(doc, dict):
        raise DocumentError("document must be a JSON object")
    fmt = doc.get("format", FORMAT)
    if fmt != FORMAT:
        raise DocumentError(f"format: unsupported version {fmt!r}")
    for key in ("n", "d", "forms"):
        if key not in doc:
            raise DocumentError(f"{key}: missing field")
    n, d = doc["n"], doc["d"]
    if not isinstance(n, int) or not isinstance(d, int) or n < 1 or d < 1:
        raise DocumentError("n, d: must be positive integers")
    forms = doc["forms"]
    if not isinstance(forms, list) or len(forms) != n + 1:
        raise DocumentError(f"forms: expected a list of {n + 1} forms")
    sparse = []
    for i, form in enumerate(forms):
        if not isinstance(form, list):
            raise DocumentError(f"forms[{i}]: expected a list of terms")
        terms: dict = {}
        for k, term in enumerate(form):
            where = f"forms[{i}][{k}]"
            if not isinstance(term, list) or len(term) != 2:
                raise DocumentError(f"{where}: expected [coefficient, exponents]")
            c = parse_rational(term[0], where + "[0]")
            e = term[1]
            if (not isinstance(e, list) or len(e) != n + 1
                    or not all(isinstance(v, int) and v >= 0 for v in e)):
                raise DocumentError(f"{where}[1]: expected {n + 1} nonnegative integers")
            if sum(e) != d:
                raise DocumentError(f"{where}[1]: exponents sum to {sum(e)}, not {d}")
            e = tuple(e)
            terms[e] = terms.get(e, Fraction(0)) + c
        sparse.append(terms)
    try:
        return from_forms(n, d, sparse)
    except PresentationError as exc:
        raise DocumentError(str(exc)) from None


def presentation_to_doc(P: Presentation, label=None, **extra) -> dict:
    mons = monomials(P.n, P.d)
    doc = {
        "format": FORMAT,
        "n": P.n,
        "d": P.d,
        "forms": [[[str(c), list(e)] for e, c in zip(mons, f) if c != 0] for f in P.coeffs],
    }
    if label is not None:
        doc["label"] = label
    doc.update(extra)
    return doc


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def matrix_from_string(s: str, m: int):
    """Parse "a,b;c,d" or a JSON nested list into an m x m rational matrix."""
    s = s.strip()
    if s.startswith("["):
        rows = loads(s)
    else:
        rows = [r.split(",") for r in s.split(";")]
    if not isinstance(rows, list) or len(rows) != m or any(
            not isinstance(r, list) or len(r) != m for r in rows):
        raise DocumentError(f"gamma: expected a {m}x{m} matrix")
    return tuple(tuple(parse_rational(v.strip() if isinstance(v, str) else v, "gamma") for v in r)
                 for r in rows)
