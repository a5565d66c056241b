"""JSON encodings of series, Weierstrass forms, polynomials and reports."""
from __future__ import annotations

import json
from fractions import Fraction

from .errors import ArtinError
from .series import AtLeast, MultiPoly, Series1, Series2, as_coeff

SCHEMA_VERSION = 1


def frac_str(c: Fraction) -> str:
    return f"{c.numerator}/{c.denominator}"


def series_to_json(s) -> dict:
    if isinstance(s, Series2):
        terms = [[a, b, frac_str(c)] for (a, b), c in sorted(s.items())]
        return {"vars": ["t", "z"], "prec": s.prec, "terms": terms}
    if isinstance(s, Series1):
        terms = [[e, frac_str(c)] for (e,), c in sorted(s.items())]
        return {"vars": ["t"], "prec": s.prec, "terms": terms}
    raise TypeError(f"not a series: {s!r}")


def series_from_json(obj):
    try:
        names = list(obj.get("vars", ["t", "z"]))
        prec = int(obj["prec"])
        raw = obj["terms"]
    except (KeyError, TypeError, AttributeError) as exc:
        raise ArtinError(f"malformed series object: {exc}") from exc
    try:
        if names == ["t", "z"]:
            return Series2({(int(a), int(b)): as_coeff(c) for a, b, c in raw}, prec)
        if names == ["t"]:
            return Series1({int(e): as_coeff(c) for e, c in raw}, prec)
    except (ValueError, ZeroDivisionError) as exc:
        raise ArtinError(f"malformed series terms: {exc}") from exc
    raise ArtinError(f"unsupported variable list {names}")


def order_to_json(o):
    if isinstance(o, AtLeast):
        return {"at_least": o.bound}
    return o


def form_to_json(form) -> dict:
    return {
        "unit": series_to_json(form.unit),
        "degree": form.degree,
        "coeffs": [series_to_json(a) for a in form.coeffs],
        "certified_prec": form.certified_prec,
    }


def poly_to_json(p: MultiPoly, pinned=None) -> dict:
    out = {
        "vars": list(p.variables),
        "terms": [[list(e), frac_str(c)] for e, c in p.sorted_items()],
    }
    if pinned:
        out["pinned"] = dict(pinned)
    return out


def poly_from_json(obj):
    """Returns ``(poly, pinned)``; ``pinned`` maps variable names to ``"t"`` or ``"z"``."""
    try:
        p = MultiPoly(obj["vars"], {tuple(e): as_coeff(c) for e, c in obj["terms"]})
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        raise ArtinError(f"malformed polynomial object: {exc}") from exc
    pinned = dict(obj.get("pinned", {}))
    for name, val in pinned.items():
        if name not in p.variables or val not in ("t", "z"):
            raise ArtinError(f"bad pinned variable {name!r} -> {val!r}")
    return p, pinned


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def load(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ArtinError(f"cannot read {path}: {exc}") from exc
