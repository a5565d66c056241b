"""Experiments: q-th roots, coprime powers, approximate-solution searches and
the end-to-end decoupling check.
"""
from __future__ import annotations

import itertools
import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

import gmpy2

from .errors import BudgetExceeded, IncompatibleOrders, NotCoprime, PrecisionExhausted
from .io import SCHEMA_VERSION, frac_str, order_to_json, series_to_json
from .jets import BinomialSystem, decouple, jet_identity_check
from .series import (
    AtLeast, MultiPoly, OrderResult, Series2, as_coeff, meets, order_value, substitute,
)


# -- roots ------------------------------------------------------------------


@dataclass(frozen=True)
class NoRoot:
    """Why ``s`` has no ``q``-th root.

    ``over_extension`` is True when no root exists over any field extension
    either; False means the obstruction is rationality.
    """

    reason: str
    detail: str
    over_extension: bool


def _rational_root(c: Fraction, q: int):
    if c < 0 and q % 2 == 0:
        return None
    sign = -1 if c < 0 else 1
    num, ok1 = gmpy2.iroot(abs(c.numerator), q)
    den, ok2 = gmpy2.iroot(c.denominator, q)
    if not (ok1 and ok2):
        return None
    return sign * Fraction(int(num), int(den))


def _upoly_mul(a, b, cap=None):
    out = {}
    for i, x in a.items():
        for j, y in b.items():
            if cap is not None and i + j > cap:
                continue
            out[i + j] = out.get(i + j, 0) + x * y
    return {k: v for k, v in out.items() if v}


def _upoly_pow(a, k):
    out = {0: Fraction(1)}
    for _ in range(k):
        out = _upoly_mul(out, a)
    return out


def _upoly_divmod(num, den):
    """Exact division of univariate polynomials stored as ``{exponent: coeff}``."""
    num = dict(num)
    top = max(den)
    lead = den[top]
    quo = {}
    while num:
        k = max(num)
        if k < top:
            break
        c = num[k] / lead
        quo[k - top] = c
        for e, v in den.items():
            key = e + k - top
            w = num.get(key, 0) - c * v
            if w:
                num[key] = w
            else:
                num.pop(key, None)
    return quo, num


def _form_to_upoly(form: Mapping):
    return {a: c for (a, _), c in form.items()}


def _upoly_to_form(poly, degree):
    return {(a, degree - a): c for a, c in poly.items()}


def _leading_form_root(form, m, q):
    """A rational form G of degree m/q with G^q equal to the given form."""
    ell = _form_to_upoly(form)
    a0, top = min(ell), max(ell)
    if a0 % q or (top - a0) % q:
        return NoRoot("leading_form", "leading form is not a q-th power over Q", False)
    c = ell[a0]
    root_c = _rational_root(c, q)
    if root_c is None:
        return NoRoot("leading_coefficient", f"{c} is not a rational {q}-th power", False)
    h = {e - a0: v / c for e, v in ell.items() if e != a0}
    K = (top - a0) // q
    # (1 + h)^(1/q) by the binomial series, truncated at degree K
    w, hk, binom = {0: Fraction(1)}, {0: Fraction(1)}, Fraction(1)
    for k in range(1, K + 1):
        binom = binom * (Fraction(1, q) - (k - 1)) / k
        hk = _upoly_mul(hk, h, cap=K)
        for e, v in hk.items():
            w[e] = w.get(e, 0) + binom * v
    g = {e + a0 // q: v * root_c for e, v in w.items() if v}
    if _upoly_pow(g, q) != ell:
        return NoRoot("leading_form", "leading form is not a q-th power over Q", False)
    return _upoly_to_form(g, m // q)


def qth_root(s: Series2, q: int):
    """A ``v`` with ``v^q = s`` modulo ``(t,z)^(N - ord(s)(q-1)/q)``, or :class:`NoRoot`.

    The root is normalized so that the coefficient of the largest z-power in
    its leading form is positive.
    """
    if q < 2:
        raise ValueError("q must be at least 2")
    m = s.ord()
    if isinstance(m, AtLeast):
        raise PrecisionExhausted("cannot take a root of a series vanishing at its precision")
    if m % q:
        return NoRoot("order", f"order {m} is not divisible by {q}", True)
    r0 = m // q
    G = _leading_form_root(s.leading_form(), m, q)
    if isinstance(G, NoRoot):
        return G
    prec = s.prec - (q - 1) * r0
    B = _form_to_upoly({e: c * q for e, c in (Series2(G, m + 1) ** (q - 1)).leading_form().items()})
    v = Series2(G, prec)
    for delta in range(1, prec - r0):
        deg = m + delta
        power = v.truncate(min(deg + 1, prec)) if deg + 1 <= prec else v
        vq = Series2(dict(power.items()), deg + 1) ** q
        rhs = {a: s.coeff(a, deg - a) - vq.coeff(a, deg - a) for a in range(deg + 1)}
        rhs = {a: c for a, c in rhs.items() if c}
        if not rhs:
            continue
        quo, rem = _upoly_divmod(rhs, B)
        if rem or (quo and max(quo) > r0 + delta):
            return NoRoot("lifting", f"lifting fails at total degree {deg}", True)
        v = v + Series2(_upoly_to_form(quo, r0 + delta), prec)
    return v


def coprime_pair(v: Series2, p: int, q: int):
    """``(v^q, v^p)``, an exact solution of ``X^p = Y^q``."""
    if math.gcd(p, q) != 1:
        raise NotCoprime(f"gcd({p}, {q}) = {math.gcd(p, q)}")
    return v**q, v**p


def power_distance(x: Series2, u: Series2, p: int, q: int) -> OrderResult:
    return (x**p - u**q).ord()


def x2_zy2_family(m: int, prec: int):
    """``x = t (t^2 - z)^m``, ``y = (t^2 - z)^m``; then ``x^2 - z y^2 = (t^2 - z)^(2m+1)``."""
    w = Series2({(2, 0): 1, (0, 1): -1}, prec) ** m
    return Series2.t(prec) * w, w


# -- reports ----------------------------------------------------------------


@dataclass
class ExperimentReport:
    description: str
    orders: dict = field(default_factory=dict)
    thresholds: dict = field(default_factory=dict)
    verdicts: list = field(default_factory=list)
    timings_ms: dict = field(default_factory=dict)
    details: dict = field(default_factory=dict)

    @property
    def passed(self):
        return "fail" not in self.verdicts

    def to_json(self, timings=True):
        def enc(v):
            if isinstance(v, dict):
                return {str(k): enc(x) for k, x in v.items()}
            if isinstance(v, (list, tuple)):
                return [enc(x) for x in v]
            if isinstance(v, AtLeast):
                return order_to_json(v)
            if isinstance(v, Fraction):
                return frac_str(v)
            if hasattr(v, "terms") and hasattr(v, "prec"):
                return series_to_json(v)
            return v

        out = {
            "schema_version": SCHEMA_VERSION,
            "description": self.description,
            "orders": enc(self.orders),
            "thresholds": enc(self.thresholds),
            "verdicts": list(self.verdicts),
            "details": enc(self.details),
        }
        if timings:
            out["timings_ms"] = {k: round(v, 3) for k, v in self.timings_ms.items()}
        return out


class _Timer:
    def __init__(self, report, name):
        self.report, self.name = report, name

    def __enter__(self):
        self.start = time.perf_counter()

    def __exit__(self, *exc):
        self.report.timings_ms[self.name] = (time.perf_counter() - self.start) * 1000


# -- search -------------------------------------------------------------------


@dataclass(frozen=True)
class SearchSpace:
    """Finite set of candidate tuples.

    ``coefficient-lattice``: each free unknown is ``sum c_m * m`` over the
    first ``support`` nonconstant monomials in graded order (z before t
    within a degree) with ``c_m`` taken from ``coefficients``.
    ``monomial-family``: the built-in ``x2-zy2`` family for ``m = 1..support``.
    """

    kind: str
    support: int
    coefficients: tuple = (Fraction(-1), Fraction(0), Fraction(1))
    precision: int = 8
    max_candidates: int = 10**6
    family: str = "x2-zy2"

    def __post_init__(self):
        if self.kind not in ("coefficient-lattice", "monomial-family"):
            raise ValueError(f"unknown search kind {self.kind!r}")
        object.__setattr__(self, "coefficients", tuple(as_coeff(c) for c in self.coefficients))

    def size(self, nfree: int) -> int:
        if self.kind == "monomial-family":
            return self.support
        return len(self.coefficients) ** (self.support * nfree)

    def monomials(self):
        out = []
        deg = 1
        while len(out) < self.support:
            for b in range(deg, -1, -1):
                out.append((deg - b, b))
            deg += 1
        return out[: self.support]

    @classmethod
    def from_json(cls, obj):
        return cls(
            kind=obj["kind"],
            support=int(obj["support"]),
            coefficients=tuple(obj.get("coefficients", ["-1", "0", "1"])),
            precision=int(obj.get("prec", 8)),
            max_candidates=int(obj.get("max_candidates", 10**6)),
            family=obj.get("family", "x2-zy2"),
        )

    def to_json(self):
        return {
            "kind": self.kind,
            "support": self.support,
            "coefficients": [frac_str(c) for c in self.coefficients],
            "prec": self.precision,
            "max_candidates": self.max_candidates,
            "family": self.family,
        }


def _candidates(space: SearchSpace, nfree: int):
    N = space.precision
    if space.kind == "monomial-family":
        if space.family != "x2-zy2" or nfree != 2:
            raise ValueError("the x2-zy2 family needs exactly two free unknowns")
        for m in range(1, space.support + 1):
            yield {"m": m}, list(x2_zy2_family(m, N))
        return
    monos = space.monomials()
    per_var = [
        Series2(dict(zip(monos, cs)), N)
        for cs in itertools.product(space.coefficients, repeat=len(monos))
    ]
    for combo in itertools.product(range(len(per_var)), repeat=nfree):
        yield {"index": list(combo)}, [per_var[c] for c in combo]


def _pinned_series(name, N):
    return Series2.t(N) if name == "t" else Series2.z(N)


def _binomial_shape(f: MultiPoly, free):
    """``(p, q, a, b)`` when ``f = a X^p + b Y^q`` in the two free unknowns."""
    if len(free) != 2 or len(f.terms) != 2:
        return None
    ix, iy = (f.variables.index(v) for v in free)
    p = q = None
    coeffs = {}
    for e, c in f.items():
        others = [k for j, k in enumerate(e) if j not in (ix, iy)]
        if any(others):
            return None
        if e[ix] and not e[iy]:
            p, coeffs["a"] = e[ix], c
        elif e[iy] and not e[ix]:
            q, coeffs["b"] = e[iy], c
    if p is None or q is None or math.gcd(p, q) != 1 or coeffs["a"] != -coeffs["b"]:
        return None
    return p, q


def _closeness(xs, sol):
    """Certified order of ``xs - sol``; an exact match counts as the working precision."""
    return min(order_value((x - s).ord()) for x, s in zip(xs, sol))


def certified_closeness(f: MultiPoly, xs, free, pinned_values, exact_solutions=()):
    """Largest certified ``c`` with ``xs`` within ``(t,z)^c`` of an exact solution, or None."""
    best = None
    sources = []
    N = min(x.prec for x in xs)
    zero = [Series2.zero(N) for _ in xs]
    full = []
    for v in f.variables:
        full.append(pinned_values[v] if v in pinned_values else zero[free.index(v)])
    if substitute(f, full).is_zero():
        sources.append(("zero", zero))
    shape = _binomial_shape(f, free)
    if shape:
        p, q = shape
        x, y = xs
        for base, power in ((x, q), (y, p)):
            if base.is_zero():
                continue
            v = base if power == 1 else qth_root(base, power)
            if isinstance(v, NoRoot):
                continue
            for sign in (1, -1):
                a, b = coprime_pair(v * sign, p, q)
                sources.append(("monomial-curve", [a, b]))
    for sol in exact_solutions:
        sources.append(("supplied", list(sol)))
    for name, sol in sources:
        c = _closeness(xs, sol)
        if best is None or c > best[0]:
            best = (c, name)
    return best


def empirical_lower_bound(
    f: MultiPoly,
    i: int,
    space: SearchSpace,
    pinned: Mapping[str, str] | None = None,
    exact_solutions: Sequence = (),
) -> ExperimentReport:
    """Best ``ord f(x)`` over candidates whose unknowns all have order ``< i``."""
    pinned = dict(pinned or {})
    free = [v for v in f.variables if v not in pinned]
    size = space.size(len(free))
    report = ExperimentReport(
        description=f"search f = {f.to_text()} with i = {i}",
        thresholds={"i": i},
        details={"space": space.to_json(), "enumeration_size": size, "pinned": pinned},
    )
    if size > space.max_candidates:
        raise BudgetExceeded(f"search space has {size} candidates > {space.max_candidates}")
    N = space.precision
    pinned_values = {v: _pinned_series(pinned[v], N) for v in pinned}
    best = None
    examined = exact_hits = 0
    with _Timer(report, "search"):
        for label, xs in _candidates(space, len(free)):
            if not all(meets(i, 0) and not meets(x.ord(), i) for x in xs):
                continue
            examined += 1
            args = [pinned_values[v] if v in pinned_values else xs[free.index(v)] for v in f.variables]
            o = substitute(f, args).ord()
            if isinstance(o, AtLeast):
                exact_hits += 1
                continue
            if best is None or o > best[0]:
                best = (o, label, xs)
    report.details.update({"examined": examined, "exact_hits": exact_hits})
    if f.total_degree() <= 1:
        report.verdicts.append("TrivialInstance")
    if best is None:
        report.verdicts.append("no-candidate")
        return report
    o, label, xs = best
    report.orders = {"f": o, **{v: x.ord() for v, x in zip(free, xs)}}
    report.details["witness"] = {"label": label, **{v: x for v, x in zip(free, xs)}}
    with _Timer(report, "certify"):
        cert = certified_closeness(f, xs, free, pinned_values, exact_solutions)
    if cert is None:
        report.verdicts.append("no certificate")
    else:
        report.details["certified_closeness"] = {"order": cert[0], "source": cert[1]}
        report.verdicts.append(f"certified:{cert[1]}")
    return report


# -- pipeline -------------------------------------------------------------------


def verify_decoupling_pipeline(sys: BinomialSystem, x: Sequence[Series2], i: int) -> ExperimentReport:
    """Run regularization, preparation, decoupling and the jet identity on one instance."""
    report = ExperimentReport(description=f"decouple {len(sys.binomials)} binomial(s), i = {i}")
    report.orders["x"] = [s.ord() for s in x]
    report.orders["f"] = [v.ord() for v in sys.evaluate(list(x))]
    report.thresholds["i"] = i
    try:
        with _Timer(report, "decouple"):
            inst = decouple(sys, x, i)
    except IncompatibleOrders as exc:
        report.verdicts.append("Incompatible")
        report.details["incompatible"] = {"binomial": exc.k, "message": str(exc)}
        return report
    report.thresholds.update({"D": inst.D, "i-D": inst.threshold})
    report.orders.update(
        {"d": list(inst.orders), "unit_residuals": inst.unit_orders, "jet_residuals": inst.jet_orders}
    )
    report.details.update(
        {
            "shear": inst.shear,
            "weights": list(inst.weights),
            "certified_prec": inst.certified_prec,
            "units": [fm.unit for fm in inst.forms],
        }
    )
    with _Timer(report, "jet_identity"):
        assignment = {
            f"x_{j}_{l}": a
            for j, fm in enumerate(inst.forms, start=1)
            for l, a in enumerate(fm.coeffs)
        }
        identity_ok = jet_identity_check(sys, inst.orders, assignment, inst.jets)
    with _Timer(report, "reassembly"):
        from .series import shear

        reassembly_ok = all(
            fm.reassemble().agrees_with(shear(s, inst.shear).truncate(fm.unit.prec), fm.unit.prec)
            for fm, s in zip(inst.forms, x)
        )
    report.verdicts.append("hypothesis_holds" if inst.hypothesis_holds else "hypothesis_fails")
    report.verdicts.append("units_certified" if inst.units_certified else "units_not_certified")
    report.verdicts.append("jets_certified" if inst.jets_certified else "jets_not_certified")
    report.verdicts.append("jet_identity_ok" if identity_ok else "jet_identity_failed")
    report.verdicts.append("reassembly_ok" if reassembly_ok else "reassembly_failed")
    ok = inst.certified and identity_ok and reassembly_ok
    report.verdicts.append("pass" if ok else "fail")
    return report
