"""Binomial systems, homogeneity weights, jet systems and the decoupling.

For a binomial ``a X^alpha + b X^beta`` and orders ``d = (d_1, ..., d_n)``
each unknown is written ``x_j = u_j * p_j`` with
``p_j = X_{j,0} + X_{j,1} z + ... + X_{j,d_j-1} z^{d_j-1} + z^{d_j}``.
The jet polynomials are the coefficients of ``z^m`` (``m < D_k``) in
``a * (prod p_j^alpha_j - prod p_j^beta_j)``; both products are monic of
degree ``D_k`` in ``z``, so the ``z^{D_k}`` coefficient vanishes. When
``a + b == 0`` this is the same as expanding ``a prod p^alpha + b prod p^beta``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .errors import ArtinError, IncompatibleOrders, PreconditionViolated, PrecisionTooLow
from .series import (
    MultiPoly,
    Series2,
    as_coeff,
    meets,
    shear,
    substitute,
    z_regularize,
)
from .weierstrass import prepare


@dataclass(frozen=True)
class Binomial:
    a: Fraction
    alpha: tuple
    b: Fraction
    beta: tuple

    def __post_init__(self):
        object.__setattr__(self, "a", as_coeff(self.a))
        object.__setattr__(self, "b", as_coeff(self.b))
        object.__setattr__(self, "alpha", tuple(int(e) for e in self.alpha))
        object.__setattr__(self, "beta", tuple(int(e) for e in self.beta))
        if not self.a or not self.b:
            raise ArtinError("binomial coefficients must be nonzero")
        if len(self.alpha) != len(self.beta):
            raise ArtinError("exponent vectors of different lengths")
        if self.alpha == self.beta:
            raise ArtinError("degenerate binomial: alpha == beta")
        if min(self.alpha + self.beta) < 0:
            raise ArtinError("negative exponent")

    @property
    def degree(self):
        return max(sum(self.alpha), sum(self.beta))

    def as_poly(self, variables) -> MultiPoly:
        return MultiPoly(variables, {self.alpha: self.a, self.beta: self.b})

    def evaluate(self, xs):
        def mono(exps):
            out = type(xs[0]).one(min(x.prec for x in xs))
            for x, e in zip(xs, exps):
                if e:
                    out = out * x**e
            return out

        return mono(self.alpha) * self.a + mono(self.beta) * self.b


@dataclass(frozen=True)
class BinomialSystem:
    n: int
    binomials: tuple

    def __post_init__(self):
        object.__setattr__(self, "binomials", tuple(self.binomials))
        for f in self.binomials:
            if len(f.alpha) != self.n:
                raise ArtinError(f"binomial {f} does not have {self.n} variables")

    @property
    def degree(self):
        return max(f.degree for f in self.binomials)

    def evaluate(self, xs):
        if len(xs) != self.n:
            raise ArtinError(f"expected {self.n} series, got {len(xs)}")
        return [f.evaluate(xs) for f in self.binomials]

    @classmethod
    def from_json(cls, obj):
        return cls(
            n=int(obj["n"]),
            binomials=[
                Binomial(f["a"], f["alpha"], f["b"], f["beta"]) for f in obj["binomials"]
            ],
        )

    def to_json(self):
        return {
            "n": self.n,
            "binomials": [
                {
                    "a": _frac_str(f.a),
                    "alpha": list(f.alpha),
                    "b": _frac_str(f.b),
                    "beta": list(f.beta),
                }
                for f in self.binomials
            ],
        }


def _frac_str(c: Fraction):
    return f"{c.numerator}/{c.denominator}"


@dataclass(frozen=True)
class Incompatible:
    """Weights ``sum alpha_k d`` and ``sum beta_k d`` differ for binomial ``k`` (1-based)."""

    k: int
    lhs: int
    rhs: int


def _check_orders(d):
    d = tuple(int(x) for x in d)
    if any(x < 1 for x in d):
        raise ArtinError(f"orders must be positive, got {d}")
    return d


def homogeneity_weights(sys: BinomialSystem, d: Sequence[int]):
    """The common weights ``D_k``, or an :class:`Incompatible` marker."""
    d = _check_orders(d)
    if len(d) != sys.n:
        raise ArtinError(f"expected {sys.n} orders, got {len(d)}")
    weights = []
    for k, f in enumerate(sys.binomials, start=1):
        lhs = sum(a * x for a, x in zip(f.alpha, d))
        rhs = sum(b * x for b, x in zip(f.beta, d))
        if lhs != rhs:
            return Incompatible(k, lhs, rhs)
        weights.append(lhs)
    return weights


def jet_variable_names(d):
    return tuple(f"x_{j}_{l}" for j, dj in enumerate(d, start=1) for l in range(dj))


@dataclass(frozen=True)
class JetSystem:
    system: BinomialSystem
    orders: tuple
    variables: tuple
    polys: tuple  # polys[k][m] is the coefficient of z^m for binomial k
    weights: tuple
    top_coefficients: tuple

    def all_polys(self):
        return [p for family in self.polys for p in family]

    def to_text(self, names: Mapping[str, str] | None = None, mul="*"):
        lines = []
        for k, family in enumerate(self.polys, start=1):
            for m, p in enumerate(family):
                lines.append(f"P[{k}][{m}] = {p.to_text(names, mul=mul)}")
        return "\n".join(lines) + "\n"

    def to_m2(self):
        ring = ", ".join(self.variables)
        gens = ",\n  ".join(p.to_text() for p in self.all_polys() if not p.is_zero())
        return f"R = QQ[{ring}];\nI = ideal(\n  {gens}\n);\n"

    def to_json(self):
        return {
            "orders": list(self.orders),
            "variables": list(self.variables),
            "weights": list(self.weights),
            "top_coefficients": [_frac_str(c) for c in self.top_coefficients],
            "polys": [
                [
                    [[list(e), _frac_str(c)] for e, c in p.sorted_items()]
                    for p in family
                ]
                for family in self.polys
            ],
        }


def _zpoly_mul(p, q):
    out = [None] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        for j, b in enumerate(q):
            out[i + j] = a * b if out[i + j] is None else out[i + j] + a * b
    return out


def _zpoly_pow_product(parts, exps, one):
    result = [one]
    for p, e in zip(parts, exps):
        for _ in range(e):
            result = _zpoly_mul(result, p)
    return result


def generate_jet_system(sys: BinomialSystem, d: Sequence[int]) -> JetSystem:
    d = _check_orders(d)
    weights = homogeneity_weights(sys, d)
    if isinstance(weights, Incompatible):
        raise IncompatibleOrders(weights.k, weights.lhs, weights.rhs)
    names = jet_variable_names(d)
    one = MultiPoly.const(1, names)
    parts = []
    for j, dj in enumerate(d, start=1):
        parts.append([MultiPoly.var(f"x_{j}_{l}", names) for l in range(dj)] + [one])
    polys, tops = [], []
    for f, D in zip(sys.binomials, weights):
        lhs = _zpoly_pow_product(parts, f.alpha, one)
        rhs = _zpoly_pow_product(parts, f.beta, one)
        assert len(lhs) == len(rhs) == D + 1
        expanded = [(x - y) * f.a for x, y in zip(lhs, rhs)]
        polys.append(tuple(expanded[:D]))
        tops.append(Fraction(0) if expanded[D].is_zero() else expanded[D].terms[(0,) * len(names)])
    return JetSystem(
        system=sys,
        orders=d,
        variables=names,
        polys=tuple(polys),
        weights=tuple(weights),
        top_coefficients=tuple(tops),
    )


def _polynomial_parts(d, values, prec):
    """Series2 ``x_{j,0} + ... + x_{j,d_j-1} z^{d_j-1} + z^{d_j}`` from Series1 data."""
    out = []
    for j, dj in enumerate(d):
        p = Series2.monomial((0, dj), 1, prec)
        for l in range(dj):
            p = p + values[j][l].to_series2(l, prec)
        out.append(p)
    return out


def jet_identity_check(sys, d, assignment, jets: JetSystem | None = None) -> bool:
    """Check the jet polynomials against a direct expansion at Series1 values.

    ``assignment`` maps jet variable names ``x_j_l`` (or ``(j, l)`` with
    1-based ``j``) to Series1 values with zero constant term.
    """
    d = _check_orders(d)
    jets = jets or generate_jet_system(sys, d)
    values = []
    for j, dj in enumerate(d, start=1):
        row = []
        for l in range(dj):
            v = assignment[f"x_{j}_{l}"] if f"x_{j}_{l}" in assignment else assignment[(j, l)]
            if v.constant_term():
                raise PreconditionViolated(f"x_{j}_{l} has nonzero constant term")
            row.append(v)
        values.append(row)
    prec = min(v.prec for row in values for v in row)
    args = [v.truncate(prec) for row in values for v in row]
    parts = _polynomial_parts(d, values, prec)
    for f, family, D, top in zip(sys.binomials, jets.polys, jets.weights, jets.top_coefficients):
        lhs = (_monomial(parts, f.alpha, prec) - _monomial(parts, f.beta, prec)) * f.a
        rhs = Series2.monomial((0, D), top, prec)
        for m, P in enumerate(family):
            rhs = rhs + substitute(P, args).to_series2(m, prec)
        if not (lhs - rhs).is_zero():
            return False
    return True


def _monomial(xs, exps, prec):
    out = Series2.one(prec)
    for x, e in zip(xs, exps):
        if e:
            out = out * x**e
    return out


@dataclass
class DecoupledInstance:
    i: int
    shear: Fraction
    orders: tuple
    weights: tuple
    D: int
    forms: list
    f_orders: list
    unit_residuals: list
    unit_orders: list
    jet_residuals: list  # per binomial, list of Series1
    jet_orders: list
    certified_prec: int
    jets: JetSystem = field(repr=False)

    @property
    def threshold(self):
        return self.i - self.D

    @property
    def hypothesis_holds(self):
        return all(meets(o, self.i) for o in self.f_orders)

    @property
    def units_certified(self):
        return all(meets(o, self.threshold) for o in self.unit_orders)

    @property
    def jets_certified(self):
        return all(meets(o, self.threshold) for row in self.jet_orders for o in row)

    @property
    def certified(self):
        """Residual thresholds hold, or the hypothesis ``ord f_k(x) >= i`` fails."""
        if not self.hypothesis_holds:
            return True
        return self.units_certified and self.jets_certified


def decouple(sys: BinomialSystem, x: Sequence[Series2], i: int) -> DecoupledInstance:
    if len(x) != sys.n:
        raise ArtinError(f"expected {sys.n} series, got {len(x)}")
    prec = min(s.prec for s in x)
    x = [s.truncate(prec) for s in x]
    f_orders = [v.ord() for v in sys.evaluate(x)]
    c, xs = z_regularize(x)
    d = tuple(s.ord() for s in xs)
    weights = homogeneity_weights(sys, d)
    if isinstance(weights, Incompatible):
        raise IncompatibleOrders(weights.k, weights.lhs, weights.rhs)
    D = max(weights)
    if i <= D:
        raise PreconditionViolated(f"need i > D, got i={i}, D={D}")
    certified_prec = prec - max(d)
    if i - D > certified_prec:
        raise PrecisionTooLow(
            f"threshold i - D = {i - D} exceeds certified precision {certified_prec}"
        )
    forms = [prepare(s) for s in xs]
    units = [fm.unit for fm in forms]
    unit_res = [f.evaluate(units) for f in sys.binomials]
    jets = generate_jet_system(sys, d)
    args = [a for fm in forms for a in fm.coeffs]
    jet_res = [[substitute(P, args) for P in family] for family in jets.polys]
    return DecoupledInstance(
        i=i,
        shear=c,
        orders=d,
        weights=tuple(weights),
        D=D,
        forms=forms,
        f_orders=f_orders,
        unit_residuals=unit_res,
        unit_orders=[r.ord() for r in unit_res],
        jet_residuals=jet_res,
        jet_orders=[[r.ord() for r in row] for row in jet_res],
        certified_prec=certified_prec,
        jets=jets,
    )


def unshear(s: Series2, c) -> Series2:
    """Undo the coordinate change applied by :func:`z_regularize`."""
    return shear(s, -as_coeff(c))
