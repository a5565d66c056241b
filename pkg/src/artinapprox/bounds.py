"""Exact evaluation of the effective bounds for Greenberg and Artin functions.

All quantities are nonnegative integers. They are computed exactly until a
power would exceed the bit budget of the evaluation context (``2**20`` bits
by default); past that point only ``log10`` of the value is tracked and the
result carries the ``"Inexact"`` flag.

The degree-bound functions ``lambda1`` (generators of the associated primes)
and ``lambda2`` (generators of the primary components) are injected through
:class:`DegreeBoundFns`. The shipped default ``(2d)^(2^n)`` is a conventional
doubly-exponential stand-in, not a published formula.
"""
from __future__ import annotations

import ast
import itertools
import operator
from dataclasses import dataclass, field
from typing import Callable

import gmpy2
import mpmath

from .errors import ArtinError, IncompatibleOrders
from .jets import BinomialSystem, Incompatible, homogeneity_weights

DEFAULT_BIT_BUDGET = 1 << 20

_mp = mpmath.MPContext()
_mp.dps = 50
_LOG10_2 = _mp.log10(2)


class BoundValue:
    """A nonnegative integer, exact or known only through ``log10``."""

    __slots__ = ("exact", "_log10", "flags", "formula", "budget")

    def __init__(self, exact=None, log10=None, flags=(), formula="", budget=DEFAULT_BIT_BUDGET):
        if exact is None and log10 is None:
            raise ValueError("need an exact value or a log10 magnitude")
        if exact is not None:
            exact = int(exact)
            if exact < 0:
                raise ValueError("bound values are nonnegative")
        self.exact = exact
        self._log10 = None if log10 is None else _mp.mpf(log10)
        self.flags = frozenset(flags) | ({"Inexact"} if exact is None else frozenset())
        self.formula = formula
        self.budget = budget

    # -- views --------------------------------------------------------
    @property
    def is_exact(self):
        return self.exact is not None

    @property
    def log10_mpf(self):
        if self._log10 is None:
            self._log10 = _mp.log10(_mp.mpf(self.exact)) if self.exact else _mp.ninf
        return self._log10

    @property
    def log10_magnitude(self) -> float:
        return float(self.log10_mpf)

    def bit_length_estimate(self):
        if self.exact is not None:
            return self.exact.bit_length()
        return self.log10_mpf / _LOG10_2

    def key(self):
        return ("e", self.exact) if self.exact is not None else ("l", str(self.log10_mpf))

    def with_info(self, formula=None, flags=()):
        out = BoundValue.__new__(BoundValue)
        out.exact, out._log10, out.budget = self.exact, self._log10, self.budget
        out.flags = self.flags | frozenset(flags)
        out.formula = self.formula if formula is None else formula
        return out

    def display(self, mode="auto"):
        """Decimal digits, or ``10^{m}``; ``auto`` switches above 60 digits."""
        if self.exact is not None and (
            mode == "exact" or (mode == "auto" and self.exact.bit_length() <= 200)
        ):
            return gmpy2.digits(gmpy2.mpz(self.exact))
        if mode == "exact":
            raise OverflowError("value only known through its magnitude")
        return f"10^{{{_mp.nstr(self.log10_mpf, 12)}}}"

    def __str__(self):
        return self.display()

    def __repr__(self):
        flags = f", flags={sorted(self.flags)}" if self.flags else ""
        return f"BoundValue({self.display()}{flags})"

    def __int__(self):
        if self.exact is None:
            raise OverflowError("value only known through its magnitude")
        return self.exact

    # -- arithmetic ---------------------------------------------------
    def _lift(self, other):
        if isinstance(other, BoundValue):
            return other
        return BoundValue(exact=other, budget=self.budget)

    def _new(self, other, exact=None, log10=None):
        budget = max(self.budget, getattr(other, "budget", 0))
        flags = self.flags | getattr(other, "flags", frozenset())
        flags -= {"Inexact"}
        return BoundValue(exact=exact, log10=log10, flags=flags, budget=budget)

    def __add__(self, other):
        other = self._lift(other)
        if self.is_exact and other.is_exact:
            return self._new(other, exact=self.exact + other.exact)
        hi, lo = sorted((self.log10_mpf, other.log10_mpf), reverse=True)
        if lo == _mp.ninf:
            return self._new(other, log10=hi)
        return self._new(other, log10=hi + _mp.log10(1 + _mp.power(10, lo - hi)))

    __radd__ = __add__

    def __sub__(self, other):
        other = self._lift(other)
        if self.is_exact and other.is_exact:
            return self._new(other, exact=self.exact - other.exact)
        if other <= 0:
            return self
        la, lb = self.log10_mpf, other.log10_mpf
        if lb >= la:
            raise ValueError("inexact subtraction would not stay positive")
        return self._new(other, log10=la + _mp.log10(1 - _mp.power(10, lb - la)))

    def __mul__(self, other):
        other = self._lift(other)
        if self.exact == 0 or other.exact == 0:
            return self._new(other, exact=0)
        if (
            self.is_exact
            and other.is_exact
            and self.exact.bit_length() + other.exact.bit_length() <= max(self.budget, other.budget)
        ):
            return self._new(other, exact=self.exact * other.exact)
        return self._new(other, log10=self.log10_mpf + other.log10_mpf)

    __rmul__ = __mul__

    def __pow__(self, k):
        k = int(k)
        if k < 0:
            raise ValueError("negative exponent")
        if k == 0:
            return self._new(None, exact=1)
        if self.exact in (0, 1):
            return self._new(None, exact=self.exact)
        if self.is_exact and k * self.exact.bit_length() <= self.budget:
            return self._new(None, exact=self.exact**k)
        return self._new(None, log10=self.log10_mpf * k)

    def _cmp(self, other, op):
        other = self._lift(other)
        if self.is_exact and other.is_exact:
            return op(self.exact, other.exact)
        return op(self.log10_mpf, other.log10_mpf)

    def __lt__(self, other):
        return self._cmp(other, operator.lt)

    def __le__(self, other):
        return self._cmp(other, operator.le)

    def __gt__(self, other):
        return self._cmp(other, operator.gt)

    def __ge__(self, other):
        return self._cmp(other, operator.ge)

    def __eq__(self, other):
        if not isinstance(other, (BoundValue, int)):
            return NotImplemented
        return self._cmp(other, operator.eq)

    def __hash__(self):
        return hash(self.key())


def bmax(*values):
    best = values[0]
    for v in values[1:]:
        if v > best:
            best = v
    return best


# -- degree bound functions ---------------------------------------------


@dataclass(frozen=True)
class DegreeBoundFns:
    lambda1: Callable
    lambda2: Callable
    name: str = "custom"

    @classmethod
    def default(cls):
        def lam(n, d):
            return (_as_bound(d) * 2) ** (2**n)

        return cls(lam, lam, "default: (2d)^(2^n)")

    @classmethod
    def identity(cls):
        def lam(n, d):
            return _as_bound(d)

        return cls(lam, lam, "stub: lambda(n, d) = d")

    @classmethod
    def constant(cls, c):
        def lam(n, d):
            return BoundValue(exact=c, budget=getattr(d, "budget", DEFAULT_BIT_BUDGET))

        return cls(lam, lam, f"stub: lambda = {c}")

    @classmethod
    def from_expressions(cls, expr1, expr2=None):
        """Build from arithmetic expressions in ``n`` and ``d`` (``+ - * ** ( )``)."""
        f1 = _compile_expr(expr1)
        f2 = _compile_expr(expr2 or expr1)
        return cls(f1, f2, f"expressions: lambda1 = {expr1}, lambda2 = {expr2 or expr1}")


_BINOPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul, ast.Pow: operator.pow}


def _compile_expr(text):
    tree = ast.parse(text, mode="eval")

    def ev(node, env):
        if isinstance(node, ast.Expression):
            return ev(node.body, env)
        if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
            left, right = ev(node.left, env), ev(node.right, env)
            if isinstance(node.op, ast.Pow):
                return left ** int(right)
            return _BINOPS[type(node.op)](left, right)
        if isinstance(node, ast.Constant) and isinstance(node.value, int):
            return node.value
        if isinstance(node, ast.Name) and node.id in env:
            return env[node.id]
        raise ArtinError(f"unsupported expression element in {text!r}")

    def lam(n, d):
        d = _as_bound(d)
        out = ev(tree, {"n": n, "d": d})
        return _as_bound(out, budget=d.budget)

    ev(tree, {"n": 1, "d": 1})  # reject malformed expressions early
    return lam


def _as_bound(v, budget=DEFAULT_BIT_BUDGET):
    if isinstance(v, BoundValue):
        return v
    return BoundValue(exact=int(v), budget=budget)


# -- closed forms ---------------------------------------------------------


def hermann_exponent(n, p, d):
    """Exponent ``e`` with ``sqrt(I)^e`` inside ``I``, and its cruder bound.

    ``e = m (n+2) (d+1)^(m+1)`` with ``m = min(n, p)``; the crude bound is
    ``(n+2)^2 (d+1)^(n+1)``. Returns ``(e, crude)``.
    """
    if n < 1 or p < 1 or d < 0:
        raise ArtinError("hermann_exponent needs n, p >= 1 and d >= 0")
    m = min(n, p)
    e = BoundValue(exact=m * (n + 2) * (d + 1) ** (m + 1), formula="min(n,p)(n+2)(d+1)^(min(n,p)+1)")
    crude = BoundValue(exact=(n + 2) ** 2 * (d + 1) ** (n + 1), formula="(n+2)^2(d+1)^(n+1)")
    assert e <= crude
    return e, crude


def component_count_bound(n, p, d):
    """Bound ``d^min(n, p)`` on the number of primary components."""
    if d == 0:
        return BoundValue(exact=1, flags={"DegenerateDegree"}, formula="d^min(n,p) with d = 0")
    return BoundValue(exact=d ** min(n, p), formula="d^min(n,p)")


def intersection_degree_bound(n, q, d):
    """Generator degree bound ``n((q-1)d)^(2^(n-1)) + d`` for an intersection of q ideals."""
    if n < 1 or q < 1:
        raise ArtinError("intersection_degree_bound needs n, q >= 1")
    return BoundValue(
        exact=n * ((q - 1) * d) ** (2 ** (n - 1)) + d, formula="n((q-1)d)^(2^(n-1))+d"
    )


# -- recursion -------------------------------------------------------------


@dataclass
class BoundContext:
    """One evaluation of the recursion: degree functions, bit budget and memo table.

    ``variant="sum"`` replaces the ``(n+3)^2 (d+1)^(2n+3)`` factor by the
    component-sum form ``e * s`` used while proving the height induction.
    """

    fns: DegreeBoundFns = field(default_factory=DegreeBoundFns.default)
    bit_budget: int = DEFAULT_BIT_BUDGET
    variant: str = "max"
    memo: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.variant not in ("max", "sum"):
            raise ArtinError(f"unknown variant {self.variant!r}")

    def value(self, v):
        if isinstance(v, BoundValue):
            return v
        return BoundValue(exact=int(v), budget=self.bit_budget)

    def lambda1(self, n, d):
        return _as_bound(self.fns.lambda1(n, d), self.bit_budget)

    def lambda2(self, n, d):
        return _as_bound(self.fns.lambda2(n, d), self.bit_budget)


def _context(fns, ctx):
    if ctx is not None:
        return ctx
    return BoundContext(fns or DegreeBoundFns.default())


def e_prime(n, d, fns=None, ctx=None):
    """``(n+3)^2 (1 + L + (n+1)((d^(n+1) - 2) L)^(2^n))^(n+2)`` with ``L = lambda2(n+1, d)``.

    When ``d^(n+1) < 2`` the inner difference is clamped at 0 and the result
    is flagged ``UnderflowDegree``.
    """
    ctx = _context(fns, ctx)
    if n < 1:
        raise ArtinError("e_prime needs n >= 1")
    d = ctx.value(d)
    lam = ctx.lambda2(n + 1, d)
    flags = set()
    base = d ** (n + 1)
    if base < 2:
        inner = ctx.value(0)
        flags.add("UnderflowDegree")
    else:
        inner = base - 2
    core = 1 + lam + (n + 1) * (inner * lam) ** (2**n)
    out = (n + 3) ** 2 * ctx.value(core) ** (n + 2)
    return out.with_info("(n+3)^2(1+l2+(n+1)((d^(n+1)-2)l2)^(2^n))^(n+2)", flags)


def beta_prime_bound(k, n, d, i, fns=None, ctx=None):
    """Bound for prime ideals of height ``k``: 2 at ``k = n+1``, else
    ``(e'+1) * beta_bound(k+1, n, max(k(d-1), 1), i) + 1``."""
    ctx = _context(fns, ctx)
    if not 1 <= k <= n + 1:
        raise ArtinError(f"height k={k} outside 1..{n + 1}")
    if k == n + 1:
        return ctx.value(2).with_info("floor: maximal height")
    d = ctx.value(d)
    key = ("prime", k, n, d.key(), i)
    if key not in ctx.memo:
        ep = e_prime(n, d, ctx=ctx)
        deg = d - 1 if d >= 1 else ctx.value(0)
        deg = bmax(deg * k, ctx.value(1))
        inner = beta_bound(k + 1, n, deg, i, ctx=ctx)
        ctx.memo[key] = ((ep + 1) * inner + 1).with_info(
            "(e'+1) beta_{k+1}(n, k(d-1), i) + 1", ep.flags & {"UnderflowDegree"}
        )
    return ctx.memo[key]


def beta_bound(k, n, d, i, fns=None, ctx=None):
    """Bound for ideals of height ``k``:
    ``(n+3)^2 (d+1)^(2n+3) max_{h>k} beta_prime_bound(h, n, lambda1(n+1, d), i)``."""
    ctx = _context(fns, ctx)
    if not 0 <= k <= n + 1:
        raise ArtinError(f"height k={k} outside 0..{n + 1}")
    if k == n + 1:
        return ctx.value(2).with_info("floor: maximal height")
    d = ctx.value(d)
    key = ("any", k, n, d.key(), i)
    if key not in ctx.memo:
        lam = ctx.lambda1(n + 1, d)
        best = bmax(*(beta_prime_bound(h, n, lam, i, ctx=ctx) for h in range(k + 1, n + 2)))
        if ctx.variant == "max":
            factor = (n + 3) ** 2 * (d + 1) ** (2 * n + 3)
            formula = "(n+3)^2(d+1)^(2n+3) max_{h>k} beta'_h(n, l1(n+1,d), i)"
        else:
            factor = (n + 1) * (n + 3) * (d + 1) ** (n + 2) * bmax(d, ctx.value(1)) ** (n + 1)
            formula = "(n+1)(n+3)(d+1)^(n+2) d^(n+1) max_{h>k} beta'_h(n, l1(n+1,d), i)"
        ctx.memo[key] = (factor * best).with_info(formula)
    return ctx.memo[key]


def greenberg_bound(n, d, i, fns=None, ctx=None):
    """Uniform Greenberg bound, taken at height 0."""
    return beta_bound(0, n, d, i, fns, ctx).with_info("beta_0(n, d, i)")


# -- binomial bounds ----------------------------------------------------------


@dataclass
class RestrictedBound:
    a_part: BoundValue
    b_part: int
    value: BoundValue
    D: int
    q: BoundValue
    e: BoundValue
    greenberg: BoundValue
    orders: tuple
    flags: frozenset = frozenset()

    def __iter__(self):
        return iter((self.a_part, self.b_part))


def binomial_restricted_bound(sys: BinomialSystem, d, i, fns=None, ctx=None) -> RestrictedBound:
    """Bound for approximate solutions whose orders are exactly ``d``.

    Pointwise ``max(q*e*i, greenberg(sum d, deg, i)) + D``, where ``q`` and
    ``e`` are the component count and Hermann exponent of the binomial ideal.
    """
    ctx = _context(fns, ctx)
    if i < 1:
        raise ArtinError("i must be >= 1")
    weights = homogeneity_weights(sys, d)
    if isinstance(weights, Incompatible):
        raise IncompatibleOrders(weights.k, weights.lhs, weights.rhs)
    D = max(weights)
    deg = sys.degree
    p = len(sys.binomials)
    q = component_count_bound(sys.n, p, deg)
    e, _ = hermann_exponent(sys.n, p, deg)
    g = greenberg_bound(sum(d), deg, i, ctx=ctx)
    a_part = bmax(ctx.value(q * e * i), g)
    value = (a_part + D).with_info("max(q e i, beta_0(sum d, deg, i)) + D")
    flags = frozenset({"DegenerateThreshold"}) if value <= D else frozenset()
    return RestrictedBound(
        a_part=a_part, b_part=D, value=value, D=D, q=q, e=e, greenberg=g,
        orders=tuple(d), flags=flags,
    )


@dataclass
class GlobalBound:
    value: BoundValue
    i: int
    cap: int
    orders: tuple | None
    candidates: int
    loglog10: float | None

    @property
    def growth_ratio(self):
        """``log10 log10(value)`` per unit of ``n*i``; None while the value is below 10."""
        return self.loglog10


def binomial_global_bound(sys: BinomialSystem, i, fns=None, ctx=None) -> GlobalBound:
    """Bound for arbitrary approximate solutions.

    Orders ``>= i`` are replaced by the zero solution, so only order vectors
    in ``{1..i-1}^n`` matter; among those satisfying homogeneity the largest
    restricted bound is returned. With none, only ``q*e*i`` applies.
    """
    ctx = _context(fns, ctx)
    if i < 1:
        raise ArtinError("i must be >= 1")
    deg = sys.degree
    p = len(sys.binomials)
    q = component_count_bound(sys.n, p, deg)
    e, _ = hermann_exponent(sys.n, p, deg)
    best = ctx.value(q * e * i).with_info("q e i (no compatible order vector)")
    best_d, count = None, 0
    for d in itertools.product(range(1, i), repeat=sys.n):
        if isinstance(homogeneity_weights(sys, d), Incompatible):
            continue
        count += 1
        r = binomial_restricted_bound(sys, d, i, ctx=ctx)
        if best_d is None or r.value > best:
            best, best_d = r.value, d
    loglog = None
    if best > 10:
        loglog = float(_mp.log10(best.log10_mpf))
    return GlobalBound(value=best, i=i, cap=i - 1, orders=best_d, candidates=count, loglog10=loglog)
