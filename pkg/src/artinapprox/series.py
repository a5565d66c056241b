"""Exact truncated power series in ``t`` (and ``z``) and sparse polynomials.

Coefficients are :class:`fractions.Fraction`. A series of precision ``N``
stores the terms of total degree ``< N``; everything of degree ``>= N`` is
unknown, not zero. Values are immutable.

>>> t, z = Series2.t(5), Series2.z(5)
>>> (t + z) * (t - z)
Series2(t^2 - z^2, prec=5)
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence, Union

from .errors import ArityMismatch, NotAUnit, PrecisionExhausted


@dataclass(frozen=True)
class AtLeast:
    """Order marker for a series whose stored terms all vanish."""

    bound: int

    def __str__(self):
        return f">={self.bound}"


OrderResult = Union[int, AtLeast]


def meets(order: OrderResult, threshold: int) -> bool:
    """True when ``order >= threshold`` is certified.

    ``AtLeast(N)`` only certifies thresholds up to ``N``.
    """
    if threshold <= 0:
        return True
    if isinstance(order, AtLeast):
        return order.bound >= threshold
    return order >= threshold


def order_value(order: OrderResult) -> int:
    """Lower bound carried by an order result (for reporting and sorting)."""
    return order.bound if isinstance(order, AtLeast) else order


def as_coeff(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, str):
        return Fraction(value.strip())
    if isinstance(value, float):
        raise TypeError("floating point coefficients are not supported")
    return Fraction(value)


def _graded_monomials(nvars, prec):
    """All exponent tuples of total degree < prec, graded; larger last exponent first."""
    if nvars == 1:
        return [(e,) for e in range(prec)]
    out = []
    for deg in range(prec):
        for b in range(deg, -1, -1):
            out.append((deg - b, b))
    return out


class _Series:
    """Shared arithmetic for truncated series in ``nvars`` variables."""

    nvars = 0
    var_names: tuple = ()
    __slots__ = ("prec", "_terms")

    def __init__(self, terms: Mapping | None = None, prec: int = 1):
        if prec < 1:
            raise ValueError("precision must be positive")
        clean = {}
        for exps, c in (terms or {}).items():
            exps = self._key(exps)
            c = as_coeff(c)
            if c and sum(exps) < prec:
                clean[exps] = clean.get(exps, 0) + c
        self.prec = prec
        self._terms = {e: c for e, c in clean.items() if c}

    @classmethod
    def _key(cls, exps):
        exps = tuple(exps) if isinstance(exps, (tuple, list)) else (exps,)
        if len(exps) != cls.nvars or any(e < 0 for e in exps):
            raise ValueError(f"bad exponent {exps!r} for {cls.__name__}")
        return tuple(int(e) for e in exps)

    @classmethod
    def _raw(cls, terms, prec):
        obj = cls.__new__(cls)
        obj.prec = prec
        obj._terms = terms
        return obj

    # -- constructors -------------------------------------------------
    @classmethod
    def zero(cls, prec):
        return cls._raw({}, prec)

    @classmethod
    def const(cls, c, prec):
        return cls({(0,) * cls.nvars: c}, prec)

    @classmethod
    def one(cls, prec):
        return cls.const(1, prec)

    @classmethod
    def monomial(cls, exps, c=1, prec=1):
        return cls({exps: c}, prec)

    # -- inspection ---------------------------------------------------
    @property
    def terms(self):
        return MappingProxyType(self._terms)

    def items(self):
        return self._terms.items()

    def coeff(self, *exps) -> Fraction:
        return self._terms.get(tuple(exps), Fraction(0))

    def is_zero(self):
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def ord(self) -> OrderResult:
        if not self._terms:
            return AtLeast(self.prec)
        return min(sum(e) for e in self._terms)

    def leading_form(self):
        """Terms of minimal total degree, as a dict."""
        o = self.ord()
        if isinstance(o, AtLeast):
            return {}
        return {e: c for e, c in self._terms.items() if sum(e) == o}

    def constant_term(self) -> Fraction:
        return self._terms.get((0,) * self.nvars, Fraction(0))

    def truncate(self, prec):
        if prec > self.prec:
            raise ValueError("cannot raise precision by truncation")
        return self._raw({e: c for e, c in self._terms.items() if sum(e) < prec}, prec)

    def with_prec(self, prec):
        """Reinterpret at a lower precision (same as truncate) or reject higher."""
        return self.truncate(prec)

    # -- arithmetic ---------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, _Series):
            if type(other) is not type(self):
                raise TypeError(f"cannot combine {type(self).__name__} and {type(other).__name__}")
            return other
        return type(self).const(as_coeff(other), self.prec)

    def __add__(self, other):
        other = self._coerce(other)
        prec = min(self.prec, other.prec)
        out = {e: c for e, c in self._terms.items() if sum(e) < prec}
        for e, c in other._terms.items():
            if sum(e) < prec:
                v = out.get(e, 0) + c
                if v:
                    out[e] = v
                else:
                    out.pop(e, None)
        return self._raw(out, prec)

    __radd__ = __add__

    def __neg__(self):
        return self._raw({e: -c for e, c in self._terms.items()}, self.prec)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def scale(self, c):
        c = as_coeff(c)
        if not c:
            return self.zero(self.prec)
        return self._raw({e: v * c for e, v in self._terms.items()}, self.prec)

    def __mul__(self, other):
        if not isinstance(other, _Series):
            return self.scale(other)
        other = self._coerce(other)
        prec = min(self.prec, other.prec)
        a = [(sum(e), e, c) for e, c in self._terms.items()]
        b = sorted(((sum(e), e, c) for e, c in other._terms.items()), key=lambda x: x[0])
        out = {}
        for da, ea, ca in a:
            room = prec - da
            if room <= 0:
                continue
            for db, eb, cb in b:
                if db >= room:
                    break
                key = tuple(x + y for x, y in zip(ea, eb))
                v = out.get(key, 0) + ca * cb
                if v:
                    out[key] = v
                else:
                    del out[key]
        return self._raw(out, prec)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a nonnegative integer")
        result = self.one(self.prec)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        return self.prec == other.prec and self._terms == other._terms

    def __hash__(self):
        return hash((type(self).__name__, self.prec, frozenset(self._terms.items())))

    def agrees_with(self, other, prec) -> bool:
        """Whether the two series coincide on all terms of total degree < prec."""
        if prec > min(self.prec, other.prec):
            return False
        return (self.truncate(prec) - other.truncate(prec)).is_zero()

    def invert_unit(self):
        """Multiplicative inverse at the same precision."""
        c0 = self.constant_term()
        if not c0:
            raise NotAUnit("constant term is zero")
        inv0 = 1 / c0
        rest = [(e, c) for e, c in self._terms.items() if any(e)]
        r = {}
        for m in _graded_monomials(self.nvars, self.prec):
            if not any(m):
                r[m] = inv0
                continue
            acc = 0
            for e, c in rest:
                diff = tuple(x - y for x, y in zip(m, e))
                if min(diff) < 0:
                    continue
                v = r.get(diff)
                if v:
                    acc += c * v
            if acc:
                r[m] = -inv0 * acc
        return self._raw(r, self.prec)

    # -- display ------------------------------------------------------
    def _sorted_items(self):
        return sorted(self._terms.items(), key=lambda kv: (sum(kv[0]), [-x for x in kv[0]]))

    def to_text(self):
        if not self._terms:
            return "0"
        parts = []
        for e, c in self._sorted_items():
            mono = "*".join(
                v if k == 1 else f"{v}^{k}" for v, k in zip(self.var_names, e) if k
            )
            parts.append(_signed_term(c, mono))
        return _join_terms(parts)

    def __repr__(self):
        return f"{type(self).__name__}({self.to_text()}, prec={self.prec})"


def _signed_term(c: Fraction, mono: str):
    sign = "-" if c < 0 else "+"
    a = abs(c)
    if not mono:
        body = str(a)
    elif a == 1:
        body = mono
    else:
        body = f"{a}*{mono}"
    return sign, body


def _join_terms(parts):
    sign, body = parts[0]
    out = ("-" if sign == "-" else "") + body
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


class Series1(_Series):
    """Truncated series in ``t`` alone; ``Series1({2: 1, 3: -1}, 6)`` is t^2 - t^3."""

    nvars = 1
    var_names = ("t",)
    __slots__ = ()

    @classmethod
    def t(cls, prec):
        return cls({1: 1}, prec)

    def coeff(self, e) -> Fraction:
        return self._terms.get((e,), Fraction(0))

    def to_series2(self, z_power=0, prec=None):
        """Embed as ``self(t) * z^z_power`` in two variables."""
        if prec is None:
            prec = self.prec + z_power
        return Series2({(e[0], z_power): c for e, c in self._terms.items()}, prec)


class Series2(_Series):
    """Truncated series in ``(t, z)``, truncated by total degree."""

    nvars = 2
    var_names = ("t", "z")
    __slots__ = ()

    @classmethod
    def t(cls, prec):
        return cls({(1, 0): 1}, prec)

    @classmethod
    def z(cls, prec):
        return cls({(0, 1): 1}, prec)

    def at_t_zero(self):
        """Coefficients of ``s(0, z)`` as ``{e_z: c}``."""
        return {e[1]: c for e, c in self._terms.items() if e[0] == 0}

    def z_coefficient(self, j, prec=None) -> Series1:
        """Coefficient of ``z^j`` read as a series in ``t``.

        It is known to precision ``self.prec - j`` unless a smaller ``prec``
        is requested.
        """
        known = max(self.prec - j, 1)
        prec = known if prec is None else min(prec, known)
        return Series1({e[0]: c for e, c in self._terms.items() if e[1] == j}, prec)


def ord(s: _Series) -> OrderResult:  # noqa: A001 - mirrors the mathematical name
    return s.ord()


def invert_unit(s):
    return s.invert_unit()


def shear(s: Series2, c) -> Series2:
    """Substitute ``t -> t + c*z``; total degree is preserved."""
    c = as_coeff(c)
    if not c:
        return s
    out = {}
    for (a, b), v in s.items():
        for k in range(a + 1):
            key = (a - k, b + k)
            out[key] = out.get(key, 0) + v * comb(a, k) * c**k
    return Series2(out, s.prec)


def z_regularize(family: Sequence[Series2]):
    """Smallest integer shear ``t -> t + c*z`` making every member z-regular.

    Returns ``(c, transformed)`` where each transformed series has
    ``z_order == ord``. At most ``sum(ord(s))`` values of ``c`` can fail, so
    the scan terminates.
    """
    forms = []
    for s in family:
        if isinstance(s.ord(), AtLeast):
            raise PrecisionExhausted(f"series vanishes at precision {s.prec}")
        forms.append(s.leading_form())
    c = 0
    while True:
        if all(sum(v * c**a for (a, _), v in L.items()) != 0 for L in forms):
            break
        c += 1
    c = Fraction(c)
    return c, [shear(s, c) for s in family]


class MultiPoly:
    """Sparse polynomial over the rationals in named variables.

    ``terms`` maps exponent tuples (aligned with ``variables``) to nonzero
    Fractions.
    """

    __slots__ = ("variables", "_terms")

    def __init__(self, variables: Iterable[str], terms: Mapping | None = None):
        self.variables = tuple(variables)
        n = len(self.variables)
        clean = {}
        for e, c in (terms or {}).items():
            e = tuple(int(x) for x in e)
            if len(e) != n:
                raise ArityMismatch(f"exponent {e} has length {len(e)}, expected {n}")
            c = as_coeff(c)
            if c:
                clean[e] = clean.get(e, 0) + c
        self._terms = {e: c for e, c in clean.items() if c}

    @classmethod
    def _raw(cls, variables, terms):
        obj = cls.__new__(cls)
        obj.variables = variables
        obj._terms = terms
        return obj

    @classmethod
    def var(cls, name, variables):
        variables = tuple(variables)
        e = tuple(int(v == name) for v in variables)
        if sum(e) != 1:
            raise KeyError(name)
        return cls._raw(variables, {e: Fraction(1)})

    @classmethod
    def const(cls, c, variables):
        variables = tuple(variables)
        return cls(variables, {(0,) * len(variables): c})

    @property
    def terms(self):
        return MappingProxyType(self._terms)

    def items(self):
        return self._terms.items()

    def is_zero(self):
        return not self._terms

    def total_degree(self):
        return max((sum(e) for e in self._terms), default=0)

    def _coerce(self, other):
        if isinstance(other, MultiPoly):
            if other.variables != self.variables:
                raise ArityMismatch("polynomials over different variable lists")
            return other
        return MultiPoly.const(other, self.variables)

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self._terms)
        for e, c in other._terms.items():
            v = out.get(e, 0) + c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return self._raw(self.variables, out)

    __radd__ = __add__

    def __neg__(self):
        return self._raw(self.variables, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, MultiPoly):
            c = as_coeff(other)
            if not c:
                return self._raw(self.variables, {})
            return self._raw(self.variables, {e: v * c for e, v in self._terms.items()})
        other = self._coerce(other)
        out = {}
        for ea, ca in self._terms.items():
            for eb, cb in other._terms.items():
                key = tuple(x + y for x, y in zip(ea, eb))
                v = out.get(key, 0) + ca * cb
                if v:
                    out[key] = v
                else:
                    del out[key]
        return self._raw(self.variables, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative exponent")
        result = MultiPoly.const(1, self.variables)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other):
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self.variables == other.variables and self._terms == other._terms

    def __hash__(self):
        return hash((self.variables, frozenset(self._terms.items())))

    def sorted_items(self):
        """Terms by descending total degree, then descending exponent vector."""
        return sorted(self._terms.items(), key=lambda kv: (-sum(kv[0]), [-x for x in kv[0]]))

    def to_text(self, names: Mapping[str, str] | None = None, mul="*", power="^"):
        if not self._terms:
            return "0"
        names = names or {}
        labels = [names.get(v, v) for v in self.variables]
        parts = []
        for e, c in self.sorted_items():
            mono = mul.join(
                lab if k == 1 else f"{lab}{power}{k}" for lab, k in zip(labels, e) if k
            )
            sign, body = _signed_term(c, mono)
            if mono and abs(c) != 1:
                body = f"{abs(c)}{mul}{mono}"
            parts.append((sign, body))
        return _join_terms(parts)

    def __repr__(self):
        return f"MultiPoly({self.to_text()})"

    def __call__(self, *args):
        """Evaluate at series (via :func:`substitute`) or at exact scalars."""
        if args and isinstance(args[0], _Series):
            return substitute(self, args)
        if len(args) != len(self.variables):
            raise ArityMismatch(f"{len(self.variables)} variables but {len(args)} arguments")
        vals = [as_coeff(a) for a in args]
        total = Fraction(0)
        for e, c in self._terms.items():
            for v, k in zip(vals, e):
                c *= v**k
            total += c
        return total


def substitute(p: MultiPoly, args: Sequence[_Series]):
    """Evaluate ``p`` at series arguments, truncated at their common precision."""
    if len(args) != len(p.variables):
        raise ArityMismatch(f"{len(p.variables)} variables but {len(args)} arguments")
    if not args:
        raise ArityMismatch("cannot infer precision without arguments")
    cls = type(args[0])
    if any(type(a) is not cls for a in args):
        raise TypeError("arguments must all be the same series type")
    prec = min(a.prec for a in args)
    args = [a.truncate(prec) for a in args]
    powers = [{0: cls.one(prec), 1: a} for a in args]

    def power(j, k):
        cache = powers[j]
        if k not in cache:
            cache[k] = power(j, k // 2) * power(j, k - k // 2)
        return cache[k]

    total = cls.zero(prec)
    for e, c in p.items():
        term = cls.const(c, prec)
        for j, k in enumerate(e):
            if k:
                term = term * power(j, k)
        total = total + term
    return total
