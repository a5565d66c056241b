"""Weierstrass division and preparation in ``k[[t, z]]`` at finite precision.

Division by a z-regular ``Q`` of z-order ``d`` follows the constructive
scheme: keep ``F = C*Q + R``, pick the smallest monomial ``M`` of ``R``
divisible by ``z^d`` and replace ``R`` by ``R - (M / (q_d z^d)) * Q`` until
no such monomial of total degree ``< N`` is left. "Smallest" means lowest
total degree, ties going to the larger z-exponent, so runs are reproducible.
"""
from __future__ import annotations

import heapq
from dataclasses import dataclass
from fractions import Fraction
from math import ceil

from .errors import NotZRegular, PreconditionViolated
from .series import AtLeast, OrderResult, Series2, meets


def z_order(s: Series2) -> OrderResult:
    """Order in ``z`` of ``s(0, z)``."""
    exps = [e[1] for e in s.terms if e[0] == 0]
    if not exps:
        return AtLeast(s.prec)
    return min(exps)


def _certified_precisions(N, d, q_order):
    # When ord(Q) == d every reduction step raises total degree, so
    # truncation is exact. Otherwise certify through the weight
    # w(t) = d + 1, w(z) = 1, under which each step is increasing.
    if q_order == d:
        return N - d, N
    return max(ceil((N - d) / (d + 1)), 1), max(ceil(N / (d + 1)), 1)


@dataclass(frozen=True)
class DivisionResult:
    quotient: Series2
    remainder: Series2
    quotient_precision: int
    remainder_precision: int
    degree: int
    steps: int


def divide(F: Series2, Q: Series2) -> DivisionResult:
    N = min(F.prec, Q.prec)
    d = z_order(Q)
    if isinstance(d, AtLeast):
        raise NotZRegular(f"divisor has no pure z-power below precision {Q.prec}")
    lead = Q.coeff(0, d)
    q_terms = [(e, c) for e, c in Q.items() if sum(e) < N]
    R = {e: c for e, c in F.items() if sum(e) < N}
    C = {}
    heap = [(sum(e), -e[1], e[0]) for e in R if e[1] >= d]
    heapq.heapify(heap)
    steps = 0
    limit = 50 * (N + 1) ** 3 * (d + 1)
    while heap:
        _, neg_b, a = heapq.heappop(heap)
        m = (a, -neg_b)
        c = R.get(m)
        if not c:
            continue
        steps += 1
        if steps > limit:
            raise RuntimeError("Weierstrass division failed to terminate")
        factor = c / lead
        shift = (m[0], m[1] - d)
        C[shift] = C.get(shift, 0) + factor
        for (qa, qb), qc in q_terms:
            key = (shift[0] + qa, shift[1] + qb)
            deg = key[0] + key[1]
            if deg >= N:
                continue
            v = R.get(key, 0) - factor * qc
            if v:
                R[key] = v
                if key[1] >= d and key != m:
                    heapq.heappush(heap, (deg, -key[1], key[0]))
            else:
                R.pop(key, None)
    qp, rp = _certified_precisions(N, d, Q.ord())
    return DivisionResult(
        quotient=Series2(C, max(N - d, 1)),
        remainder=Series2(R, N),
        quotient_precision=qp,
        remainder_precision=rp,
        degree=d,
        steps=steps,
    )


@dataclass(frozen=True)
class WeierstrassForm:
    """``unit * (z^d + a_{d-1} z^{d-1} + ... + a_0)`` with ``a_j`` in ``t*k[[t]]``."""

    unit: Series2
    degree: int
    coeffs: tuple
    certified_prec: int

    def polynomial_part(self, prec=None) -> Series2:
        prec = self.unit.prec if prec is None else prec
        terms = {(0, self.degree): Fraction(1)}
        for j, a in enumerate(self.coeffs):
            for (e,), c in a.items():
                terms[(e, j)] = c
        return Series2(terms, prec)

    def reassemble(self) -> Series2:
        return self.unit * self.polynomial_part()


def prepare(s: Series2) -> WeierstrassForm:
    """Weierstrass preparation of a z-regular series."""
    d = z_order(s)
    if isinstance(d, AtLeast):
        raise NotZRegular(f"series has no pure z-power below precision {s.prec}")
    if d == 0:
        return WeierstrassForm(unit=s, degree=0, coeffs=(), certified_prec=s.prec)
    N = s.prec
    res = divide(Series2.monomial((0, d), 1, N), s)
    unit = res.quotient.invert_unit()
    coeffs = []
    for j in range(d):
        a = -res.remainder.z_coefficient(j, prec=max(res.remainder_precision - j, 1))
        assert not a.constant_term(), "Weierstrass coefficient with nonzero constant term"
        coeffs.append(a)
    return WeierstrassForm(
        unit=unit, degree=d, coeffs=tuple(coeffs), certified_prec=res.quotient_precision
    )


@dataclass
class StabilityReport:
    i: int
    degree_p: int
    degree_q: int
    ord_p: int
    unit_order: OrderResult
    unit_threshold: int
    coeff_orders: list
    coeff_thresholds: list

    @property
    def degrees_equal(self):
        return self.degree_p == self.degree_q

    @property
    def unit_ok(self):
        return meets(self.unit_order, self.unit_threshold)

    @property
    def coeffs_ok(self):
        return self.degrees_equal and all(
            meets(o, th) for o, th in zip(self.coeff_orders, self.coeff_thresholds)
        )

    @property
    def passed(self):
        return self.degrees_equal and self.unit_ok and self.coeffs_ok


def stability_check(P: Series2, Q: Series2, i: int) -> StabilityReport:
    """Compare the preparations of two series that agree modulo ``(t, z)^i``.

    Expected: equal degrees, ``ord(u - v) >= i - d`` and
    ``ord(a_j - b_j) >= i - d + ord(P) - j``; nonpositive thresholds are vacuous.
    """
    d = z_order(P)
    if isinstance(d, AtLeast):
        raise NotZRegular("P is not z-regular")
    if i <= d:
        raise PreconditionViolated(f"need i > d, got i={i}, d={d}")
    if not meets((P - Q).ord(), i):
        raise PreconditionViolated(f"P - Q is not certified in (t,z)^{i}")
    fp, fq = prepare(P), prepare(Q)
    ord_p = P.ord()
    unit_order = (fp.unit - fq.unit).ord()
    orders, thresholds = [], []
    if fp.degree == fq.degree:
        for j, (a, b) in enumerate(zip(fp.coeffs, fq.coeffs)):
            orders.append((a - b).ord())
            thresholds.append(max(0, i - d + ord_p - j))
    return StabilityReport(
        i=i,
        degree_p=fp.degree,
        degree_q=fq.degree,
        ord_p=ord_p,
        unit_order=unit_order,
        unit_threshold=i - d,
        coeff_orders=orders,
        coeff_thresholds=thresholds,
    )
