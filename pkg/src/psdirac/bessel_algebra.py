"""Exact algebra over finite sums c * r^p * K_{0|1}(r / a).

The radial ladder operators map this family into itself, so annihilation,
factorization, and eigenvalue checks reduce to exact cancellation of term
coefficients instead of sampling.  Scales a are exact rationals (they are
always of the form 2k+1 here), powers are integers, and coefficients are
doubles.  Term keys compare exactly; only coefficients carry rounding.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Sequence

from .errors import DomainError
from .specfun import bessel_k0, bessel_k1

# kind tags
K0 = 0
K1 = 1


@dataclass(frozen=True, order=True)
class KTerm:
    """One term coeff * r^power * K_kind(r / scale)."""

    coeff: float
    power: int
    kind: int
    scale: Fraction


def term(coeff: float, power: int, kind: int, scale: Rational = 1) -> KTerm:
    """Validating KTerm constructor; scale accepts int or Fraction only,
    keeping scale equality exact."""
    coeff = float(coeff)
    if not math.isfinite(coeff):
        raise DomainError(f"term coefficient must be finite, got {coeff!r}")
    if kind not in (K0, K1):
        raise DomainError(f"kind must be 0 (K0) or 1 (K1), got {kind!r}")
    if not isinstance(scale, Rational):
        raise DomainError(f"scale must be an exact rational, got {scale!r}")
    scale = Fraction(scale)
    if scale <= 0:
        raise DomainError(f"scale must be positive, got {scale}")
    return KTerm(coeff, int(power), kind, scale)


@dataclass(frozen=True)
class KExpr:
    """Finite term sum.  ``coeff_scale`` records the largest coefficient
    magnitude seen before merging, the reference for relative zero tests;
    the zero expression is the empty term tuple."""

    terms: tuple[KTerm, ...] = ()
    canonical: bool = True
    coeff_scale: float = 0.0


ZERO = KExpr()


def canonicalize(raw: Sequence[KTerm] | KExpr) -> KExpr:
    """Sort by (scale, kind, power), merge equal keys, drop exact zeros."""
    if isinstance(raw, KExpr):
        if raw.canonical:
            return raw
        raw = raw.terms
    reference = max((abs(t.coeff) for t in raw), default=0.0)
    merged: dict[tuple[Fraction, int, int], float] = {}
    for t in raw:
        key = (t.scale, t.kind, t.power)
        merged[key] = merged.get(key, 0.0) + t.coeff
    kept = tuple(
        KTerm(c, p, kind, scale)
        for (scale, kind, p), c in sorted(merged.items())
        if c != 0.0
    )
    return KExpr(kept, True, reference)


def from_terms(terms: Iterable[KTerm]) -> KExpr:
    return canonicalize(list(terms))


def single(coeff: float, power: int, kind: int, scale: Rational = 1) -> KExpr:
    return from_terms([term(coeff, power, kind, scale)])


def differentiate(e: KExpr) -> KExpr:
    """Exact d/dr inside the family:
    d/dr[r^p K0(r/a)] = p r^(p-1) K0 - (1/a) r^p K1
    d/dr[r^p K1(r/a)] = (p-1) r^(p-1) K1 - (1/a) r^p K0
    """
    raw: list[KTerm] = []
    for t in e.terms:
        inv_scale = 1.0 / float(t.scale)
        if t.kind == K0:
            raw.append(KTerm(t.coeff * t.power, t.power - 1, K0, t.scale))
            raw.append(KTerm(-t.coeff * inv_scale, t.power, K1, t.scale))
        else:
            raw.append(KTerm(t.coeff * (t.power - 1), t.power - 1, K1, t.scale))
            raw.append(KTerm(-t.coeff * inv_scale, t.power, K0, t.scale))
    return canonicalize(raw)


def combine(a: KExpr, b: KExpr, ca: float, cb: float) -> KExpr:
    """Canonicalized ca*a + cb*b."""
    raw = [KTerm(ca * t.coeff, t.power, t.kind, t.scale) for t in a.terms]
    raw += [KTerm(cb * t.coeff, t.power, t.kind, t.scale) for t in b.terms]
    return canonicalize(raw)


def scaled(e: KExpr, c: float) -> KExpr:
    return combine(e, ZERO, c, 0.0)


def shift_power(e: KExpr, s: int) -> KExpr:
    """Multiply by r^s: every power shifted by s."""
    s = int(s)
    return canonicalize([KTerm(t.coeff, t.power + s, t.kind, t.scale) for t in e.terms])


def evaluate(e: KExpr, r: float) -> float:
    """Numerical value at r > 0, each Bessel factor from specfun."""
    r = float(r)
    if not (r > 0.0) or not math.isfinite(r):
        raise DomainError(f"evaluation requires r > 0, got {r!r}")
    total = 0.0
    for t in e.terms:
        arg = r / float(t.scale)
        k = bessel_k0(arg) if t.kind == K0 else bessel_k1(arg)
        total += t.coeff * r**t.power * k
    return total


def is_zero(e: KExpr, tol: float) -> bool:
    """True iff after canonicalization every coefficient magnitude is at
    most tol times the largest pre-merge coefficient magnitude (or times
    1 when the inputs were already all zero)."""
    if tol < 0.0:
        raise DomainError(f"tolerance must be non-negative, got {tol!r}")
    e = canonicalize(e)
    reference = e.coeff_scale if e.coeff_scale > 0.0 else 1.0
    return all(abs(t.coeff) <= tol * reference for t in e.terms)


def max_scale(*exprs: KExpr) -> Fraction:
    """Largest Bessel scale appearing in the given expressions; 1 when
    they are all zero.  Sets decay-based truncation radii."""
    best = Fraction(1)
    for e in exprs:
        for t in e.terms:
            if t.scale > best:
                best = t.scale
    return best
