"""Matrix-superpotential ladder algebra for the reduced radial problem.

The two-component radial system

    H_k = -d^2/dr^2 + k(k - sigma3)/r^2 + sigma1/r

factorizes as H_k = a_k^+ a_k + C_k with first-order operators
a_k = d/dr + W_k, a_k^+ = -d/dr + W_k built from the matrix superpotential

    W_k = sigma3/(2r) - sigma1/(2k+1) - (k + 1/2)/r,   C_k = -1/(2k+1)^2,

and the partner ordering a_k a_k^+ + C_k = H_{k+1} (shape invariance).
Every bound state is reached exactly inside the c * r^p * K(r/a) family:
the sector-k ground state is annihilated by a_k, and the n-th excited
state is the chain a_k^+ a_{k+1}^+ ... a_{k+n-1}^+ applied to the ground
state of sector k+n.  All operator applications below are exact algebra
on KExpr; only quadrature-based norms are numeric.

Sign convention: the sigma1 coupling enters with coefficient +1.  A
global sign flip is unitarily equivalent by sigma3 conjugation and leaves
every eigenvalue unchanged, so it is fixed here once and not configurable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np
from scipy.integrate import quad

from . import bessel_algebra as ba
from .errors import DivergenceError, DomainError
from .specfun import _X_OVERFLOW

KPair = tuple[ba.KExpr, ba.KExpr]

ZERO_PAIR: KPair = (ba.ZERO, ba.ZERO)


@dataclass(frozen=True)
class SectorOperators:
    """Exact superpotential coefficients of sector k.

    W acts on a pair (f1, f2) as
        (W f)_1 = (W_diag_coeff + W_scalar)/r * f1 + W_offdiag * f2
        (W f)_2 = (-W_diag_coeff + W_scalar)/r * f2 + W_offdiag * f1
    and C_k = -(W_offdiag)^2 identically.
    """

    k: int
    W_diag_coeff: Fraction
    W_offdiag: Fraction
    W_scalar: Fraction
    C_k: Fraction

    def __post_init__(self) -> None:
        if self.k < 0:
            raise DomainError(f"sector index must be >= 0, got {self.k}")
        if self.C_k != -(self.W_offdiag**2):
            raise DomainError("invariant C_k = -(W_offdiag)^2 violated")

    @classmethod
    def for_sector(cls, k: int) -> "SectorOperators":
        if k < 0:
            raise DomainError(f"sector index must be >= 0, got {k!r}")
        k = int(k)
        off = Fraction(-1, 2 * k + 1)
        return cls(
            k=k,
            W_diag_coeff=Fraction(1, 2),
            W_offdiag=off,
            W_scalar=-(Fraction(k) + Fraction(1, 2)),
            C_k=-(off**2),
        )


OpsFactory = Callable[[int], SectorOperators]


@dataclass(frozen=True)
class RadialSpinorExpr:
    """Exact bound-state radial pair (phi1, phi2) for quantum numbers
    (n, k), with eigenvalue eps_tilde = -1/(2(n+k)+1)^2."""

    phi1: ba.KExpr
    phi2: ba.KExpr
    n: int
    k: int
    eps_tilde: float

    def __post_init__(self) -> None:
        if self.n < 0 or self.k < 0:
            raise DomainError(f"invariant n, k >= 0 violated: n={self.n}, k={self.k}")
        N = 2 * (self.n + self.k) + 1
        if self.eps_tilde != -1.0 / (N * N):
            raise DomainError(
                f"invariant eps_tilde = -1/(2(n+k)+1)^2 violated: {self.eps_tilde!r}"
            )

    @property
    def components(self) -> KPair:
        return (self.phi1, self.phi2)

    @property
    def principal(self) -> int:
        return 2 * (self.n + self.k) + 1

    def evaluate(self, r: float) -> tuple[float, float]:
        return ba.evaluate(self.phi1, r), ba.evaluate(self.phi2, r)


def _superpotential_apply(ops: SectorOperators, f: KPair) -> KPair:
    f1, f2 = f
    c1 = float(ops.W_diag_coeff + ops.W_scalar)  # -k for the standard sector
    c2 = float(-ops.W_diag_coeff + ops.W_scalar)  # -(k+1)
    off = float(ops.W_offdiag)
    out1 = ba.combine(ba.shift_power(f1, -1), f2, c1, off)
    out2 = ba.combine(ba.shift_power(f2, -1), f1, c2, off)
    return out1, out2


def lowering_apply(k: int, f: KPair, ops: SectorOperators | None = None) -> KPair:
    """a_k f = f' + W_k f, componentwise exact:
    out1 = f1' - (k/r) f1 - f2/(2k+1), out2 = f2' - ((k+1)/r) f2 - f1/(2k+1).
    """
    if ops is None:
        ops = SectorOperators.for_sector(k)
    w1, w2 = _superpotential_apply(ops, f)
    return (
        ba.combine(ba.differentiate(f[0]), w1, 1.0, 1.0),
        ba.combine(ba.differentiate(f[1]), w2, 1.0, 1.0),
    )


def raising_apply(k: int, f: KPair, ops: SectorOperators | None = None) -> KPair:
    """a_k^+ f = -f' + W_k f; only the derivative sign differs from a_k."""
    if ops is None:
        ops = SectorOperators.for_sector(k)
    w1, w2 = _superpotential_apply(ops, f)
    return (
        ba.combine(ba.differentiate(f[0]), w1, -1.0, 1.0),
        ba.combine(ba.differentiate(f[1]), w2, -1.0, 1.0),
    )


def hamiltonian_apply(k: int, f: KPair) -> KPair:
    """H_k f with the centrifugal matrix k(k - sigma3)/r^2 and coupling
    sigma1/r:  out1 = -f1'' + k(k-1) f1/r^2 + f2/r,
               out2 = -f2'' + k(k+1) f2/r^2 + f1/r.
    """
    if k < 0:
        raise DomainError(f"sector index must be >= 0, got {k!r}")
    f1, f2 = f
    d2f1 = ba.differentiate(ba.differentiate(f1))
    d2f2 = ba.differentiate(ba.differentiate(f2))
    cent1 = ba.shift_power(f1, -2)
    cent2 = ba.shift_power(f2, -2)
    out1 = ba.combine(
        ba.combine(d2f1, cent1, -1.0, float(k * (k - 1))), ba.shift_power(f2, -1), 1.0, 1.0
    )
    out2 = ba.combine(
        ba.combine(d2f2, cent2, -1.0, float(k * (k + 1))), ba.shift_power(f1, -1), 1.0, 1.0
    )
    return out1, out2


def ground_state(k: int) -> RadialSpinorExpr:
    """Sector-k ground state, annihilated by a_k:
    phi1 = r^{k+1} K1(r/(2k+1)), phi2 = -r^{k+1} K0(r/(2k+1))."""
    if k < 0:
        raise DomainError(f"sector index must be >= 0, got {k!r}")
    k = int(k)
    scale = Fraction(2 * k + 1)
    return RadialSpinorExpr(
        phi1=ba.single(1.0, k + 1, ba.K1, scale),
        phi2=ba.single(-1.0, k + 1, ba.K0, scale),
        n=0,
        k=k,
        eps_tilde=-1.0 / (2 * k + 1) ** 2,
    )


def excited_state(n: int, k: int) -> RadialSpinorExpr:
    """n-th bound state of sector k by the exact raising chain
    a_k^+ a_{k+1}^+ ... a_{k+n-1}^+ applied to ground_state(k+n)."""
    if n < 0 or k < 0:
        raise DomainError(f"quantum numbers must be >= 0, got n={n!r}, k={k!r}")
    n, k = int(n), int(k)
    pair = ground_state(k + n).components
    for j in range(k + n - 1, k - 1, -1):
        pair = raising_apply(j, pair)
    N = 2 * (n + k) + 1
    return RadialSpinorExpr(phi1=pair[0], phi2=pair[1], n=n, k=k, eps_tilde=-1.0 / (N * N))


# --------------------------------------------------------------- quadrature


def _value_truncated(e: ba.KExpr, r: float) -> float:
    # evaluation for quadrature at large r: a Bessel factor past the
    # overflow guard is below 1e-300 and contributes exact zero; power
    # overflow maps to inf so the truncation loop sees the divergence
    total = 0.0
    for t in e.terms:
        arg = r / float(t.scale)
        if arg > _X_OVERFLOW:
            continue
        k = ba.bessel_k0(arg) if t.kind == ba.K0 else ba.bessel_k1(arg)
        try:
            total += t.coeff * r**t.power * k
        except OverflowError:
            return math.inf
    return total


def _bilinear_integral(a: KPair, b: KPair) -> float:
    """Integral of a1*b1 + a2*b2 over (0, inf), truncated where the
    exponential Bessel decay makes the tail negligible.  The truncation
    radius starts at 20 * (largest Bessel scale) and doubles, up to eight
    times, whenever the next octave still contributes more than 1e-9 of
    the accumulated integral; failure to settle raises DivergenceError.
    """
    exprs = [*a, *b]
    if all(not e.terms for e in exprs):
        return 0.0

    def integrand(r: float) -> float:
        return _value_truncated(a[0], r) * _value_truncated(b[0], r) + _value_truncated(
            a[1], r
        ) * _value_truncated(b[1], r)

    r_max = 20.0 * float(ba.max_scale(*exprs))
    total, _ = quad(integrand, 0.0, r_max, epsabs=1e-13, epsrel=1e-10, limit=200)
    if not math.isfinite(total):
        raise DivergenceError("radial integral overflows double precision")
    for _ in range(8):
        tail, _ = quad(integrand, r_max, 2.0 * r_max, epsabs=1e-13, epsrel=1e-10, limit=200)
        if not math.isfinite(tail):
            raise DivergenceError("radial integral overflows double precision")
        if abs(tail) <= 1e-9 * max(abs(total), 1e-300):
            return total
        total += tail
        r_max *= 2.0
    raise DivergenceError(
        f"radial integral did not settle by r = {r_max!r}; input looks non-normalizable"
    )


def norm_squared(f: KPair) -> float:
    """Squared L2 norm of the pair: integral of f1^2 + f2^2 dr."""
    return _bilinear_integral(f, f)


def inner_product(f: KPair, g: KPair) -> float:
    """Real L2 pairing integral of f1*g1 + f2*g2 dr."""
    return _bilinear_integral(f, g)


def normalize(state: RadialSpinorExpr) -> RadialSpinorExpr:
    """Same state scaled to unit L2 norm of (phi1, phi2)."""
    nsq = norm_squared(state.components)
    if not (nsq > 0.0):
        raise DomainError("cannot normalize the zero radial pair")
    c = 1.0 / math.sqrt(nsq)
    return RadialSpinorExpr(
        phi1=ba.scaled(state.phi1, c),
        phi2=ba.scaled(state.phi2, c),
        n=state.n,
        k=state.k,
        eps_tilde=state.eps_tilde,
    )


# ------------------------------------------------------- unitary equivalence

_SIGMA1 = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
_SIGMA2 = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
_SIGMA3 = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
_U = (np.eye(2, dtype=complex) - 1.0j * _SIGMA3) / math.sqrt(2.0)


def unitary_equivalence_check(x1: float, x2: float) -> float:
    """Residual of the rotation that trades the planar sigma-coupling for
    a spin-orbit form: max entry magnitude of

        U (sigma1 x1 + sigma2 x2)/x^2 U^+  +  2 (S1 x2 - S2 x1)/x^2

    with U = (1 - i sigma3)/sqrt(2) and S_a = sigma_a/2.  Identically zero
    in exact arithmetic; the contract bound is 1e-14.
    """
    if not (math.isfinite(x1) and math.isfinite(x2)):
        raise DomainError(f"point must be finite, got ({x1!r}, {x2!r})")
    x_sq = x1 * x1 + x2 * x2
    if x_sq == 0.0:
        raise DomainError("the filament line x1 = x2 = 0 is excluded")
    original = (_SIGMA1 * x1 + _SIGMA2 * x2) / x_sq
    rotated = _U @ original @ _U.conj().T
    spin_orbit = (_SIGMA1 * x2 - _SIGMA2 * x1) / x_sq
    return float(np.max(np.abs(rotated + spin_orbit)))
