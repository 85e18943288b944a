"""Energy levels and light-cone kinematics.

Natural units (hbar = c = 1) throughout.  The bound-state problem
separates along the filament axis: the longitudinal momentum kappa is a
good quantum number (quantized as 2 pi Ntilde / L in a periodic box of
length L) and the transverse dynamics collapses to a radial eigenvalue
problem whose levels depend only on the principal number N = 2(n+k)+1.

The light-cone combinations epsilon = E + kappa and 2M = E - kappa link
the lab energy E to the reduced radial eigenvalue

    epsilon_tilde = (epsilon - m^2/(2M)) / (2 M lambda_tilde^2) = -1/N^2,

and solving that relation for E gives the closed-form relativistic
spectrum implemented here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError, KinematicsError, ParameterError

SPEED_OF_LIGHT_SI = 299792458.0  # m/s, used only by the SI reporting helper


@dataclass(frozen=True)
class SpectrumParams:
    """Physical inputs: mass m, Lande factor g, magneton mu0, filament
    coupling omega (omega = 2 j for filament current j), and the periodic
    box length L for the free longitudinal motion."""

    m: float
    g: float
    mu0: float
    omega: float
    L: float

    def __post_init__(self) -> None:
        if not (self.m > 0.0):
            raise ParameterError(f"invariant m > 0 violated: m = {self.m!r}")
        if not (self.mu0 > 0.0):
            raise ParameterError(f"invariant mu0 > 0 violated: mu0 = {self.mu0!r}")
        if not (self.L > 0.0):
            raise ParameterError(f"invariant L > 0 violated: L = {self.L!r}")
        for name in ("m", "g", "mu0", "omega", "L"):
            if not math.isfinite(getattr(self, name)):
                raise ParameterError(f"invariant finite({name}) violated")


@dataclass(frozen=True)
class QuantumNumbers:
    """Radial number n >= 0, angular sector k >= 0, principal number
    N = 2(n+k)+1 (always odd), and longitudinal mode number Ntilde."""

    n: int
    k: int
    N: int
    Ntilde: int

    def __post_init__(self) -> None:
        if self.n < 0 or self.k < 0:
            raise DomainError(f"invariant n, k >= 0 violated: n={self.n}, k={self.k}")
        if self.N != 2 * (self.n + self.k) + 1:
            raise DomainError(
                f"invariant N = 2(n+k)+1 violated: N={self.N}, n={self.n}, k={self.k}"
            )

    @classmethod
    def for_state(cls, n: int, k: int, Ntilde: int = 0) -> "QuantumNumbers":
        return cls(n=int(n), k=int(k), N=2 * (int(n) + int(k)) + 1, Ntilde=int(Ntilde))


@dataclass(frozen=True)
class LightConeKinematics:
    """Derived light-cone quantities for a lab pair (E, kappa).

    epsilon_tilde is the reduced radial eigenvalue; it is NaN when
    lambda_tilde = 0 (the radial problem degenerates to free motion and
    the 1/lambda_tilde^2 normalization is undefined).
    """

    E: float
    kappa: float
    epsilon: float
    M: float
    epsilon0: float
    epsilon_prime: float
    epsilon_tilde: float


def coupling_lambda_tilde(p: SpectrumParams) -> float:
    """Dimensionless radial coupling lambda_tilde = g * mu0 * omega
    (equivalently 2 g mu0 j with filament current j = omega / 2)."""
    return p.g * p.mu0 * p.omega


def si_charge_density(current: float) -> float:
    """SI line charge density rho = j / c^2 matching a line current j so
    that the combined filament potential stays light-like."""
    return current / SPEED_OF_LIGHT_SI**2


def _check_principal(N: int) -> int:
    if int(N) != N or N < 1 or N % 2 == 0:
        raise DomainError(f"principal number must be an odd integer >= 1, got {N!r}")
    return int(N)


def reduced_eigenvalue(n: int, k: int) -> float:
    """Radial eigenvalue -1/N^2 with N = 2(n+k)+1; depends on n and k
    only through their sum."""
    if n < 0 or k < 0:
        raise DomainError(f"quantum numbers must be non-negative, got n={n!r}, k={k!r}")
    N = 2 * (int(n) + int(k)) + 1
    return -1.0 / (N * N)


def nonrel_energy(lambda_tilde: float, M: float, N: int) -> float:
    """Binding energy epsilon' = -2 lambda_tilde^2 M / N^2 of underlying
    Galilei-invariant problem at fixed light-cone mass M > 0."""
    if not (M > 0.0):
        raise DomainError(f"light-cone mass must be positive, got M = {M!r}")
    N = _check_principal(N)
    return -2.0 * lambda_tilde**2 * M / N**2


def relativistic_energy(m: float, lambda_tilde: float, kappa: float, N: int) -> float:
    """Exact lab energy

        E = m/(1 + v) * (v*kappa_t + sqrt(1 + kappa_t^2 + v)),
        v = (lambda_tilde/N)^2,  kappa_t = kappa/m.

    This is the positive root of the light-cone dispersion relation
    (E + kappa) - m^2/(E - kappa) = -v (E - kappa), so E > kappa always.
    """
    if not (m > 0.0):
        raise DomainError(f"mass must be positive, got m = {m!r}")
    N = _check_principal(N)
    v = (lambda_tilde / N) ** 2
    kt = kappa / m
    return m / (1.0 + v) * (v * kt + math.sqrt(1.0 + kt * kt + v))


def quasirel_energy(m: float, lambda_tilde: float, kappa: float, N: int) -> float:
    """Quasi-relativistic expansion of the exact level:

        E ~ m + kappa^2/2m - kappa^4/8m^3 - m lambda_k^2 / (2 N^2)

    with the recoil-corrected coupling lambda_k = (1 - kappa/m) lambda_tilde.
    Accurate to combined fourth order in (lambda_tilde, kappa/m).
    """
    if not (m > 0.0):
        raise DomainError(f"mass must be positive, got m = {m!r}")
    N = _check_principal(N)
    kt = kappa / m
    lambda_k = (1.0 - kt) * lambda_tilde
    return m + kappa**2 / (2.0 * m) - kappa**4 / (8.0 * m**3) - m * lambda_k**2 / (2.0 * N**2)


def nonrel_lab_energy(m: float, lambda_tilde: float, kappa: float, N: int) -> float:
    """Galilean-limit lab energy: rest mass, longitudinal kinetic term,
    and the uncorrected binding defect -m lambda_tilde^2 / (2 N^2)."""
    if not (m > 0.0):
        raise DomainError(f"mass must be positive, got m = {m!r}")
    N = _check_principal(N)
    return m + kappa**2 / (2.0 * m) - m * lambda_tilde**2 / (2.0 * N**2)


def quantized_kappa(L: float, Ntilde: int) -> float:
    """Longitudinal momentum 2 pi Ntilde / L from periodic boundary
    conditions on a box of length L; Ntilde may take either sign."""
    if not (L > 0.0):
        raise DomainError(f"box length must be positive, got L = {L!r}")
    return 2.0 * math.pi * Ntilde / L


def lightcone_kinematics(E: float, kappa: float, m: float, lambda_tilde: float) -> LightConeKinematics:
    """All derived light-cone quantities for a lab pair (E, kappa).

    Raises KinematicsError when E <= kappa, where the light-cone mass
    M = (E - kappa)/2 would not be positive (excluded for bound states).
    """
    if not (E > kappa):
        raise KinematicsError(f"require E > kappa, got E = {E!r}, kappa = {kappa!r}")
    epsilon = E + kappa
    M = 0.5 * (E - kappa)
    epsilon0 = m * m / (2.0 * M)
    epsilon_prime = epsilon - epsilon0
    if lambda_tilde == 0.0:
        epsilon_tilde = math.nan
    else:
        epsilon_tilde = epsilon_prime / (2.0 * M * lambda_tilde**2)
    return LightConeKinematics(
        E=E,
        kappa=kappa,
        epsilon=epsilon,
        M=M,
        epsilon0=epsilon0,
        epsilon_prime=epsilon_prime,
        epsilon_tilde=epsilon_tilde,
    )
