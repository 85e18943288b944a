"""Exactly solvable bound states of a neutral spin-1/2 fermion with an
anomalous magnetic moment in the field of a charged, current-carrying
filament, together with an independent finite-difference eigensolver that
cross-checks every analytic claim.

Modules
-------
specfun          modified Bessel functions K0, K1 (double precision)
bessel_algebra   exact term algebra over sums of r^p K_{0|1}(r/a)
spectra          energy-level formulas and light-cone kinematics
susy_radial      matrix superpotential, ladder operators, radial states
oracle           banded finite-difference eigensolver (independent check)
fields_solution  external field, full bispinor assembly, residual checks
verify           invariant suite shared by the tests and the CLI
cli              command line front end (spectrum/wavefunction/oracle/
                 verify/fields) emitting CSV or JSON
"""

__version__ = "0.1.0"

__all__ = [
    "bessel_algebra",
    "cli",
    "errors",
    "fields_solution",
    "oracle",
    "spectra",
    "specfun",
    "susy_radial",
    "verify",
]
