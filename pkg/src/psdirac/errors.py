"""Exception taxonomy shared by all modules.

Two broad families matter for scripting: input problems (bad arguments,
out-of-domain points, unusable grids) and numerical failures (solver
breakdown, non-convergent iterations, divergent integrals).  The command
line front end maps the first family to exit code 2 and the second to
exit code 3.
"""


class PsdiracError(Exception):
    """Base class for every error raised by this package."""


class InputError(PsdiracError, ValueError):
    """Base class for invalid arguments, domains, or configurations."""


class NumericalError(PsdiracError, RuntimeError):
    """Base class for runtime numerical failures."""


class DomainError(InputError):
    """Argument outside the mathematical domain of a function."""


class RangeError(InputError):
    """Argument so extreme that double precision would silently
    overflow or underflow; signalled instead of returning garbage."""


class ParameterError(InputError):
    """Physical parameter record violates one of its invariants."""


class KinematicsError(InputError):
    """Energy-momentum pair with E <= kappa; the light-cone mass
    parameter would not be positive."""


class GridError(InputError):
    """Unusable radial grid (non-positive spacing, too few points,
    or a refinement sequence that is not geometric)."""


class PotentialError(InputError):
    """Reduced potential that is non-finite on the grid or more
    singular than 1/r^2 at the origin."""


class StencilError(InputError):
    """Finite-difference stencil would reach across the filament
    singularity; the requested point is too close to the axis."""


class DivergenceError(NumericalError):
    """Integrand failed to decay on repeatedly enlarged truncation
    domains; the input is not square integrable in practice."""


class SolverError(NumericalError):
    """Banded eigenvalue bisection failed; carries diagnostics."""


class ConvergenceError(NumericalError):
    """Iteration exceeded its bound without meeting tolerance."""
