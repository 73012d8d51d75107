"""Exception hierarchy.

Every failure the library raises on purpose derives from ``MNLSError``.
The CLI maps ``ConfigError`` to exit code 2 and every other ``MNLSError``
to exit code 3.
"""


class MNLSError(Exception):
    """Base class for library errors."""


class ConfigError(MNLSError, ValueError):
    """Invalid experiment configuration or invalid parameters."""


class NumericalError(MNLSError, ArithmeticError):
    """Base class for numerical failures."""


class OutOfRange(NumericalError):
    """No real spectral preimage, or a query outside a tabulated range."""


class UnresolvedOscillation(NumericalError):
    """Grid spacing too coarse for the oscillation frequency."""


class NonFinite(NumericalError):
    """Overflow or NaN encountered."""


class ReflectionAtUnit(NumericalError):
    """|r| reached 1 (or 1 - |r|^2 underflowed); defocusing assumption broken."""


class NearPole(NumericalError):
    """Evaluation too close to a pole of a reflection coefficient."""


class OnCut(NumericalError):
    """Evaluation on (or too close to) the branch cut of delta."""


class TailNotNegligible(NumericalError):
    """Reflection data not negligible at the end of the tabulated range."""


class Pole(NumericalError):
    """Gamma function evaluated at a nonpositive integer."""


class DegenerateReflection(NumericalError):
    """Model problem requested with vanishing reflection data."""


class OnRealAxis(NumericalError):
    """Model solution requested on its jump contour."""


class RayMismatch(NumericalError):
    """(x, t) does not lie on the ray the asymptotic inputs were prepared for."""


class Unstable(NumericalError):
    """PDE integration blew up."""


class BadStep(NumericalError):
    """Final time is not an integer multiple of the time step."""


class NonMonotoneError(NumericalError):
    """Comparison error does not decrease over the late part of the schedule."""
