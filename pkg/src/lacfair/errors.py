"""Exception hierarchy.

Every error raised on purpose by the package derives from :class:`LacError`
(itself a ``ValueError``), so callers can catch one type.
"""


class LacError(ValueError):
    """Base class for all package errors."""


class DomainError(LacError):
    """An arc-length argument lies outside the basic LAC's maximal interval."""


class QuadratureError(LacError):
    """Adaptive quadrature did not reach the requested tolerance."""


class FeasibilityError(LacError):
    """A parameter vector lies outside the admissible set."""


class DegenerateInputError(LacError):
    """The input curve cannot be processed (zero curvature, too short, ...)."""


class CuspError(DegenerateInputError):
    """Two consecutive tangents are antiparallel."""

    def __init__(self, index, message=None):
        self.index = index
        super().__init__(message or f"antiparallel tangents at vertex {index}")


class NotLacSegmentError(DegenerateInputError):
    """Curvature changes sign or is not strictly monotone in magnitude."""


class NoisyDataError(DegenerateInputError):
    """Curvature data is too noisy for parameter recovery (smooth it first)."""


class LengthDeficitError(LacError):
    """A curve is too short for the requested equal-chord sampling."""


class ParseError(LacError):
    """Malformed input file."""
