"""Exception types shared across the toolkit."""


class GrassPixelError(Exception):
    """Base class for all toolkit errors."""


class ValidationError(GrassPixelError, ValueError):
    """An input violates a documented precondition."""


class RegionError(ValidationError):
    """A crop region does not fit inside the image."""


class FittingError(GrassPixelError):
    """The checker correction could not be fitted (rank-deficient design)."""


class DegenerateSegmentError(ValidationError):
    """The two segment endpoints coincide."""


class NonMonotoneError(GrassPixelError):
    """Color difference along the segment is not strictly increasing."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class BracketError(GrassPixelError):
    """Bisection could not bracket or resolve a root."""


class InfeasibleMappingError(GrassPixelError):
    """A scale mapping cannot serve a level lookup."""


class ConfigError(GrassPixelError):
    """A session or command configuration is malformed or references missing files."""
