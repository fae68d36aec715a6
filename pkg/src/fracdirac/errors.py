"""Exception types raised across the package."""


class FracDiracError(Exception):
    """Base class for all package errors."""


class ParameterError(FracDiracError, ValueError):
    """An input lies outside the admissible parameter set."""


class PoleError(FracDiracError, ValueError):
    """A Gamma function pole was hit."""

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class ConvergenceError(FracDiracError, ArithmeticError):
    """A series, quadrature or contour integral did not reach its tolerance."""

    def __init__(self, message, estimate=None):
        super().__init__(message)
        self.estimate = estimate


class SpaceMismatchError(FracDiracError, ValueError):
    """A field was passed in the wrong (physical/spectral) representation."""
