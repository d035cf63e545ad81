"""Exception types shared across the package."""

__all__ = [
    "GapEdgeError",
    "ConvergenceError",
    "ExtrapolationError",
    "AccuracyWindowError",
]


class GapEdgeError(ValueError):
    """Energy too close to |E| = M: the decay constant underflows."""


class ConvergenceError(RuntimeError):
    """An iterative procedure failed to reach its tolerance."""

    def __init__(self, message, bracket=None):
        super().__init__(message)
        self.bracket = bracket


class ExtrapolationError(RuntimeError):
    """Width extrapolation rejected the input data."""


class AccuracyWindowError(ValueError):
    """Argument outside the range where the method meets its accuracy."""
