"""Exception types shared across the package."""


class InvalidEntryError(ValueError):
    """A matrix entry, weight, or vector component is not strictly positive."""


class ShapeError(ValueError):
    """Dimensions of an input do not match what the operation requires."""


class ParameterError(ValueError):
    """A scalar parameter is outside its admissible range."""


class ConvergenceError(RuntimeError):
    """Power iteration did not reach the residual tolerance.

    Carries the last residual so callers can report how far off it was.
    """

    def __init__(self, message: str, residual: float, iterations: int):
        super().__init__(message)
        self.residual = residual
        self.iterations = iterations


class EmptyCellError(ValueError):
    """Aggregation was asked to summarize an empty set of trial records."""
