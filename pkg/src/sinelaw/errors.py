"""Exception types shared across the package."""


class ConvergenceError(RuntimeError):
    """A quadrature or series did not reach the requested tolerance.

    Carries the best available estimate and its error bound so callers can
    decide whether the partial result is still usable.
    """

    def __init__(self, message, best=None, error_bound=None):
        super().__init__(message)
        self.best = best
        self.error_bound = error_bound


class ModelViolationError(ValueError):
    """Input data violates a structural assumption (e.g. a transform that
    must stay nonnegative went negative on some interval)."""


class BracketError(ValueError):
    """A root bracket could not be established within the search cap."""
