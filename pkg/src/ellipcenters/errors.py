"""Exception types shared across the solver modules."""


class NumericError(RuntimeError):
    """Floating-point trouble: lost brackets, exhausted budgets, non-finite values."""


class NonCoerciveError(NumericError):
    """The objective never grew back along a ray; it is not strongly convex."""


class StationaryPointError(ValueError):
    """An operation that needs a nonzero gradient was handed a stationary point."""


class DependentGradientsError(Exception):
    """The two gradients spanning the working plane are numerically collinear."""


class TangentialGradientError(Exception):
    """The gradient at the level point is orthogonal to the chord, so the
    center direction is undefined."""
