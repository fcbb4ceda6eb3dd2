"""Exception types shared across the package."""


class GeometryError(ValueError):
    """Emitter placed inside or on the boundary of the integration region."""


class ConvergenceError(RuntimeError):
    """An adaptive integration ran out of budget before reaching tolerance.

    Carries the best available result so callers can degrade gracefully:
    ``best`` is whatever the failing routine would have returned (value,
    error estimate, evaluation count), ``best_rate`` the assembled rate
    result when raised from a rate-level routine.
    """

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best
