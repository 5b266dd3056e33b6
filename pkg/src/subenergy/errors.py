"""Exception types shared across the package."""


class DomainError(ValueError):
    """An input lies outside the physically or mathematically valid domain."""


class ToleranceError(RuntimeError):
    """A numerical procedure could not meet the requested tolerance.

    Carries the measured error and the requested tolerance so callers
    (and the CLI) can report how far off the computation was.
    """

    def __init__(self, message: str, *, measured: float | None = None,
                 required: float | None = None):
        if measured is not None and required is not None:
            message = f"{message} (measured {measured:.3e}, required {required:.3e})"
        super().__init__(message)
        self.measured = measured
        self.required = required
