"""Exception types shared across densitylab."""


class UndefinedInputError(ValueError):
    """Raised when a function is evaluated where it has no value (e.g. P+(1))."""


class ConstructionError(RuntimeError):
    """A set construction cannot be carried out with the given parameters."""


class CapacityError(RuntimeError):
    """Requested work exceeds a configured engine or budget capacity."""

    def __init__(self, message, estimate=None, budget=None):
        super().__init__(message)
        self.estimate = estimate
        self.budget = budget
