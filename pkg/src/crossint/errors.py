"""Exception types shared across the package."""


class ParameterError(ValueError):
    """A precondition on numeric parameters does not hold."""


class GroundMismatch(ValueError):
    """Sets or families over different ground sets (or sizes) were combined."""


class BudgetExceeded(RuntimeError):
    """An exhaustive enumeration would exceed its configured ceiling."""

    def __init__(self, what, needed, limit):
        self.what = what
        self.needed = needed
        self.limit = limit
        super().__init__(f"{what}: needs {needed}, budget is {limit}")
