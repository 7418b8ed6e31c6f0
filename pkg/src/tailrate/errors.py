"""Exception types shared across the package."""


class InputError(ValueError):
    """Invalid argument or malformed input (CLI exit code 2)."""


class CapacityError(RuntimeError):
    """An enumeration cap was exceeded (CLI exit code 3)."""


class BudgetExceeded(RuntimeError):
    """A search or optimisation budget ran out before a decision was reached.

    Distinct from a negative answer: the question is undecided.
    """

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best
