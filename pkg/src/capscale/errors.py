"""Exception types shared across the toolkit."""


class ValidationError(ValueError):
    """An input violates a documented precondition (shape, domain, budget)."""


class NumericalError(RuntimeError):
    """A computation produced non-finite values or failed to converge."""
