"""Exception types shared across the package."""


class DomainError(ValueError):
    """An operation was given arguments outside its domain."""


class FieldMismatchError(DomainError):
    """Operands belong to different fields."""


class BudgetExceededError(RuntimeError):
    """An enumeration would exceed the configured budget."""

    def __init__(self, what, needed, budget):
        self.what = what
        self.needed = needed
        self.budget = budget
        super().__init__(f"{what}: needs {needed} items, budget is {budget}")


class InvariantViolation(RuntimeError):
    """An internal self-check failed. Indicates a bug."""
