"""Exception types shared across the package."""


class UsageError(ValueError):
    """Invalid input: wrong field, shape, arity or out-of-range parameter."""


class BudgetExceeded(RuntimeError):
    """An exhaustive computation would exceed the configured budget."""

    def __init__(self, required, budget, what="evaluations"):
        self.required = required
        self.budget = budget
        super().__init__(f"refusing: requires about {required:.3g} {what}, budget is {budget:.3g}")
