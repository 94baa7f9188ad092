class BudgetExceeded(RuntimeError):
    """An enumeration would exceed its configured work budget."""


class ContractViolation(AssertionError):
    """A checked identity or inequality failed on a concrete instance."""


class ParameterError(ValueError):
    """Parameters violate the side conditions of the requested check."""
