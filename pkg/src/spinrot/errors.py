"""Exception types shared across the package."""


class ValidationError(ValueError):
    """Bad user input: out-of-range parameters, malformed configs."""


class NumericalContractError(ArithmeticError):
    """A numerical guarantee was violated (Hermiticity, normalization, ...)."""
