"""Exception types shared by all modules."""


class DomainError(ValueError):
    """An argument lies outside the domain where a routine is defined."""


class NumericalError(ArithmeticError):
    """An iterative routine failed to converge (signals a broken invariant)."""
