"""Exception and warning types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class StateError(RuntimeError):
    """An object is not in a state that permits the requested operation."""


class NumericError(ArithmeticError):
    """A numerical evaluation produced a non-finite or unusable value."""

    def __init__(self, message, abscissa=None):
        super().__init__(message)
        self.abscissa = abscissa


class AccuracyWarning(UserWarning):
    """A numerical result is available but its accuracy could not be confirmed."""
