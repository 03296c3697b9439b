"""Exception types shared across the package."""


class ChanInfoError(Exception):
    """Base class for all package-specific errors."""


class InvalidParameterError(ChanInfoError, ValueError):
    """Parameters outside their valid domain (channel, config, or flags)."""


class EvaluationError(ChanInfoError, ArithmeticError):
    """An objective returned a non-finite value during optimization.

    Carries the offending abscissa so callers can report where the
    evaluation broke down.
    """

    def __init__(self, message: str, abscissa: float):
        super().__init__(message)
        self.abscissa = abscissa


class DegenerateInputError(ChanInfoError, ValueError):
    """Input data carries no usable signal (for example a constant response)."""
