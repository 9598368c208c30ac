"""Exception types shared across the package."""


class EpipolarError(Exception):
    pass


class DimensionError(EpipolarError, ValueError):
    pass


class DegenerateConfigurationError(EpipolarError, ValueError):
    """Raised when a geometric precondition (e.g. non-collinearity) fails."""


class ContractViolation(EpipolarError, ValueError):
    """Raised when an operation is called outside its documented precondition."""


class InputParseError(EpipolarError, ValueError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
