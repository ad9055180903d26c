"""Exception hierarchy shared by the estimators, simulation harness and CLI."""


class HexLogitError(Exception):
    """Base class for all package errors."""

    exit_code = 1


class InvalidArgumentError(HexLogitError, ValueError):
    exit_code = 2


class DataError(HexLogitError, ValueError):
    """Malformed input data (CSV parse failures, duplicate triads, ...)."""

    exit_code = 3

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class ResourceLimitError(HexLogitError, RuntimeError):
    exit_code = 4


class NumericalError(HexLogitError, RuntimeError):
    exit_code = 4


class NoInformationError(NumericalError):
    """Raised when the data contain no informative subgraphs."""

    def __init__(self, message, n_links=None, n_informative=None):
        super().__init__(message)
        self.n_links = n_links
        self.n_informative = n_informative


class IdentificationError(NumericalError):
    """The Hessian is singular even after ridge escalation."""


class DegenerateInferenceError(NumericalError):
    pass


class InsufficientDataError(HexLogitError, ValueError):
    exit_code = 3
