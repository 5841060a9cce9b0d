"""Exception hierarchy shared by the library and the command line runner."""


class QTransferError(Exception):
    """Base class for all package errors."""


class ConfigError(QTransferError):
    """Raised for malformed or inconsistent run configurations."""


class ConvergenceError(QTransferError):
    """A quadrature or time-stepping scheme failed to reach its tolerance.

    ``error`` holds the last achieved error estimate.
    """

    def __init__(self, message, error=float("nan")):
        super().__init__(f"{message} (achieved error estimate {error:.3e})")
        self.error = error


class InvariantViolation(QTransferError):
    """A checked physical or numerical invariant failed during a run."""
