"""Exception hierarchy shared by every module and mapped to CLI exit codes."""


class SentimenError(Exception):
    """Base class for all errors raised by this package."""

    exit_code = 1


class ConfigError(SentimenError, ValueError):
    """Invalid configuration, parameters or file layout."""

    exit_code = 2


class DataError(SentimenError, ValueError):
    """Rejected input data (bad rows, out-of-range values, shape mismatches)."""

    exit_code = 3


class StratificationError(DataError):
    """A class is too small for the requested stratified partition."""

    def __init__(self, label, message):
        super().__init__(message)
        self.label = label


class BalancingError(DataError):
    """SMOTE cannot synthesise samples for a class."""

    def __init__(self, label, message):
        super().__init__(message)
        self.label = label


class TrainingError(DataError):
    """Training cannot start on the given data (empty split, single class)."""


class InvariantError(SentimenError, RuntimeError):
    """An internal consistency check failed."""

    exit_code = 4
