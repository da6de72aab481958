# FILE: errors.py
# Exception types shared by the services and mapped onto CLI exit codes.


class RevivalLabError(Exception):
    """Base class for every error raised by the simulation toolkit."""
    exit_code = 1


class ConfigError(RevivalLabError):
    """Invalid run configuration. Carries the offending key when known."""
    exit_code = 2

    def __init__(self, message: str, key: str | None = None):
        super().__init__(message)
        self.key = key


# --- Numerical contract failures (exit code 3) ---

class NumericalContractError(RevivalLabError):
    exit_code = 3


class DomainError(NumericalContractError, ValueError):
    """Input outside the domain of a special function (e.g. NaN or inf)."""


class ArgumentError(NumericalContractError, ValueError):
    """Argument out of range: table index, series length, window size."""


class NumericError(NumericalContractError, ArithmeticError):
    """Non-finite values reached a quadrature or transform."""


class ContractError(NumericalContractError):
    """A pre- or postcondition of an operation does not hold."""


class TruncationError(ContractError):
    """Truncated eigenbasis misses too much probability."""


class InequalityViolation(ContractError):
    """An information inequality failed beyond its tolerance (strict mode only)."""
