"""Exception taxonomy shared by the library and the CLI.

Each class carries the process exit code the CLI maps it to.
"""


class BuzzLdError(Exception):
    exit_code = 1


class ConfigError(BuzzLdError):
    """Bad configuration: missing files, unknown keys, invalid flag values."""
    exit_code = 2


class InvalidModelError(BuzzLdError):
    """Model parameters or generator violate their invariants."""
    exit_code = 2


class FormatError(BuzzLdError):
    """Malformed input file (CSV parse errors carry a row number)."""
    exit_code = 2

    def __init__(self, message, row=None):
        if row is not None:
            message = f"{message} (row {row})"
        super().__init__(message)
        self.row = row


class InvalidInputError(BuzzLdError):
    """Structurally invalid input to a numeric operation (e.g. non-convex curve)."""
    exit_code = 2


class InsufficientDataError(BuzzLdError):
    """Not enough data to estimate the requested quantity."""
    exit_code = 3


class NumericalFailureError(BuzzLdError):
    """An iterative solver did not converge within its budget."""
    exit_code = 4


class InfeasibleQueryError(BuzzLdError):
    """A provisioning query has no feasible answer."""
    exit_code = 5
