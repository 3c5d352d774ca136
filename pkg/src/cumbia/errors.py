"""Exception and warning types shared across the package.

Exit-code contract for the CLI: input and parameter problems are exit 1,
violated internal invariants are exit 2.
"""


class CumbiaError(Exception):
    """Base class for all package errors."""

    exit_code = 1


class InputError(CumbiaError):
    """Bad user input: unreadable files, malformed tables, non-finite data."""


class ParameterError(CumbiaError):
    """A parameter value outside its documented range."""


class InvariantViolation(CumbiaError):
    """An internal consistency check failed; indicates a bug, not bad input."""

    exit_code = 2


class CumbiaWarning(UserWarning):
    """Non-fatal conditions such as clamped parameters or dropped columns."""
