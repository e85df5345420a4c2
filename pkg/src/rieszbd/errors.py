"""Exception hierarchy shared by the library and the CLI."""


class RzlError(Exception):
    """Base class; ``exit_code`` is what the CLI returns for it."""

    exit_code = 3


class DomainError(RzlError, ValueError):
    """Argument outside the mathematical domain of an operation."""


class ResourceError(RzlError):
    """Request exceeds a precision, size or memory cap."""


class InputError(RzlError, ValueError):
    """Malformed external input (zeros file, CSV)."""

    exit_code = 2


class NumericError(RzlError, ArithmeticError):
    """A numerical procedure failed to converge or lacks data."""
