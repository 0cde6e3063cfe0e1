"""Exception types shared across the package.

The CLI maps these onto stable exit codes (validation 2, cap 3,
realizability 4), so library code should raise the most specific type.
"""


class CubelabError(Exception):
    """Base class for all package errors."""


class ValidationError(CubelabError, ValueError):
    """Malformed value or violated precondition (dimension mismatch, bad range, parse error)."""


class CapExceededError(CubelabError):
    """An exact-oracle operation was requested beyond the dense-indicator cap."""


class RealizabilityError(CubelabError):
    """A sample is not realizable by the requested hypothesis class."""
