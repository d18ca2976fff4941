"""Exception types shared across the package.

The CLI maps these onto exit codes: usage and domain problems exit 1,
a physics check that ran but failed exits 2.
"""


class GaugeLabError(Exception):
    """Base class for all package errors."""


class UsageError(GaugeLabError, ValueError):
    """Malformed input: bad config field, empty sample list, grid too small."""


class DomainError(GaugeLabError, ValueError):
    """Evaluation outside the mathematical domain (non-finite value, t before pulse onset, ...)."""


class UnsupportedMethodError(UsageError):
    """Requested numerical method does not apply to the given problem."""


class ResourceLimitError(GaugeLabError, RuntimeError):
    """A configured resource cap (e.g. integration step count) would be exceeded."""


class PreconditionError(GaugeLabError, ValueError):
    """A documented precondition of an operation does not hold."""
