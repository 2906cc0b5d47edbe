"""Exception hierarchy.

Two failure families matter to callers: arguments that violate a documented
precondition, and computations that cannot reach the required accuracy.  The
command-line front end maps them to exit codes 2 and 3 respectively.
"""


class DiskdynError(Exception):
    """Base class for all library errors."""


class PreconditionError(DiskdynError, ValueError):
    """An argument violates a documented precondition."""


class BoundaryError(PreconditionError):
    """A point is on, outside, or numerically indistinguishable from the
    unit circle."""


class NumericError(DiskdynError, ArithmeticError):
    """A computation could not be completed to the required accuracy."""


class ConfigError(PreconditionError):
    """A run configuration failed to parse or validate."""
