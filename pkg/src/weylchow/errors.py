"""Exception hierarchy shared by all modules.

The CLI maps these onto exit codes: UsageError -> 2, ResourceLimitError -> 3,
InternalComputationError (and subclasses) -> 4.
"""


class WeylchowError(Exception):
    """Base class for all package errors."""


class UsageError(WeylchowError):
    """Invalid user input: bad Dynkin type, malformed JSON, precondition failure."""


class ResourceLimitError(WeylchowError):
    """A computation was refused because it would exceed a configured cap."""


class InternalComputationError(WeylchowError):
    """A mathematical invariant was violated.

    Raised when an exact computation produces something that is impossible
    if the code is correct (nonzero remainder in a divided difference,
    inconsistent preimage system, ...).  Always a bug, never user error.
    """


class CalibrationError(InternalComputationError):
    """Neither pushforward convention matched the Steenrod oracle."""
