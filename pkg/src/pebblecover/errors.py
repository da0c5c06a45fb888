"""Exception types shared across the package."""


class PebblingError(Exception):
    """Base class for every error raised by pebblecover."""


class InvalidParameter(PebblingError, ValueError):
    pass


class ResourceLimitError(PebblingError):
    pass


class DisconnectedGraphError(PebblingError, ValueError):
    pass


class UnsupportedDimensionError(PebblingError, ValueError):
    pass


class InvalidConfiguration(PebblingError, ValueError):
    pass


class IllegalMove(PebblingError, ValueError):
    pass


class VerificationFailure(PebblingError):
    """A move sequence contained an illegal step."""

    def __init__(self, index: int, reason: str = ""):
        self.index = index
        self.reason = reason
        msg = f"illegal step at index {index}"
        if reason:
            msg += f": {reason}"
        super().__init__(msg)


class NotCoverableError(PebblingError):
    pass


class InternalError(PebblingError, AssertionError):
    """Raised when a condition guaranteed by construction does not hold."""


class InvariantViolation(PebblingError, AssertionError):
    pass


class SpecSyntaxError(PebblingError, ValueError):
    """Malformed graph, configuration or move-sequence text."""
