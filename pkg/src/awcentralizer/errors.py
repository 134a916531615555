"""Exception types shared across the package."""


class AWError(Exception):
    """Base class for every error raised by this package."""


class PoleAtSample(AWError, ZeroDivisionError):
    """A denominator vanishes at the requested sample point."""


class PoleAtOne(AWError, ZeroDivisionError):
    """A denominator still vanishes at v = 1 after cancellation."""


class ConventionNotFound(AWError):
    """No candidate R-matrix series satisfies the intertwining identity."""


class NotClosedAtTruncation(AWError):
    """A candidate spanning set is not closed under the generators.

    ``witness`` holds the offending ``(generator, word)`` pair.
    """

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class Unsupported(AWError):
    """The requested configuration lies outside the verified cases."""


class ResourceLimit(AWError):
    """A configurable size cap was exceeded."""
