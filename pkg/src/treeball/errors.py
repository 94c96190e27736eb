"""Shared exception types."""


class CapacityError(RuntimeError):
    """Raised when a computation would exceed an explicit size cap."""


class HypothesisError(ValueError):
    """A named precondition of a construction is violated.

    The message always names the failing clause so callers can test for it.
    """


class DocumentError(ValueError):
    """A group document is malformed or inconsistent."""
