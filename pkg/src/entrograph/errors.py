"""Exception types shared across the package."""

from __future__ import annotations


class EntrographError(Exception):
    """Base class for all package errors."""


class ValidationFailed(EntrographError):
    """A graph failed invariant validation; carries the report lines."""

    def __init__(self, report):
        self.report = tuple(report)
        super().__init__("invalid metric graph: " + "; ".join(self.report))


class UnknownVertex(EntrographError):
    pass


class NonPositiveLength(EntrographError):
    pass


class NonConvergence(EntrographError):
    """An iterative solver failed to reach its tolerance."""


class DivergentSeries(EntrographError):
    """A resolvent/generating-function evaluation at or below the entropy."""

    def __init__(self, message, rho=None):
        self.rho = rho
        super().__init__(message)


class DisconnectedPair(EntrographError):
    pass


class AdjacentVertices(EntrographError):
    pass


class TooFewAttachments(EntrographError):
    pass


class InvalidDartIndex(EntrographError):
    pass


class InsufficientData(EntrographError):
    pass


class HorizonTooLarge(EntrographError):
    """Projected enumeration size exceeds the configured cap."""

    def __init__(self, message, safe_horizon=None):
        self.safe_horizon = safe_horizon
        super().__init__(message)


class MarginTooSmall(EntrographError):
    pass


class UnknownFormat(EntrographError):
    pass


class PreconditionError(EntrographError):
    """An operation was called outside its documented preconditions."""
