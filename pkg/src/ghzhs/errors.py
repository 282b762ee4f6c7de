"""Exception hierarchy shared by the state, decomposition and CLI layers."""


class GhzError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(GhzError, ValueError):
    """An object violates one of its invariants.

    ``invariant`` names the violated property (e.g. ``"unit-trace"``) so the
    CLI can report it verbatim.
    """

    def __init__(self, invariant: str, message: str):
        super().__init__(f"{invariant}: {message}")
        self.invariant = invariant


class NormalizationError(ValidationError):
    """Coefficient set whose all-identity coefficient is not 1."""

    def __init__(self, message: str):
        super().__init__("normalization", message)


class AddressingError(GhzError, IndexError):
    """Party index or party set does not address the state."""


class ParameterError(GhzError, ValueError):
    """Out-of-range numeric parameter (rank, count, number of points...)."""
