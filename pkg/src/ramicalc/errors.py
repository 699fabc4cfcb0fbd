"""Exception hierarchy shared by every module."""


class RamicalcError(Exception):
    """Base class for all errors raised by ramicalc."""


class DomainError(RamicalcError, ValueError):
    """An argument lies outside the domain of an operation."""


class NotInvertibleError(RamicalcError, ValueError):
    """A piecewise-linear function is not strictly increasing."""


class ValidationError(RamicalcError, ValueError):
    """Input data violates a structural invariant.

    ``invariant`` carries a short machine-readable name of the broken rule.
    """

    def __init__(self, invariant, message):
        super().__init__(f"{invariant}: {message}")
        self.invariant = invariant


class InconsistentDataError(RamicalcError, ValueError):
    """Individually valid inputs that cannot hold simultaneously."""


class MalformedInputError(RamicalcError, ValueError):
    """A file could not be parsed or does not match its schema."""
