"""Exception and warning types shared by every module."""


class MonozetaError(ValueError):
    """Base class for all errors raised by the package."""


class GeometryError(MonozetaError):
    """Invalid input to a lattice-geometry routine."""


class PreconditionError(MonozetaError):
    """A hypothesis required by a zeta formula does not hold."""


class ParseError(MonozetaError):
    """Malformed polynomial text; ``position`` is a 0-based column."""

    def __init__(self, message, position=None):
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)
        self.position = position


class HypothesisWarning(UserWarning):
    """Emitted when a genericity hypothesis is assumed without being checked."""
