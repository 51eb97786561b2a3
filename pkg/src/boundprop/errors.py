"""Exception types shared across the package."""


class BoundpropError(Exception):
    """Base class for every error this package raises on purpose."""


class ParseError(BoundpropError):
    """Malformed textual input.  Carries a 1-based line number when known."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class InstanceError(BoundpropError):
    """A structural invariant of an instance or box does not hold."""


class UnsupportedInstanceError(BoundpropError):
    """The instance falls outside the class an operation is defined for."""


class GuardExceeded(BoundpropError):
    """A brute-force oracle refused to run because it would enumerate too much."""


class InternalError(BoundpropError):
    """An internal consistency check failed.

    These checks guard results that are supposed to hold by theory (for
    example, integrality of the per-bound optima on unit-coefficient
    systems).  Seeing this error means a bug, not bad input.
    """
