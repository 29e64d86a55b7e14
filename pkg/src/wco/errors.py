"""Exception types raised by the ``wco`` package."""


class WcoError(Exception):
    """Base class for all errors raised by this package."""


class OrderMismatchError(WcoError, ValueError):
    """Two series or matrices that must share a truncation order do not."""


class DomainError(WcoError, ValueError):
    """A point or parameter lies outside the region where the operation is defined."""


class ConstraintError(WcoError, ValueError):
    """A symbol constructor rejected its parameters.

    The ``constraint`` attribute names the violated condition so that
    reports can surface it as a failing check.
    """

    def __init__(self, constraint, message=None):
        self.constraint = constraint
        super().__init__(message or constraint)


class NumericalFailure(WcoError, RuntimeError):
    """An iterative or bracketing procedure did not reach its tolerance."""
