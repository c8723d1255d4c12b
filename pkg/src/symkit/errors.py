class SymkitError(Exception):
    """Base class for all errors raised by symkit."""


class PreconditionError(SymkitError, ValueError):
    """An operation was called outside its documented domain."""


class CapExceededError(PreconditionError):
    """A desk-scale size cap would be exceeded."""


class ConvergenceError(SymkitError, ArithmeticError):
    """An iterative method ran out of its iteration budget."""
