"""Exception hierarchy shared by every bsx module."""


class BsxError(Exception):
    """Base class for all toolkit errors."""


class DomainError(BsxError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class ConstraintViolation(BsxError, ValueError):
    """Problem parameters violate the constraint under which a construction is valid."""


class NonConvergence(BsxError, ArithmeticError):
    """A quadrature or summation exhausted its budget before reaching tolerance."""


class Overflow(BsxError, OverflowError):
    """A requested evaluation would leave the binary64 range."""
