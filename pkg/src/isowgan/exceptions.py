class IsowganError(Exception):
    """Base class for errors raised by this package."""


class RejectedInputError(IsowganError, ValueError):
    """An argument violates a documented precondition."""


class NumericFault(IsowganError, ArithmeticError):
    """A computation produced non-finite or runaway values."""


class DataError(IsowganError, ValueError):
    """A data file could not be parsed or failed count verification."""
