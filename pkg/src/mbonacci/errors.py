"""Exception hierarchy shared by all modules."""


class MbonacciError(Exception):
    """Base class for every error raised by this package."""


class InvalidWordError(MbonacciError, ValueError):
    """A word contains a digit outside its alphabet."""


class DomainError(MbonacciError, ValueError):
    """An argument lies outside the domain of an operation."""


class RangeError(MbonacciError, IndexError):
    """A requested index window lies outside the generated data."""


class NumericError(MbonacciError, ArithmeticError):
    """An iterative numerical procedure failed to converge."""
