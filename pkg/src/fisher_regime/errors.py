"""Exception hierarchy shared by every module."""


class FisherRegimeError(Exception):
    """Base class for all package errors."""


class DomainError(FisherRegimeError, ValueError):
    """An argument lies outside the domain of the operation."""


class ResourceError(FisherRegimeError):
    """The requested computation exceeds the exact-enumeration budget."""


class DegeneracyError(FisherRegimeError, ArithmeticError):
    """A matrix or spectrum is singular where positive definiteness is required."""


class NumericError(FisherRegimeError, ArithmeticError):
    """An iterative numeric routine failed to converge."""


class InstabilityError(FisherRegimeError, ArithmeticError):
    """A gradient flow diverged."""


class SchemaError(FisherRegimeError, ValueError):
    """A report or golden file does not match the expected column schema."""
