"""Custom exceptions for the genbound toolkit."""

from typing import Any, Optional


class GenBoundError(Exception):
    """Base exception for all application errors."""
    pass


class ValidationError(GenBoundError, ValueError):
    """Errors related to value-type validation."""
    pass


class AlphabetError(ValidationError):
    """Two distributions are not defined on the same atom list."""

    def __init__(self, message: str, left: tuple = None, right: tuple = None):
        super().__init__(message)
        self.left = left
        self.right = right


class ParameterError(GenBoundError):
    """A parameter required by the requested bound is missing or invalid."""

    def __init__(self, message: str, parameter: str = None, bound_name: str = None):
        super().__init__(message)
        self.parameter = parameter
        self.bound_name = bound_name


class PreconditionError(GenBoundError):
    """An operation precondition does not hold."""

    def __init__(self, message: str, operation: str = None):
        super().__init__(message)
        self.operation = operation


class EnumerationSizeError(GenBoundError):
    """Exhaustive enumeration would exceed the configured guard."""

    def __init__(self, message: str, size: int = None, limit: int = None):
        super().__init__(message)
        self.size = size
        self.limit = limit


class ConvergenceError(GenBoundError):
    """Iterative solver stopped before reaching its optimality certificate."""

    def __init__(self, message: str, best_iterate: Any = None,
                 certificate: float = None, iterations: int = 0):
        super().__init__(message)
        self.best_iterate = best_iterate
        self.certificate = certificate
        self.iterations = iterations


class NumericalAccuracyError(GenBoundError):
    """Quadrature or estimation did not reach the requested tolerance."""

    def __init__(self, message: str, achieved: float = None, requested: float = None):
        super().__init__(message)
        self.achieved = achieved
        self.requested = requested


class DomainError(GenBoundError):
    """Evaluation point lies outside the admissible domain."""

    def __init__(self, message: str, point: Optional[Any] = None):
        super().__init__(message)
        self.point = point


class InstanceFormatError(ValidationError):
    """Malformed learner instance file."""

    def __init__(self, message: str, path: str = None, field_name: str = None):
        super().__init__(message)
        self.path = path
        self.field_name = field_name
