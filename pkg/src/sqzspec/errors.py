"""Exception types raised by the numerical engine."""


class SqzError(Exception):
    """Base class for all package errors."""


class DomainError(SqzError, ValueError):
    """An argument lies outside the domain of the operation."""


class PoleError(SqzError, ZeroDivisionError):
    """A rational function was evaluated at (or too close to) one of its poles."""


class QuadratureError(SqzError, ArithmeticError):
    """A numerical integral could not reach the requested tolerance."""


class ConfigError(SqzError, ValueError):
    """A run configuration could not be parsed or validated."""

    def __init__(self, message, key=None, line=None):
        super().__init__(message)
        self.key = key
        self.line = line
