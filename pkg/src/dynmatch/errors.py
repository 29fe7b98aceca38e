"""Exception types shared across the package."""

from __future__ import annotations


class DynMatchError(Exception):
    """Base class for all errors raised by this package."""


class ConfigError(DynMatchError, ValueError):
    """A configuration value is outside its admissible range."""


class InvalidArgument(DynMatchError, ValueError):
    pass


class InvalidEdge(DynMatchError, ValueError):
    pass


class InvalidVertex(DynMatchError, IndexError):
    pass


class MalformedInstance(DynMatchError, ValueError):
    """An ordered matching instance whose matchings are not matchings."""


class StreamParseError(DynMatchError, ValueError):
    def __init__(self, lineno: int, message: str) -> None:
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


class InvariantViolation(DynMatchError, AssertionError):
    """Raised in checked mode when an internal invariant does not hold."""
