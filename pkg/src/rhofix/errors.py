"""Exception types shared across the package."""

from __future__ import annotations


class RhofixError(Exception):
    """Base class for all package errors."""


class DimensionMismatch(RhofixError, ValueError):
    """A point's dimension does not match the space it is used in."""


class BracketSearchError(RhofixError, RuntimeError):
    """No finite bracket was found for the F-norm bisection."""


class InvalidModularError(RhofixError, RuntimeError):
    """A functional returned 0 at a nonzero point where that is disallowed."""


class UnboundedOrbitError(RhofixError, RuntimeError):
    """An orbit modular evaluated to +inf (or the orbit left the space)."""


class DivergenceError(RhofixError, RuntimeError):
    """Picard iteration produced a non-finite iterate.

    Carries the partial trace recorded up to the failure.
    """

    def __init__(self, message: str, trace=None):
        super().__init__(message)
        self.trace = trace


class InconsistentContractionError(RhofixError, RuntimeError):
    """A composite-map fixed point failed the single-map residual check.

    Signals that the claimed contraction factor is false (for example the
    map has a short periodic orbit instead of a fixed point).
    """

    def __init__(self, message: str, trace=None):
        super().__init__(message)
        self.trace = trace


class ConfigError(RhofixError, ValueError):
    """A problem file failed to parse; the message names the offending key."""

    def __init__(self, key: str, message: str):
        super().__init__(f"{key}: {message}")
        self.key = key
