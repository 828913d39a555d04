"""Exception hierarchy shared across the package."""

from __future__ import annotations

__all__ = [
    "EcgSslError",
    "InvalidInputError",
    "DegenerateInputError",
    "InvalidParameterError",
    "ShapeError",
    "FormatError",
    "CheckpointError",
    "StateError",
    "DivergenceError",
    "ConfigError",
    "MetricError",
]


class EcgSslError(Exception):
    """Base class for all errors raised by this package."""


class InvalidInputError(EcgSslError):
    """Input data violates a precondition (empty, non-finite, wrong rate)."""


class DegenerateInputError(EcgSslError):
    """Input is structurally valid but degenerate (zero variance, all zero)."""


class InvalidParameterError(EcgSslError):
    """A parameter value is outside its allowed range."""


class ShapeError(EcgSslError):
    """Array shapes are inconsistent with the operation."""


class FormatError(EcgSslError):
    """A file does not conform to its declared binary/CSV format."""


class CheckpointError(FormatError):
    """Checkpoint layer manifest does not match the model definition."""


class StateError(EcgSslError):
    """Operation invoked in an invalid state (e.g. backward before forward)."""


class DivergenceError(EcgSslError):
    """Training produced a non-finite loss."""

    def __init__(self, message: str, epoch: int | None = None):
        super().__init__(message)
        self.epoch = epoch


class ConfigError(EcgSslError):
    """Run configuration is malformed or violates its schema."""


class MetricError(EcgSslError):
    """A metric is undefined for the given inputs (e.g. empty sample set)."""
