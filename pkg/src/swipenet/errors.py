"""Exception types shared across the package."""


class SwipenetError(Exception):
    """Base class for all package errors."""


class ShapeError(SwipenetError):
    """Array shapes are incompatible; message names both shapes."""


class ConfigError(SwipenetError):
    """Invalid configuration value or unknown name."""


class DataError(SwipenetError):
    """Dataset-level problem (empty split, bad labels, ...)."""


class IngestionError(SwipenetError):
    """A file could not be read or decoded; carries the path."""

    def __init__(self, path, reason):
        super().__init__(f"cannot ingest {path}: {reason}")
        self.path = path


class FormatError(SwipenetError):
    """A serialized artifact does not match its declared format."""


class CorruptionError(FormatError):
    """File recognized but truncated or internally inconsistent."""


class VersionError(FormatError):
    """Format version mismatch; message names both versions."""


class NumericError(SwipenetError):
    """Non-finite values encountered; message names epoch/batch."""
