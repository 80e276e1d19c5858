"""Shared exception and warning types."""

from __future__ import annotations


class HausError(Exception):
    """Base class for all errors raised by this package."""


class ConfigError(HausError):
    """Invalid configuration: bad parameter range, malformed weight spec, ..."""


class InputFormatError(HausError):
    """Malformed external input (CSV/JSON files)."""


class GridTooSmallWarning(UserWarning):
    """The sampling grid does not comfortably contain the signal or its spectrum."""


class NotInHardySpaceWarning(UserWarning):
    """Signal has a non-negligible mean; H^1-type estimates are scale-grid dependent."""
