"""Exception and warning types shared across the package."""

from __future__ import annotations

__all__ = [
    "SysanomError",
    "EmptySample",
    "NonFiniteValue",
    "LengthMismatch",
    "TooFewPoints",
    "InvalidP",
    "InvalidRange",
    "NonCausalSpec",
    "InvalidLength",
    "UnknownPreset",
    "ZeroBase",
    "ParseError",
    "AllUndefined",
    "TieWarning",
]


class SysanomError(Exception):
    """Base class for all errors raised by this package."""


class EmptySample(SysanomError):
    """A sample or series was constructed with no observations."""


class NonFiniteValue(SysanomError):
    """A NaN or infinity reached a boundary that requires finite reals."""


class LengthMismatch(SysanomError):
    """Paired inputs do not have matching lengths."""


class TooFewPoints(SysanomError):
    """The operation needs more observations than were provided."""


class InvalidP(SysanomError):
    """The moment order p must be a positive finite real."""


class InvalidRange(SysanomError):
    """Interval endpoints are out of order."""


class NonCausalSpec(SysanomError):
    """The autoregressive polynomial has a root on or inside the unit circle."""


class InvalidLength(SysanomError):
    """A requested sequence length must be a positive integer."""


class UnknownPreset(SysanomError):
    """The preset name does not match any stock scenario."""


class ZeroBase(SysanomError):
    """Percentage returns need a series without zero values."""


class ParseError(SysanomError):
    """A CSV cell failed to parse; carries the 1-based file row and the column."""

    def __init__(self, message: str, row: int | None = None, column: int | str | None = None):
        super().__init__(message)
        self.row = row
        self.column = column


class AllUndefined(SysanomError):
    """Neither index of a curve carries usable information for a verdict."""


class TieWarning(UserWarning):
    """Tied input values: the concomitant order falls back to time order."""
