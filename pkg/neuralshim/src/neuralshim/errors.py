"""Exception taxonomy, mirrored from the exporting package's conventions."""

from __future__ import annotations


class NeuralshimError(Exception):
    """Base class for errors raised by this package."""


class DataError(NeuralshimError):
    """An input file is missing, malformed, or semantically invalid."""


class UsageError(NeuralshimError):
    """The caller asked for something the package cannot do."""
