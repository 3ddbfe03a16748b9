"""Shared error base.

Every domain error in the package derives from CodequizError so the CLI and
the HTTP service can distinguish "the input/world is wrong" (exit 1 / 4xx)
from genuine bugs.
"""


class CodequizError(Exception):
    """Base class for all domain errors raised by this package."""
