"""Exception hierarchy shared by all modules.

The CLI maps these onto exit codes: parse errors -> 2, invariant
violations -> 3, cap overflows -> 4, anything else -> 5.
"""


class DiagbraidError(Exception):
    """Base class for all package errors."""


class ParseError(DiagbraidError):
    """Malformed textual input (scalar expressions, words, input files)."""

    def __init__(self, message, position=None):
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)
        self.position = position


class InvariantError(DiagbraidError):
    """Structurally well-formed input violating a documented invariant."""


class CapExceeded(DiagbraidError):
    """A configured resource cap (degree, state count, scan bound) was hit."""


class InternalError(DiagbraidError):
    """A consistency check that should be unreachable failed; always a bug."""
