"""Coded errors shared across the package."""

from __future__ import annotations


class ChronoError(Exception):
    """An error with a stable machine-readable code.

    Codes are short SCREAMING_SNAKE strings (e.g. ``E_BAD_CELL``) so that
    tests and CLI consumers can match on them without parsing messages.
    """

    def __init__(self, code: str, message: str, **context: object) -> None:
        super().__init__(f"{code}: {message}")
        self.code = code
        self.message = message
        self.context = context
