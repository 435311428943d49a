"""
Error hierarchy for opforge.

Every error raised by the library derives from OpforgeError, so the CLI can
map library failures to exit code 2 with a single except clause. Each subclass
also derives from the closest builtin so callers that only know the builtin
(ValueError, TypeError, ...) still catch it.
"""

from typing import Optional


class OpforgeError(Exception):
    """Base class for all library errors."""


class CapacityError(OpforgeError, ValueError):
    """A requested size is above the configured guard for its family."""

    def __init__(self, family: str, size: int, limit: int):
        self.family = family
        self.size = size
        self.limit = limit
        super().__init__(
            f"Size {size} exceeds the {family} guard ({limit}); "
            f"raise OPFORGE_GUARD to allow it"
        )


class FamilyMismatchError(OpforgeError, TypeError):
    """Keys, descriptors or carriers from different families were mixed."""


class ArityError(OpforgeError, ValueError):
    """Slot index out of range, wrong number of operands or wrong arity."""


class ParseError(OpforgeError, ValueError):
    """Syntax error in an expression, annotated with its position."""

    def __init__(self, message: str, line: int = 1, column: int = 1, text: Optional[str] = None):
        self.line = line
        self.column = column
        self.text = text
        super().__init__(f"{message} (line {line}, column {column})")


class NonInvertibleError(OpforgeError, ArithmeticError):
    """A series has no inverse because its degree-0 part is degenerate."""


class UnknownSuiteError(OpforgeError, KeyError):
    """Unknown suite id, golden table id, operad or handle name."""

    def __str__(self) -> str:
        # KeyError quotes its argument; keep the plain message
        return str(self.args[0]) if self.args else ''


class UnsupportedOperationError(OpforgeError, ValueError):
    """The operation is not defined for this carrier or mode."""


class InvalidObjectError(OpforgeError, ValueError):
    """Malformed combinatorial object, relabeling or vertex subset."""
