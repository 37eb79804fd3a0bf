"""Exception hierarchy shared by every module."""

from __future__ import annotations


class AffineRamseyError(Exception):
    """Base class for all errors raised by this package."""


class ZeroElement(AffineRamseyError, ValueError):
    pass


class UnitElement(AffineRamseyError, ValueError):
    pass


class FieldRing(AffineRamseyError, ValueError):
    pass


class UnsupportedRing(AffineRamseyError, ValueError):
    pass


class NotDivisible(AffineRamseyError, ArithmeticError):
    pass


class RingMismatch(AffineRamseyError, TypeError):
    pass


class EmptyFamily(AffineRamseyError, ValueError):
    pass


class SizeLimit(AffineRamseyError, ValueError):
    pass


class BlockLimit(AffineRamseyError, ValueError):
    pass


class WitnessNotFound(AffineRamseyError, LookupError):
    pass


class UnsupportedPattern(AffineRamseyError, ValueError):
    pass


class UnknownConstruction(AffineRamseyError, KeyError):
    def __str__(self) -> str:  # KeyError quotes its message otherwise
        return str(self.args[0]) if self.args else ""


class BudgetExceeded(AffineRamseyError, RuntimeError):
    def __init__(self, message: str, nodes: int = 0):
        super().__init__(message)
        self.nodes = nodes


class NotMultSyndeticOnWindow(AffineRamseyError, ValueError):
    def __init__(self, message: str, uncovered=None):
        super().__init__(message)
        self.uncovered = uncovered


class ModulusRange(AffineRamseyError, ValueError):
    pass


class ConfigError(AffineRamseyError, ValueError):
    """Invalid run configuration; ``field`` names the offending parameter."""

    def __init__(self, message: str, field: str | None = None):
        super().__init__(f"{field}: {message}" if field else message)
        self.field = field


class InvariantViolation(AffineRamseyError, AssertionError):
    pass


class SetExprSyntaxError(AffineRamseyError, SyntaxError):
    """Malformed set expression; ``position`` is the 0-based character offset."""

    def __init__(self, message: str, text: str = "", position: int = 0):
        super().__init__(f"{message} at position {position}")
        self.text = text
        self.position = position
