"""Exception hierarchy shared by every posetlab module.

Each domain error carries its class name so the CLI can report it verbatim.
"""

from __future__ import annotations


class PosetLabError(Exception):
    """Base class for all domain errors (CLI exit code 1)."""


class CycleDetected(PosetLabError):
    pass


class DuplicateLabel(PosetLabError):
    pass


class UnknownLabel(PosetLabError):
    pass


class NotInteriorSystem(PosetLabError):
    def __init__(self, element: str, reason: str = "") -> None:
        self.element = element
        msg = f"no maximum of Q below {element!r}"
        super().__init__(f"{msg}: {reason}" if reason else msg)


class NotAligned(PosetLabError):
    pass


class SegmentTooShort(PosetLabError):
    pass


class HypothesisUnmet(PosetLabError):
    pass


class NotExtremal(PosetLabError):
    pass


class InvalidLength(PosetLabError):
    pass


class UnorientedLine(PosetLabError):
    pass


class InvalidDiagram(PosetLabError):
    pass


class NotInterval(PosetLabError):
    pass


class NonCommutativeModule(PosetLabError):
    pass


class MaxLenExceeded(PosetLabError):
    pass


class Disconnected(PosetLabError):
    pass


class NotTree(PosetLabError):
    pass


class NotComparable(PosetLabError):
    pass


class ShapeMismatch(PosetLabError):
    pass


class FieldMismatch(PosetLabError):
    pass


class ParseError(Exception):
    """Malformed input text (CLI exit code 2)."""

    def __init__(self, message: str, line: int | None = None) -> None:
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)
