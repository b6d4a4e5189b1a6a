"""Exception hierarchy.

Every error carries a ``witness`` mapping so the CLI can emit it as JSON
without knowing the concrete class.
"""

from __future__ import annotations

from typing import Any


class UltradiamError(Exception):
    """Base class for all library errors."""

    def __init__(self, message: str, witness: dict[str, Any] | None = None):
        super().__init__(message)
        self.witness = witness or {}

    @property
    def name(self) -> str:
        return type(self).__name__

    def to_json(self) -> dict[str, Any]:
        return {"error": self.name, "message": str(self), "witness": self.witness}


class InputError(UltradiamError):
    """Input could not be turned into a valid object (CLI exit status 2)."""


class ParseError(InputError):
    pass


class ShapeError(InputError):
    pass


class MetricError(InputError):
    def __init__(self, message: str, cell: tuple[int, int]):
        super().__init__(message, {"cell": list(cell)})
        self.cell = cell


class DomainError(UltradiamError):
    """A mathematical precondition or conclusion failed (CLI exit status 1)."""


class NotUltrametricError(DomainError):
    def __init__(self, violation):
        super().__init__(str(violation), violation.to_json())
        self.violation = violation


class EmptySubset(DomainError):
    pass


class PointIndexError(DomainError):
    pass


class DegenerateSpace(DomainError):
    pass


class CapExceeded(DomainError):
    pass


class AxiomViolation(DomainError):
    def __init__(self, report):
        super().__init__(f"diameter function fails condition {report.witness.clause}",
                         report.witness.to_json())
        self.report = report


class DiamMismatch(DomainError):
    pass


class UniversalRelation(DomainError):
    pass


class BadScales(DomainError):
    pass


class ApexTooClose(DomainError):
    pass


class NotCompleteMultipartiteInput(DomainError):
    pass


class MissingZero(DomainError):
    pass


class ChainError(DomainError):
    """A graph chain broke one of its structural conditions.

    ``clause`` is one of NotComplete, EmptyTop, NotNested, NotProperSubset,
    NotMultipartite, TooLong, LevelsNotIncreasing, Malformed.
    """

    def __init__(self, clause: str, message: str, witness: dict[str, Any] | None = None):
        w = {"clause": clause}
        w.update(witness or {})
        super().__init__(f"{clause}: {message}", w)
        self.clause = clause


class InvalidDendrogram(DomainError):
    def __init__(self, message: str, path: tuple[int, ...]):
        super().__init__(message, {"path": list(path)})
        self.path = path
