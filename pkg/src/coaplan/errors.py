"""Error types and the Violation record shared across the pipeline.

Exceptions are faults: they abort an operation. Violations are data: the
validators return them so callers can render the full list at once.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Violation:
    code: str
    path: str
    message: str

    def __str__(self) -> str:
        return f"{self.code} at {self.path}: {self.message}"


class CoaPlanError(Exception):
    """Base for all package errors. `code` is stable and machine-readable."""

    code = "Error"

    def __init__(self, message: str, path: str = ""):
        super().__init__(message)
        self.path = path

    def as_dict(self) -> dict:
        return {"code": self.code, "message": str(self), "path": self.path}


# -- scenario loading ---------------------------------------------------------

class ParseError(CoaPlanError):
    code = "ParseError"


class SchemaError(CoaPlanError):
    code = "SchemaError"


# -- knowledge-base parsing ---------------------------------------------------

class KbError(CoaPlanError):
    """Base for KB errors; carries the source position of the offender."""

    def __init__(self, message: str, line: int = 0, col: int = 0):
        super().__init__(f"{line}:{col}: {message}" if line else message)
        self.line = line
        self.col = col


class LexError(KbError):
    code = "LexError"


class KbSyntaxError(KbError):
    code = "SyntaxError"


class DuplicateDefinition(KbError):
    code = "DuplicateDefinition"


class UnresolvedVerb(KbError):
    code = "UnresolvedVerb"


class CyclicOrder(KbError):
    code = "CyclicOrder"


# -- planning -----------------------------------------------------------------

class PlannerError(CoaPlanError):
    pass


class UnknownVerb(PlannerError):
    code = "UnknownVerb"


class NodeCapExceeded(PlannerError):
    code = "NodeCapExceeded"


class NoEligibleActor(PlannerError):
    code = "NoEligibleActor"


class UnroutableAction(PlannerError):
    code = "UnroutableAction"


class PinInfeasible(PlannerError):
    code = "PinInfeasible"


class DanglingEdit(PlannerError):
    code = "DanglingEdit"
