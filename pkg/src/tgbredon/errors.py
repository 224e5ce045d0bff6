"""Validation reports and verification certificates."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Optional


@dataclass(frozen=True)
class Violation:
    """One failed axiom, with a machine-readable witness."""

    kind: str
    message: str
    witness: Any = None

    def to_json(self) -> dict:
        return {"kind": self.kind, "message": self.message, "witness": self.witness}


class ValidationError(ValueError):
    """Input tables violate the axioms; ``violations`` lists every failure found."""

    def __init__(self, what: str, violations: list[Violation]):
        self.what = what
        self.violations = list(violations)
        head = "; ".join(v.message for v in self.violations[:3])
        more = f" (+{len(self.violations) - 3} more)" if len(self.violations) > 3 else ""
        super().__init__(f"invalid {what}: {head}{more}")

    def kinds(self) -> set[str]:
        return {v.kind for v in self.violations}


class InvariantBreach(RuntimeError):
    """A check that holds for every valid input failed: a bug, not bad data."""

    def __init__(self, message: str, witness: Any = None):
        super().__init__(message)
        self.witness = witness


@dataclass
class Certificate:
    """Outcome of a constructive check.  Truthy iff the check passed."""

    check: str
    ok: bool
    witness: Optional[Any] = None
    data: dict = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.ok

    def to_json(self) -> dict:
        out = {"check": self.check, "ok": self.ok}
        if self.witness is not None:
            out["witness"] = self.witness
        if self.data:
            out["data"] = self.data
        return out


def fail(check: str, message: str, **witness) -> Certificate:
    return Certificate(check, False, {"message": message, **witness})
