"""Exceptions and small result containers shared across the package."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


class InputError(ValueError):
    """Malformed or inconsistent user input (CLI exit code 2)."""

    def __init__(self, message: str, witness: Any = None):
        super().__init__(message)
        self.witness = witness


class LatticeError(InputError):
    """A poset failed one of the lattice checks.

    ``kind`` is one of ``"not-a-lattice"``, ``"not-ranked"``, ``"not-atomic"``.
    """

    def __init__(self, kind: str, message: str, witness: Any = None):
        super().__init__(f"{kind}: {message}", witness)
        self.kind = kind


class UnsupportedInputError(InputError):
    pass


class ResourceError(RuntimeError):
    """An enumeration would exceed its configured cap (CLI exit code 3)."""


@dataclass(frozen=True)
class Check:
    """Boolean outcome that carries a witness when it fails (or succeeds)."""

    ok: bool
    witness: Any = None
    reason: str = ""

    def __bool__(self) -> bool:
        return self.ok


@dataclass
class Report:
    """Outcome of a verification harness: how much was checked, what broke."""

    name: str
    checked: int = 0
    mismatches: list[dict] = field(default_factory=list)
    notes: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.mismatches

    def merge(self, other: "Report") -> None:
        self.checked += other.checked
        self.mismatches.extend(other.mismatches)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "ok": self.ok,
            "checked": self.checked,
            "mismatches": self.mismatches,
            **({"notes": self.notes} if self.notes else {}),
        }
