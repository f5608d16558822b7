"""Structured validation reports shared by every checker in the package."""

from __future__ import annotations

import os
from dataclasses import dataclass, field


DEFAULT_BUDGET = 5_000_000


class BudgetExceededError(Exception):
    """Raised when an exhaustive enumeration would exceed the configured budget."""

    def __init__(self, needed: int, budget: int):
        super().__init__(f"enumeration needs {needed} steps, budget is {budget}")
        self.needed = needed
        self.budget = budget


def enumeration_budget() -> int:
    """Current enumeration budget; overridable via REGSYNC_BUDGET."""
    raw = os.environ.get("REGSYNC_BUDGET")
    if raw is None:
        return DEFAULT_BUDGET
    return int(raw)


@dataclass(frozen=True)
class Violation:
    rule: str
    witness: object = None
    detail: str = ""

    def __str__(self) -> str:
        parts = [self.rule]
        if self.witness is not None:
            parts.append(repr(self.witness))
        if self.detail:
            parts.append(self.detail)
        return ": ".join(parts)


@dataclass
class ValidationReport:
    """Accumulates rule violations; empty report means all checks passed.

    ``notes`` carries informational outcomes (e.g. vacuously satisfied
    premises) that are not failures.
    """

    violations: list[Violation] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, rule: str, witness: object = None, detail: str = "") -> None:
        self.violations.append(Violation(rule, witness, detail))

    def note(self, text: str) -> None:
        self.notes.append(text)

    def rules(self) -> set[str]:
        return {v.rule for v in self.violations}

    def merge(self, other: "ValidationReport") -> None:
        self.violations.extend(other.violations)
        self.notes.extend(other.notes)

    def __str__(self) -> str:
        if self.ok:
            return "ok" + (f" ({'; '.join(self.notes)})" if self.notes else "")
        return "\n".join(str(v) for v in self.violations)
