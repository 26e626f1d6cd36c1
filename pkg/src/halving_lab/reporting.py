"""Verification reports: per-claim pass/fail with witnesses."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

#: how many witnesses a report keeps before it only counts further ones
WITNESS_CAP = 20


@dataclass
class VerificationReport:
    """Outcome of one structural check.

    `checked` counts the individual exact decisions made; `violations` holds
    up to WITNESS_CAP witnesses (the total is in `violation_count`), and
    `details` carries exact quantities worth reporting (as Fractions or
    strings, never floats unless explicitly labelled approximate).
    """

    name: str
    passed: bool = True
    checked: int = 0
    violations: list[Any] = field(default_factory=list)
    violation_count: int = 0
    details: dict[str, Any] = field(default_factory=dict)

    def record_violation(self, witness: Any) -> None:
        self.passed = False
        self.violation_count += 1
        if len(self.violations) < WITNESS_CAP:
            self.violations.append(witness)

    def merge_child(self, child: "VerificationReport") -> None:
        self.checked += child.checked
        self.violation_count += child.violation_count
        for w in child.violations:
            if len(self.violations) < WITNESS_CAP:
                self.violations.append(w)
        if not child.passed:
            self.passed = False

    def summary_line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        extra = f", violations={self.violation_count}" if self.violation_count else ""
        return f"{status} {self.name} (checked={self.checked}{extra})"

    def detail_lines(self) -> list[str]:
        lines = []
        for key in sorted(self.details):
            lines.append(f"  {key} = {format_value(self.details[key])}")
        for w in self.violations:
            lines.append(f"  witness: {w}")
        if self.violation_count > len(self.violations):
            lines.append(f"  ... {self.violation_count - len(self.violations)} more")
        return lines


def format_value(value: Any) -> str:
    if isinstance(value, Fraction):
        return f"{value.numerator}/{value.denominator}" if value.denominator != 1 else str(value.numerator)
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(format_value(v) for v in value) + "]"
    return str(value)
