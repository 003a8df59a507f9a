"""Shared verification-report types.

Verifier modules return a list of named checks, each carrying the theorem
or equation tag it instantiates, so every verdict is citable.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Tuple


@dataclass(frozen=True)
class Check:
    name: str
    tag: str            # e.g. "Thm 4.2(III)", "Eq (8)"
    passed: bool
    detail: str = ""

    def line(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        suffix = f": {self.detail}" if self.detail else ""
        return f"[{mark}] {self.name} [{self.tag}]{suffix}"


@dataclass(frozen=True)
class VerificationReport:
    subject: str
    checks: Tuple[Check, ...]
    notes: Tuple[str, ...] = field(default=())

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> Tuple[Check, ...]:
        return tuple(c for c in self.checks if not c.passed)

    def lines(self):
        out = [f"{self.subject}: {'VERIFIED' if self.ok else 'REFUTED'}"]
        out.extend("  " + c.line() for c in self.checks)
        out.extend(f"  note: {n}" for n in self.notes)
        return out

    def to_doc(self) -> dict:
        return {
            "subject": self.subject,
            "ok": self.ok,
            "checks": [
                {"name": c.name, "tag": c.tag, "passed": c.passed, "detail": c.detail}
                for c in self.checks
            ],
            "notes": list(self.notes),
        }
