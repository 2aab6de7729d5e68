"""Structured outcome of a single check."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Iterable

PASS = "pass"
FAIL = "fail"
VIOLATED = "violated-assumption"
STATUSES = (PASS, FAIL, VIOLATED)


@dataclass(frozen=True)
class Verdict:
    """``witness`` is ``None`` on pass and otherwise holds enough to replay the check."""

    check: str
    status: str
    witness: dict[str, Any] | None = None

    def __post_init__(self):
        if self.status not in STATUSES:
            raise ValueError(f"unknown status {self.status!r}")
        if self.status != PASS and not self.witness:
            raise ValueError(f"a {self.status} verdict needs a witness")

    @property
    def passed(self) -> bool:
        return self.status == PASS

    def to_json(self) -> dict:
        return {"check": self.check, "status": self.status, "witness": self.witness}


def worst(verdicts: Iterable[Verdict]) -> str:
    """Combined status: any fail beats any violated assumption beats pass."""
    seen = {v.status for v in verdicts}
    if FAIL in seen:
        return FAIL
    if VIOLATED in seen:
        return VIOLATED
    return PASS
