"""Verdict records shared by all certificate checkers."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Optional

from ..reporting import SCHEMA_VERSION, csv_text


@dataclass(frozen=True)
class FailedCondition:
    name: str
    index: Optional[int] = None
    detail: str = ""
    context: tuple = ()

    def to_json(self) -> dict:
        return {"name": self.name, "index": self.index, "detail": self.detail,
                "context": dict(self.context)}


@dataclass(frozen=True)
class Verdict:
    """Outcome of a certificate check: ``PASS`` certifies ``alpha(T) >= bound``."""

    verdict: str
    bound: float
    failed_condition: Optional[FailedCondition] = None
    trace: tuple = ()
    conclusion: str = ""

    @property
    def passed(self) -> bool:
        return self.verdict == "PASS"

    def to_json(self) -> dict:
        out: dict[str, Any] = {"schema_version": SCHEMA_VERSION, "verdict": self.verdict,
                               "bound": self.bound, "trace": [dict(t) for t in self.trace]}
        if self.failed_condition is not None:
            out["failed_condition"] = self.failed_condition.to_json()
        if self.conclusion:
            out["conclusion"] = self.conclusion
        return out

    def trace_csv(self) -> str:
        """Per-condition margins, one row per trace entry and condition."""
        rows = []
        for entry in self.trace:
            entry = dict(entry)
            ctx = {k: v for k, v in entry.items() if k != "margins"}
            for cond, margin in entry.get("margins", ()):
                rows.append((ctx.get("eps", ""), ctx.get("k", ""), cond, margin))
        return csv_text(["eps", "k", "condition", "margin"], rows)


def passed(bound: float, trace=(), conclusion: str = "") -> Verdict:
    return Verdict("PASS", bound, None, tuple(trace), conclusion)


def failed(bound: float, name: str, index: Optional[int] = None, detail: str = "",
           context: Optional[dict] = None, trace=()) -> Verdict:
    ctx = tuple(sorted((context or {}).items()))
    return Verdict("FAIL", bound, FailedCondition(name, index, detail, ctx), tuple(trace))
