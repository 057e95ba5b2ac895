"""Structured pass/fail reports."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any

PASS, FAIL, SKIP, WARN = "pass", "fail", "skip", "warn"

_MAX_OFFENDERS = 12


@dataclass
class CheckEntry:
    name: str
    title: str
    status: str
    detail: str = ""
    offenders: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        # warnings are informational and never block
        return self.status in (PASS, WARN)

    def to_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "title": self.title,
            "status": self.status,
            "detail": self.detail,
            "offenders": [_jsonable(o) for o in self.offenders],
        }


def _jsonable(obj):
    if isinstance(obj, (list, tuple)):
        return [_jsonable(o) for o in obj]
    if isinstance(obj, (str, int, float, bool)) or obj is None:
        return obj
    return str(obj)


def entry(name, title, ok, detail="", offenders=()) -> CheckEntry:
    offenders = list(offenders)[:_MAX_OFFENDERS]
    return CheckEntry(name, title, PASS if ok else FAIL, detail, offenders)


@dataclass
class CheckReport:
    subject: str
    entries: list[CheckEntry] = field(default_factory=list)
    meta: dict[str, Any] = field(default_factory=dict)

    @property
    def overall(self) -> bool:
        return all(e.passed for e in self.entries)

    def __bool__(self) -> bool:
        return self.overall

    def __getitem__(self, name: str) -> CheckEntry:
        for e in self.entries:
            if e.name == name:
                return e
        raise KeyError(name)

    def __contains__(self, name: str) -> bool:
        return any(e.name == name for e in self.entries)

    def add(self, e: CheckEntry) -> CheckEntry:
        self.entries.append(e)
        return e

    def failed(self) -> list[str]:
        return [e.name for e in self.entries if e.status == FAIL]

    def first_failure(self) -> str | None:
        for e in self.entries:
            if e.status == FAIL:
                return e.name
        return None

    def to_dict(self) -> dict[str, Any]:
        return {
            "subject": self.subject,
            "overall": self.overall,
            "entries": [e.to_dict() for e in self.entries],
            "meta": {k: _jsonable(v) for k, v in sorted(self.meta.items())},
        }

    def render(self, fmt: str = "text") -> str:
        if fmt == "machine":
            return json.dumps(self.to_dict(), sort_keys=True)
        lines = [f"{self.subject}: {'PASS' if self.overall else 'FAIL'}"]
        for e in self.entries:
            line = f"  [{e.status.upper():4}] {e.title}"
            if e.detail:
                line += f" -- {e.detail}"
            if e.offenders and e.status != PASS:
                line += " | offenders: " + ", ".join(str(o) for o in e.offenders)
            lines.append(line)
        for k, v in sorted(self.meta.items()):
            lines.append(f"  {k}: {v}")
        return "\n".join(lines)
