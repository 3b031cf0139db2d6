"""Structured check results shared by every validator and the CLI."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any

STATUSES = ("pass", "fail", "exists", "not_exists")


class InternalInvariantError(RuntimeError):
    """An internal consistency check failed: a bug, not bad input."""


@dataclass
class Report:
    status: str = "pass"
    findings: list = field(default_factory=list)
    payload: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.status not in STATUSES:
            raise ValueError(f"unknown report status {self.status!r}")

    @property
    def ok(self) -> bool:
        return self.status in ("pass", "exists")

    def add(self, axiom: str, location: Any = None, passed: bool = False, **detail) -> None:
        """Record a finding; a failing finding turns a ``pass`` report into ``fail``."""
        item = {"axiom": axiom, "passed": bool(passed)}
        if location is not None:
            item["location"] = location
        if detail:
            item["detail"] = detail
        self.findings.append(item)
        if not passed and self.status == "pass":
            self.status = "fail"

    def fail(self, axiom: str, location: Any = None, **detail) -> None:
        self.add(axiom, location, False, **detail)

    def info(self, axiom: str, location: Any = None, **detail) -> None:
        self.add(axiom, location, True, **detail)

    def check(self, cond: bool, axiom: str, location: Any = None, **detail) -> bool:
        if not cond:
            self.fail(axiom, location, **detail)
        return bool(cond)

    def failures(self) -> list:
        return [f for f in self.findings if not f["passed"]]

    def failed_axioms(self) -> set:
        return {f["axiom"] for f in self.failures()}

    def merge(self, other: "Report", prefix: str = "", location: Any = None) -> None:
        for f in other.findings:
            g = dict(f)
            if prefix:
                g["axiom"] = prefix + g["axiom"]
            if location is not None:
                g["location"] = location if "location" not in f else [location, f["location"]]
            self.findings.append(g)
        if not other.ok and self.status == "pass":
            self.status = "fail"

    def to_json(self) -> dict:
        return {"status": self.status, "findings": self.findings, "payload": self.payload}

    def dumps(self) -> str:
        return json.dumps(_plain(self.to_json()), sort_keys=True, indent=2)

    @classmethod
    def from_json(cls, d: dict) -> "Report":
        return cls(d["status"], list(d.get("findings", [])), dict(d.get("payload", {})))

    def __bool__(self):
        return self.ok


def _plain(x):
    """Make a findings payload JSON friendly (tuples to lists, keys to str)."""
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if isinstance(x, (set, frozenset)):
        return sorted(_plain(v) for v in x)
    if isinstance(x, (str, int, float, bool)) or x is None:
        return x
    return str(x)


plain = _plain
