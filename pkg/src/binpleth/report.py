"""Uniform verdict object for the property checks."""

from __future__ import annotations

import json
from dataclasses import dataclass, field


@dataclass
class Report:
    property: str
    cases: int = 0
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def record(self, passed: bool, witness=None):
        self.cases += 1
        if not passed:
            self.failures.append(witness)

    def as_dict(self) -> dict:
        return {"property": self.property, "cases": self.cases, "failures": self.failures}

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), default=str)

    @classmethod
    def from_json(cls, text: str) -> "Report":
        data = json.loads(text)
        return cls(data["property"], int(data["cases"]), list(data["failures"]))
