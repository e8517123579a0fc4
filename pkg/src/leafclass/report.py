"""Pass/fail records shared by the verification routines and the CLI."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

import mpmath


@dataclass
class Check:
    name: str
    passed: bool
    witness: Any = None
    values: Any = None

    def to_dict(self) -> dict:
        out = {"name": self.name, "verdict": "pass" if self.passed else "fail"}
        if self.witness is not None:
            out["witness"] = jsonable(self.witness)
        if self.values is not None:
            out["values"] = jsonable(self.values)
        return out


@dataclass
class CheckList:
    checks: list[Check] = field(default_factory=list)

    def add(self, name: str, passed: bool, witness=None, values=None) -> Check:
        c = Check(name, bool(passed), witness, values)
        self.checks.append(c)
        return c

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def __getitem__(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def __iter__(self):
        return iter(self.checks)

    def to_list(self) -> list[dict]:
        return [c.to_dict() for c in self.checks]


def format_mpf(x, digits: int = 30) -> str:
    return mpmath.nstr(x, digits, min_fixed=-4, max_fixed=8)


def jsonable(obj):
    """Convert nested values into JSON-ready plain data with stable text for numbers."""
    if isinstance(obj, (mpmath.mpf, mpmath.mpc)):
        return format_mpf(obj)
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, (str, int, float, bool)) or obj is None:
        return obj
    return str(obj)
