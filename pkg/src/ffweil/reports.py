"""Verification reports shared by the theorem checkers."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import VerificationFailed
from .exact import format_fraction


def _render(x):
    if isinstance(x, Fraction):
        return format_fraction(x)
    if isinstance(x, bool) or x is None:
        return x
    if isinstance(x, int):
        return x
    if isinstance(x, tuple):
        return [_render(v) for v in x]
    if hasattr(x, "to_json"):
        return x.to_json()
    return x


@dataclass(frozen=True)
class Check:
    name: str
    lhs: object
    rhs: object

    @property
    def ok(self):
        return self.lhs == self.rhs

    def to_json(self):
        return {"name": self.name, "lhs": _render(self.lhs), "rhs": _render(self.rhs), "ok": self.ok}


@dataclass
class VerificationReport:
    """Named exact identities plus route labels for one verification."""

    name: str
    checks: list = field(default_factory=list)
    labels: dict = field(default_factory=dict)
    values: dict = field(default_factory=dict)

    @property
    def passed(self):
        return all(c.ok for c in self.checks)

    def add(self, name, lhs, rhs):
        self.checks.append(Check(name, lhs, rhs))
        return self

    def raise_if_failed(self):
        for c in self.checks:
            if not c.ok:
                raise VerificationFailed(f"{self.name}: {c.name} differs: {c.lhs} != {c.rhs}", c.lhs, c.rhs, self)
        return self

    def to_json(self):
        return {
            "name": self.name,
            "passed": self.passed,
            "checks": [c.to_json() for c in self.checks],
            "labels": dict(self.labels),
            "values": {k: _render(v) for k, v in self.values.items()},
        }
