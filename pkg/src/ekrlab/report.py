"""Structured verdicts for theorem and inequality checks.

A VerdictReport records every hypothesis with both sides of its inequality
(as exactness-preserving strings), the located witness, whether the
conclusion holds, and the numeric slacks -- everything needed to reproduce
the check from its inputs.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

from .numerics import Checked, fmt_rational, fmt_real

HOLDS = "holds"
FAILS = "fails"
UNRESOLVED = "unresolved"
VACUOUS = "vacuous"


def fmt(x) -> str:
    if isinstance(x, str):
        return x
    if isinstance(x, bool):
        return str(x)
    if isinstance(x, (int, Fraction)):
        return fmt_rational(Fraction(x))
    return fmt_real(x)


@dataclass
class HypothesisFlag:
    name: str
    status: str  # holds / fails / unresolved / vacuous
    lhs: str = ""
    rhs: str = ""
    note: str = ""

    @classmethod
    def from_checked(cls, name: str, c: Checked, note: str = "") -> "HypothesisFlag":
        return cls(name, HOLDS if c.holds else FAILS, fmt(c.lhs), fmt(c.rhs), note)

    @property
    def holds(self) -> bool:
        return self.status == HOLDS


@dataclass
class VerdictReport:
    check: str
    hypotheses: list[HypothesisFlag] = field(default_factory=list)
    witness: dict | None = None
    conclusion_holds: bool | None = None
    slacks: dict = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)

    def add_hypothesis(self, name: str, checked: Checked, note: str = "") -> HypothesisFlag:
        flag = HypothesisFlag.from_checked(name, checked, note)
        self.hypotheses.append(flag)
        return flag

    def add_flag(self, name: str, status: str, lhs="", rhs="", note: str = "") -> HypothesisFlag:
        flag = HypothesisFlag(name, status, fmt(lhs) if lhs != "" else "",
                              fmt(rhs) if rhs != "" else "", note)
        self.hypotheses.append(flag)
        return flag

    def add_slack(self, name: str, value) -> None:
        self.slacks[name] = fmt(value)

    @property
    def hypotheses_met(self) -> bool:
        """True when no resolved hypothesis fails (unresolved flags pass through)."""
        return all(f.status != FAILS for f in self.hypotheses)

    @property
    def passed(self) -> bool:
        return self.hypotheses_met and self.conclusion_holds is not False

    def to_dict(self) -> dict:
        return {
            "check": self.check,
            "hypotheses": [
                {"name": f.name, "status": f.status, "lhs": f.lhs, "rhs": f.rhs,
                 "note": f.note}
                for f in self.hypotheses
            ],
            "witness": self.witness,
            "conclusion_holds": self.conclusion_holds,
            "slacks": dict(sorted(self.slacks.items())),
            "notes": list(self.notes),
        }

    def to_json(self, indent: int | None = None) -> str:
        return json.dumps(self.to_dict(), indent=indent, sort_keys=True)
