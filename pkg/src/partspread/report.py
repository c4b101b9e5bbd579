"""Structured check records shared by the verification checks and the CLI.

One record per parameter point, fixed field order:

    name TAB params TAB lhs TAB rhs TAB margin TAB verdict

All fields are deterministic strings; exact values print as integers or
'p/q' rationals so that reruns with the same inputs are byte-identical.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass, field
from fractions import Fraction

# exact rationals in records can exceed the default int->str conversion cap
if hasattr(sys, "set_int_max_str_digits"):
    sys.set_int_max_str_digits(2_000_000)

FIELDS = ("name", "params", "lhs", "rhs", "margin", "verdict")

PASS = "pass"
FAIL = "fail"
SKIPPED = "skipped"
INFO = "info"
FINDING = "finding"
VACUOUS = "vacuous"


def fmt(value) -> str:
    """Canonical text for record fields: exact rationals stay exact."""
    if value is None:
        return "-"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, Fraction):
        if value.denominator == 1:
            return str(value.numerator)
        return f"{value.numerator}/{value.denominator}"
    if isinstance(value, float):
        return repr(value)
    return str(value)


@dataclass
class Record:
    name: str
    params: str
    lhs: str
    rhs: str
    margin: str
    verdict: str

    @classmethod
    def make(cls, name: str, params: dict, lhs, rhs, margin, verdict: str) -> "Record":
        ptxt = ",".join(f"{k}={fmt(v)}" for k, v in params.items()) or "-"
        return cls(name, ptxt, fmt(lhs), fmt(rhs), fmt(margin), verdict)

    def line(self) -> str:
        return "\t".join((self.name, self.params, self.lhs, self.rhs, self.margin, self.verdict))


@dataclass
class CheckReport:
    """Outcome of one named check over a parameter range."""

    name: str
    params: dict
    points: list[Record] = field(default_factory=list)
    verdict: str = PASS
    findings: list[str] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    def add(self, params: dict, lhs, rhs, margin, verdict: str) -> Record:
        rec = Record.make(self.name, params, lhs, rhs, margin, verdict)
        self.points.append(rec)
        return rec

    def finalize(self, fail_as_finding: bool = False) -> "CheckReport":
        """Overall verdict: fail (or finding) if any point fails, else pass."""
        bad = [r for r in self.points if r.verdict == FAIL]
        if bad:
            if fail_as_finding:
                self.verdict = FINDING
                for r in bad:
                    r.verdict = FINDING
                    self.findings.append(r.line())
            else:
                self.verdict = FAIL
        elif any(r.verdict == FINDING for r in self.points) or self.findings:
            self.verdict = FINDING
        else:
            self.verdict = PASS
        return self

    @property
    def ok(self) -> bool:
        return self.verdict != FAIL

    def min_margin(self):
        vals = []
        for r in self.points:
            try:
                vals.append(Fraction(r.margin))
            except (ValueError, ZeroDivisionError):
                continue
        return min(vals) if vals else None

    def records(self) -> list[Record]:
        return list(self.points)

    def to_text(self) -> str:
        head = Record.make(
            self.name, self.params, "-", "-", "-", self.verdict
        )
        lines = [head.line()]
        lines += [r.line() for r in self.points]
        lines += [f"# finding\t{t}" for t in self.findings]
        lines += [f"# note\t{t}" for t in self.notes]
        return "\n".join(lines) + "\n"


def records_to_text(records: list[Record]) -> str:
    return "\n".join(r.line() for r in records) + ("\n" if records else "")


def records_to_table(records: list[Record]) -> str:
    rows = [FIELDS] + [
        (r.name, r.params, r.lhs, r.rhs, r.margin, r.verdict) for r in records
    ]
    widths = [max(len(row[i]) for row in rows) for i in range(len(FIELDS))]
    out = []
    for row in rows:
        out.append("  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip())
    return "\n".join(out) + "\n"
