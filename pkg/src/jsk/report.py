"""Scenario reports: structured record (schema ``jsk-1``) and human-readable text."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any

from .diffop import LinearDiffOp
from .jets import SequenceDims

SCHEMA = "jsk-1"
PASS, FAIL = "✓", "✗"


class UsageError(Exception):
    """Bad input from the command line or an input file; maps to exit code 2."""


@dataclass
class Section:
    title: str
    kind: str  # operator | dims | value | basis | diagram | certificate
    payload: Any


@dataclass
class Report:
    scenario: str
    params: dict[str, Any] = field(default_factory=dict)
    checks: list[tuple[str, bool]] = field(default_factory=list)
    sections: list[Section] = field(default_factory=list)

    @property
    def verdict(self) -> bool:
        return all(ok for _, ok in self.checks)

    @property
    def first_failure(self) -> str | None:
        return next((name for name, ok in self.checks if not ok), None)

    def check(self, name: str, ok: bool) -> bool:
        self.checks.append((name, bool(ok)))
        return bool(ok)

    def check_all(self, checks: dict[str, bool], prefix: str = "") -> None:
        for name, ok in checks.items():
            self.check(prefix + name, ok)

    def add(self, title: str, kind: str, payload: Any) -> None:
        self.sections.append(Section(title, kind, payload))

    def operator(self, title: str, op: LinearDiffOp) -> None:
        self.add(title, "operator", op.to_record())

    def value(self, title: str, payload: Any) -> None:
        self.add(title, "value", payload)

    def to_record(self) -> dict[str, Any]:
        return {
            "schema": SCHEMA,
            "scenario": {"name": self.scenario, "params": dict(self.params)},
            "verdict": self.verdict,
            "firstFailure": self.first_failure,
            "checks": [{"name": name, "pass": ok} for name, ok in self.checks],
            "sections": [{"title": s.title, "kind": s.kind, "payload": s.payload} for s in self.sections],
        }


def dims_payload(row: SequenceDims) -> dict[str, Any]:
    return {"head": row.head, "dims": list(row.dims), "full": list(row.full), "euler": row.euler_sum}


def to_json(payload: Any) -> str:
    return json.dumps(payload, indent=2, ensure_ascii=False) + "\n"


def serialize(obj: Report | LinearDiffOp) -> str:
    return to_json(obj.to_record())


# ----- human-readable output -----

def circled(k: int) -> str:
    if k == 0:
        return "⓪"
    if 1 <= k <= 20:
        return chr(0x2460 + k - 1)
    if 21 <= k <= 35:
        return chr(0x3251 + k - 21)
    return f"({k})"


def _mark(ok: bool) -> str:
    return PASS if ok else FAIL


def render_diagram(d: dict[str, Any]) -> list[str]:
    """ASCII grid: one line per row, columns aligned on the bundle index."""
    rows = [("Spencer", d["spencer"], "Θ"), ("middle", d["middle"], "E"), ("Janet", d["janet"], "E")]
    lines = []
    for name, row, lead in rows:
        head = d["theta"] if lead == "Θ" else row["head"]
        body = " → ".join(f"{circled(v):^3}" for v in row["dims"])
        lines.append(f"{name:8} 0 → {lead}={circled(head)} → {body} → 0"
                     f"    euler {row['euler']} {_mark(row['euler'] == 0)}")
    sums = " ".join(_mark(ok) for ok in d["columnSums"])
    lines.append(f"columns: middle = Spencer + Janet  {sums}")
    return lines


def _format_payload(kind: str, payload: Any) -> list[str]:
    if kind == "operator":
        head = f"{payload['label'] or 'operator'}  ({payload['targetComps']}x{payload['sourceComps']}, n={payload['n']})"
        out = [head]
        for row in payload["entries"]:
            out.append("  [ " + ", ".join(row) + " ]")
        return out
    if kind == "dims":
        return [f"{payload['full']}  euler {payload['euler']}"]
    if kind == "basis":
        return [f"dim {len(payload)}"] + ["  (" + ", ".join(v) + ")" for v in payload]
    if kind == "diagram":
        return render_diagram(payload)
    if isinstance(payload, dict):
        return [f"{k}: {v}" for k, v in payload.items()] or ["none"]
    return [str(payload)]


def render_text(report: Report, verbose: bool = False) -> str:
    params = ", ".join(f"{k}={v}" for k, v in report.params.items())
    lines = [f"{report.scenario}" + (f" ({params})" if params else "") +
             f"  {'PASS' if report.verdict else 'FAIL'}"]
    for s in report.sections:
        if s.kind == "operator" and not verbose:
            continue
        body = _format_payload(s.kind, s.payload)
        if s.kind == "diagram" or len(body) > 1:
            lines.append(f"  {s.title}:")
            lines.extend("    " + b for b in body)
        else:
            lines.append(f"  {s.title}: {body[0]}")
    lines.append("  checks:")
    lines.extend(f"    {_mark(ok)} {name}" for name, ok in report.checks)
    return "\n".join(lines) + "\n"
