"""Machine-readable certificates: named checks with witnesses."""

from __future__ import annotations

import hashlib
import json
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Any

from . import __version__
from .graph import Graph, encode

PASS, FAIL, ABORT, SKIP = "pass", "fail", "abort", "skip"


@dataclass
class Check:
    name: str
    claim: str
    status: str
    witness: Any = None
    detail: str = ""


@dataclass
class CertificateReport:
    subject: str
    params: dict = field(default_factory=dict)
    inputs: dict = field(default_factory=dict)
    checks: list[Check] = field(default_factory=list)
    runtimes: dict = field(default_factory=dict)
    tool_version: str = __version__

    def add(self, name: str, claim: str, ok: bool | None, witness: Any = None,
            detail: str = "") -> Check:
        """Record a check. ``ok=None`` marks it skipped."""
        status = SKIP if ok is None else (PASS if ok else FAIL)
        c = Check(name, claim, status, witness, detail)
        self.checks.append(c)
        return c

    def abort(self, name: str, claim: str, detail: str) -> Check:
        c = Check(name, claim, ABORT, None, detail)
        self.checks.append(c)
        return c

    def extend(self, other: "CertificateReport", prefix: str = "") -> None:
        for c in other.checks:
            self.checks.append(Check(prefix + c.name, c.claim, c.status, c.witness, c.detail))
        for key, t in other.runtimes.items():
            self.runtimes[prefix + key] = t

    def digest(self, label: str, g: Graph) -> None:
        self.inputs[label] = graph_digest(g)

    def get(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    @property
    def aborted(self) -> bool:
        return any(c.status == ABORT for c in self.checks)

    @property
    def passed(self) -> bool:
        return all(c.status in (PASS, SKIP) for c in self.checks)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if c.status in (FAIL, ABORT)]

    def exit_code(self) -> int:
        if any(c.status == FAIL for c in self.checks):
            return 1
        return 2 if self.aborted else 0

    def to_dict(self, runtimes: bool = True) -> dict:
        d = {
            "tool_version": self.tool_version,
            "subject": self.subject,
            "inputs": self.inputs,
            "params": self.params,
            "passed": self.passed,
            "checks": [asdict(c) for c in self.checks],
        }
        if runtimes:
            d["runtimes"] = self.runtimes
        return jsonable(d)

    def to_json(self, runtimes: bool = True) -> str:
        return json.dumps(self.to_dict(runtimes), indent=2) + "\n"


def graph_digest(g: Graph) -> str:
    return "sha256:" + hashlib.sha256(encode(g, "graph6")).hexdigest()


def jsonable(x: Any) -> Any:
    """Fractions become ``"p/q"`` strings; sets become sorted lists; tuples become lists."""
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, float) and x == float("inf"):
        return "inf"
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (set, frozenset)):
        return [jsonable(v) for v in sorted(x)]
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    if hasattr(x, "__dataclass_fields__"):
        return jsonable(asdict(x))
    return x
