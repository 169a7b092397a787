"""Deterministic reports: verdicts with certificates, echoed seeds/bounds,
and a canonical hash that excludes the timing field."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from typing import Any, Optional

TOOL_VERSION = "abmc 0.1.0"
REPORT_FORMAT = 1


@dataclass
class Report:
    command: str
    seed: int
    bounds: Optional[int] = None
    preset: Optional[str] = None
    verdicts: list = field(default_factory=list)
    timing_ms: int = 0

    def add(self, name: str, passed: bool, detail: Any = None):
        entry = {"name": name, "pass": bool(passed)}
        if detail is not None:
            entry["detail"] = detail
        self.verdicts.append(entry)

    @property
    def passed(self) -> bool:
        return all(v["pass"] for v in self.verdicts)

    def payload(self) -> dict:
        out = {
            "format": REPORT_FORMAT,
            "tool": TOOL_VERSION,
            "command": self.command,
            "seed": self.seed,
            "verdicts": self.verdicts,
            "pass": self.passed,
        }
        if self.bounds is not None:
            out["bounds"] = self.bounds
        if self.preset is not None:
            out["preset"] = self.preset
        return out

    def canonical_json(self) -> str:
        """Serialization hashed for determinism comparisons (no timing)."""
        return json.dumps(self.payload(), sort_keys=True, separators=(",", ":"))

    def report_hash(self) -> str:
        return hashlib.sha256(self.canonical_json().encode()).hexdigest()

    def to_json(self) -> str:
        out = self.payload()
        out["report_hash"] = self.report_hash()
        out["timing_ms"] = self.timing_ms
        return json.dumps(out, sort_keys=True, indent=2)

    def to_text(self) -> str:
        lines = [
            f"{TOOL_VERSION}  command={self.command}"
            + (f"  preset={self.preset}" if self.preset else "")
            + f"  seed={self.seed}"
            + (f"  bounds={self.bounds}" if self.bounds is not None else "")
        ]
        width = max((len(v["name"]) for v in self.verdicts), default=0)
        for v in self.verdicts:
            status = "pass" if v["pass"] else "FAIL"
            line = f"  {v['name']:<{width}}  {status}"
            if "detail" in v and not v["pass"]:
                line += f"  {json.dumps(v['detail'], sort_keys=True, default=str)[:200]}"
            elif "detail" in v and isinstance(v["detail"], (str, int)):
                line += f"  {v['detail']}"
            lines.append(line)
        lines.append(f"  overall: {'pass' if self.passed else 'FAIL'}")
        lines.append(f"  report_hash: {self.report_hash()}")
        lines.append(f"  timing_ms: {self.timing_ms}")
        return "\n".join(lines)
