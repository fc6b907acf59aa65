"""Check results and the JSON report emitted by the command-line tools."""

from __future__ import annotations

import json
import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import Any

from . import __version__


@dataclass
class Check:
    name: str
    passed: bool
    detail: dict = field(default_factory=dict)
    elapsed_ms: float | None = None

    def to_json(self, timing: bool = False) -> dict:
        out = {"name": self.name, "pass": self.passed, "detail": self.detail}
        if timing:
            out["elapsed_ms"] = round(self.elapsed_ms or 0.0, 3)
        return out


class _Timer:
    ms: float | None = None


@contextmanager
def timed():
    t = _Timer()
    start = time.perf_counter()
    try:
        yield t
    finally:
        t.ms = (time.perf_counter() - start) * 1000.0


@dataclass
class Report:
    command: str
    params: dict
    checks: list[Check] = field(default_factory=list)
    witnesses: dict[str, Any] = field(default_factory=dict)
    elapsed_ms: float | None = None

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_dict(self, timing: bool = False) -> dict:
        return {
            "command": self.command,
            "params": self.params,
            "checks": [c.to_json(timing) for c in self.checks],
            "witnesses": self.witnesses,
            "elapsed_ms": round(self.elapsed_ms or 0.0, 3) if timing else None,
            "version": __version__,
        }

    def to_json(self, timing: bool = False) -> str:
        return json.dumps(self.to_dict(timing), indent=2, sort_keys=True)

    def to_text(self) -> str:
        lines = [f"{self.command}  ({', '.join(f'{k}={v}' for k, v in sorted(self.params.items()))})"]
        for c in self.checks:
            status = "PASS" if c.passed else "FAIL"
            t = f"  [{c.elapsed_ms:.0f} ms]" if c.elapsed_ms is not None else ""
            lines.append(f"  {status}  {c.name}{t}")
            for k, v in sorted(c.detail.items()):
                if v is None:
                    continue
                lines.append(f"          {k}: {v}")
        for name, w in sorted(self.witnesses.items()):
            lines.append(f"  witness {name}:")
            text = json.dumps(w, indent=2, sort_keys=True)
            lines.extend("    " + ln for ln in text.splitlines())
        return "\n".join(lines)
