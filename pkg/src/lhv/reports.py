"""Structured results for verification sweeps."""

from __future__ import annotations

import json
from dataclasses import dataclass, field


@dataclass
class Report:
    """Outcome of one exact check sweep.

    ``failures`` holds serializable counterexample records (only the first
    failure of a sweep is recorded unless noted otherwise);  ``details``
    carries suite-specific counters.  For a fixed configuration and seed
    the JSON form is byte-identical across runs: wall time is kept out of
    it unless explicitly requested.
    """

    suite: str
    passed: bool
    checked: int = 0
    skipped: int = 0
    failures: list = field(default_factory=list)
    details: dict = field(default_factory=dict)
    seed: int | None = None
    wall_time_s: float | None = None

    def to_json_dict(self, include_timing: bool = False) -> dict:
        out = {
            "suite": self.suite,
            "passed": self.passed,
            "checked": self.checked,
            "skipped": self.skipped,
            "failures": self.failures,
            "details": self.details,
        }
        if self.seed is not None:
            out["seed"] = self.seed
        if include_timing and self.wall_time_s is not None:
            out["wall_time_s"] = round(self.wall_time_s, 3)
        return out

    def to_json(self, include_timing: bool = False) -> str:
        return json.dumps(self.to_json_dict(include_timing), sort_keys=True)

    def summary(self) -> str:
        verdict = "PASS" if self.passed else "FAIL"
        extra = f", skipped {self.skipped}" if self.skipped else ""
        timing = f" [{self.wall_time_s:.2f}s]" if self.wall_time_s is not None else ""
        return f"{self.suite}: {verdict} ({self.checked} checks{extra}){timing}"
