"""Machine-readable verdict reports.

Every check and scan emits a VerdictReport.  JSON is the canonical format
(sorted keys, fixed indentation) so that deterministic runs are
byte-identical; the text rendering is a human view of the same structure.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass
from typing import Any

from ._version import __version__

SCHEMA_VERSION = 1

VERDICTS = ("holds", "fails", "found", "none", "incomplete")

# Verdicts that count as a passed check for the exit-code contract.
PASSING_VERDICTS = ("holds", "found")


@dataclass(frozen=True)
class Metrics:
    elapsed_s: float
    work_units: int
    threads: int

    def to_dict(self) -> dict[str, Any]:
        return {"elapsed_s": self.elapsed_s, "work_units": self.work_units,
                "threads": self.threads}


@dataclass(frozen=True)
class VerdictReport:
    claim_id: str
    inputs: dict[str, Any]
    verdict: str
    certificate: dict[str, Any] | None
    metrics: Metrics
    seed: int | None = None
    tool_version: str = __version__
    schema_version: int = SCHEMA_VERSION

    def __post_init__(self) -> None:
        if self.verdict not in VERDICTS:
            raise ValueError(f"unknown verdict {self.verdict!r}")

    @property
    def passed(self) -> bool:
        return self.verdict in PASSING_VERDICTS

    def to_dict(self) -> dict[str, Any]:
        return {
            "schema_version": self.schema_version,
            "tool_version": self.tool_version,
            "claim_id": self.claim_id,
            "inputs": self.inputs,
            "verdict": self.verdict,
            "certificate": self.certificate,
            "metrics": self.metrics.to_dict(),
            "seed": self.seed,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "VerdictReport":
        m = d["metrics"]
        return cls(
            claim_id=d["claim_id"],
            inputs=d["inputs"],
            verdict=d["verdict"],
            certificate=d.get("certificate"),
            metrics=Metrics(m["elapsed_s"], m["work_units"], m["threads"]),
            seed=d.get("seed"),
            tool_version=d.get("tool_version", __version__),
            schema_version=d.get("schema_version", SCHEMA_VERSION),
        )

    def render_text(self) -> str:
        lines = [f"{self.claim_id}: {self.verdict}"]
        for key in sorted(self.inputs):
            lines.append(f"  {key} = {self.inputs[key]}")
        if self.certificate:
            for key in sorted(self.certificate):
                lines.append(f"  {key}: {_compact(self.certificate[key])}")
        m = self.metrics
        lines.append(f"  [work={m.work_units} threads={m.threads} elapsed={m.elapsed_s:.3f}s]")
        return "\n".join(lines)


def _compact(value: Any) -> str:
    text = json.dumps(value, sort_keys=True)
    if len(text) > 2000:
        text = text[:2000] + "..."
    return text


class ReportTimer:
    """Collects elapsed time and work units for a report.

    In deterministic mode the elapsed time is reported as 0.0 so that
    repeated runs produce byte-identical output.
    """

    def __init__(self, deterministic: bool = True):
        self.deterministic = deterministic
        self.work_units = 0
        self._start = time.perf_counter()

    def add_work(self, n: int = 1) -> None:
        self.work_units += n

    def metrics(self, threads: int = 1) -> Metrics:
        elapsed = 0.0 if self.deterministic else time.perf_counter() - self._start
        return Metrics(elapsed_s=elapsed, work_units=self.work_units, threads=threads)
