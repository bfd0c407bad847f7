"""
DefCoh - Verification Reports

A Report is the ordered list of check rows a scenario produced plus the
scenario echo. JSON output is canonical: sorted keys, fixed indentation,
scalars already rendered to text, and wall-times only on request, so the
same scenario always gives the same bytes.
"""

import csv
import io
import json
import logging
import sys
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Dict, List, Optional

from ..core.exceptions import IOFailure

logger = logging.getLogger(__name__)

SCHEMA_VERSION = "defcoh.report.v1"
CSV_COLUMNS = ["check_id", "statement", "anchor", "verdict", "witness", "window"]


class Verdict(Enum):
    PASS = "PASS"
    FAIL = "FAIL"
    NONE_AT_WINDOW = "NONE-AT-WINDOW"


class OutputFormat(Enum):
    TEXT = "text"
    JSON = "json"
    CSV = "csv"


@dataclass
class CheckRow:
    """One verified statement."""
    check_id: str
    statement: str
    anchor: str
    verdict: Verdict
    witness: str = ""
    window: str = ""
    wall_time: float = 0.0

    def to_dict(self, timings: bool = False) -> Dict[str, object]:
        row = {
            "check_id": self.check_id,
            "statement": self.statement,
            "anchor": self.anchor,
            "verdict": self.verdict.value,
            "witness": self.witness,
            "window": self.window,
        }
        if timings:
            row["wall_time_s"] = round(self.wall_time, 3)
        return row


@dataclass
class Report:
    scenario: Dict[str, object]
    checks: List[CheckRow] = field(default_factory=list)

    @property
    def overall(self) -> Verdict:
        """FAIL if any row fails; NONE-AT-WINDOW rows count as passing."""
        if any(row.verdict is Verdict.FAIL for row in self.checks):
            return Verdict.FAIL
        return Verdict.PASS

    @property
    def has_window_limits(self) -> bool:
        return any(row.verdict is Verdict.NONE_AT_WINDOW for row in self.checks)

    @property
    def exit_code(self) -> int:
        return 1 if self.overall is Verdict.FAIL else 0

    def add(self, row: CheckRow) -> None:
        self.checks.append(row)
        logger.debug("%s: %s", row.check_id, row.verdict.value)

    def to_dict(self, timings: bool = False) -> Dict[str, object]:
        return {
            "schema_version": SCHEMA_VERSION,
            "scenario": self.scenario,
            "checks": [row.to_dict(timings) for row in self.checks],
            "overall": self.overall.value,
            "none_at_window": self.has_window_limits,
        }


def render_json(report: Report, timings: bool = False) -> str:
    return json.dumps(report.to_dict(timings), indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def render_csv(report: Report, timings: bool = False) -> str:
    columns = CSV_COLUMNS + (["wall_time_s"] if timings else [])
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=columns, lineterminator="\n")
    writer.writeheader()
    for row in report.checks:
        writer.writerow(row.to_dict(timings))
    return buffer.getvalue()


def render_text(report: Report, timings: bool = False) -> str:
    lines = [
        "=" * 70,
        f"DefCoh scenario: {report.scenario.get('name', '?')}",
        "=" * 70,
    ]
    for key in sorted(report.scenario):
        lines.append(f"  {key}: {report.scenario[key]}")
    lines.append("")
    for row in report.checks:
        lines.append(f"[{row.verdict.value}] {row.check_id}  ({row.anchor})")
        lines.append(f"    {row.statement}")
        if row.witness:
            lines.append(f"    witness: {row.witness}")
        if row.window:
            lines.append(f"    window: {row.window}")
        if timings:
            lines.append(f"    time: {row.wall_time:.3f}s")
    lines.append("-" * 70)
    suffix = " (some statements verified only within windows)" if report.has_window_limits else ""
    lines.append(f"OVERALL: {report.overall.value}{suffix}")
    return "\n".join(lines) + "\n"


RENDERERS = {
    OutputFormat.TEXT: render_text,
    OutputFormat.JSON: render_json,
    OutputFormat.CSV: render_csv,
}


def emit(report: Report, fmt: OutputFormat = OutputFormat.JSON, path: Optional[str] = None, timings: bool = False) -> str:
    """
    Render a report and write it to path (stdout when path is None).

    Raises:
        IOFailure: path cannot be written
    """
    text = RENDERERS[OutputFormat(fmt)](report, timings)
    if path is None:
        sys.stdout.write(text)
        return text
    try:
        Path(path).write_text(text, encoding="utf-8")
    except OSError as exc:
        raise IOFailure(f"cannot write report to {path}: {exc}") from exc
    logger.info("report written to %s", path)
    return text


@dataclass
class Outcome:
    """What a check evaluation returns before it becomes a row."""
    verdict: Verdict
    witness: str = ""
    window: str = ""

    @classmethod
    def of(cls, ok: bool, witness: str = "", countercase: str = "", window: str = "") -> "Outcome":
        if ok:
            return cls(Verdict.PASS, witness, window)
        return cls(Verdict.FAIL, countercase or witness, window)
