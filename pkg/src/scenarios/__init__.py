"""DefCoh Scenarios - named verification runs and their reports."""

from .config import DEFAULT_BOUNDS, DEFAULT_ORDERS, Scenario, ScenarioName
from .report import (
    SCHEMA_VERSION,
    CheckRow,
    Outcome,
    OutputFormat,
    Report,
    Verdict,
    emit,
    render_csv,
    render_json,
    render_text,
)
from .runner import SCENARIOS, run
from .session import ScenarioRun

__all__ = [
    # Parameters
    "Scenario",
    "ScenarioName",
    "DEFAULT_BOUNDS",
    "DEFAULT_ORDERS",

    # Reports
    "SCHEMA_VERSION",
    "CheckRow",
    "Outcome",
    "OutputFormat",
    "Report",
    "Verdict",
    "emit",
    "render_csv",
    "render_json",
    "render_text",

    # Running
    "SCENARIOS",
    "ScenarioRun",
    "run",
]
