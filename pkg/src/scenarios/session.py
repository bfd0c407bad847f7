"""
DefCoh - Scenario Session

Runs check evaluations one after another, times them and turns each into
a report row. A check that raises a workbench error (other than invalid
parameters) is recorded as FAIL with the error text as countercase.
"""

import logging
import time
from typing import Callable

from ..core.exceptions import DefCohError, InvalidParameters
from .config import Scenario
from .report import CheckRow, Outcome, Report, Verdict

logger = logging.getLogger(__name__)


class ScenarioRun:
    """Collects the rows of one scenario run."""

    def __init__(self, scenario: Scenario):
        self.scenario = scenario
        self.report = Report(scenario.echo())

    @property
    def bound(self):
        return self.scenario.resolved_bound

    @property
    def order(self) -> int:
        return self.scenario.resolved_order

    def check(self, check_id: str, statement: str, anchor: str, evaluate: Callable[[], Outcome]) -> CheckRow:
        start = time.perf_counter()
        try:
            outcome = evaluate()
        except InvalidParameters:
            raise
        except DefCohError as exc:
            logger.warning("check %s raised %s: %s", check_id, type(exc).__name__, exc)
            outcome = Outcome(Verdict.FAIL, f"{type(exc).__name__}: {exc}")
        elapsed = time.perf_counter() - start

        row = CheckRow(check_id, statement, anchor, outcome.verdict, outcome.witness, outcome.window, elapsed)
        self.report.add(row)
        logger.debug("%s -> %s in %.3fs", check_id, row.verdict.value, elapsed)
        return row
