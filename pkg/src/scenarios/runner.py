"""
DefCoh - Scenario Runner

Maps each scenario name to the function that records its checks and
logs the start and finish of every run.
"""

import logging
from typing import Callable, Dict

from .config import Scenario, ScenarioName
from .euler_poincare import run_chi_table, run_ep_fuzz
from .quantum_plane import run_qp_cohomology
from .qweyl import run_qweyl_center, run_qweyl_derivations, run_qweyl_h2, run_qweyl_infinitesimal
from .report import Report
from .session import ScenarioRun
from .sridharan import run_sridharan
from .star_assoc import run_star_assoc

logger = logging.getLogger(__name__)

SCENARIOS: Dict[ScenarioName, Callable[[ScenarioRun], None]] = {
    ScenarioName.SRIDHARAN: run_sridharan,
    ScenarioName.QP_COHOMOLOGY: run_qp_cohomology,
    ScenarioName.QWEYL_CENTER: run_qweyl_center,
    ScenarioName.QWEYL_INFINITESIMAL: run_qweyl_infinitesimal,
    ScenarioName.QWEYL_DERIVATIONS: run_qweyl_derivations,
    ScenarioName.QWEYL_H2: run_qweyl_h2,
    ScenarioName.EP_FUZZ: run_ep_fuzz,
    ScenarioName.CHI_TABLE: run_chi_table,
    ScenarioName.STAR_ASSOC: run_star_assoc,
}


def run(scenario: Scenario) -> Report:
    """
    Execute every check of a scenario.

    Raises:
        InvalidParameters: a check met parameters it cannot work with
    """
    session = ScenarioRun(scenario)
    report = session.report
    name = scenario.name.value
    logger.info("scenario %s started (bound %s, order %d)", name, session.bound, session.order)

    SCENARIOS[scenario.name](session)

    logger.info("scenario %s finished: %s (%d checks)", name, report.overall.value, len(report.checks))
    return report
