"""Tests for scenario parameters, runs and report rendering."""

import dataclasses
import json
import logging

import pytest
from pydantic import ValidationError

from src.core.exceptions import InvalidParameters, NotACocycle
from src.scenarios import (
    SCENARIOS,
    OutputFormat,
    Report,
    Scenario,
    ScenarioName,
    Verdict,
    emit,
    render_csv,
    render_json,
    render_text,
    run,
)
from src.scenarios.report import CheckRow, Outcome
from src.scenarios.session import ScenarioRun
from src.scenarios.sridharan import vanishing_range

EXPECTED_CHECKS = {
    ScenarioName.SRIDHARAN: [
        "sridharan.obstruction-criterion",
        "sridharan.inner-lift",
        "sridharan.cup-lift",
        "sridharan.torsion",
        "sridharan.window-vanishing",
    ],
    ScenarioName.STAR_ASSOC: [
        "star.moyal-commutator",
        "star.moyal-assoc",
        "star.weyl-assoc",
        "star.qp-assoc",
        "star.qp-commutation",
        "star.infinitesimal",
        "star.weyl-identification",
        "star.group-action",
        "star.corruption-detected",
    ],
    ScenarioName.EP_FUZZ: [
        "ep.chi-equality",
        "ep.chi-invariance",
        "ep.dims-nonincreasing",
        "ep.generic-specialization",
        "ep.worked-example",
    ],
    ScenarioName.CHI_TABLE: ["chi.table", "chi.total", "chi.window-cross-check"],
    ScenarioName.QP_COHOMOLOGY: [
        "qp.center",
        "qp.first-cohomology",
        "qp.second-cohomology",
        "qp.lift-criterion",
        "qp.lifts-to-itself",
    ],
    ScenarioName.QWEYL_CENTER: ["qweyl.center", "qweyl.generators-central"],
    ScenarioName.QWEYL_INFINITESIMAL: ["qweyl.rewrite", "qweyl.infinitesimal", "qweyl.twisted-relation"],
    ScenarioName.QWEYL_DERIVATIONS: [
        "qweyl.euler-derivation",
        "qweyl.obstructed",
        "qweyl.inner-annihilates-center",
        "qweyl.central-multiples",
        "qweyl.obstruction-shadow",
        "qweyl.euler-unobstructed",
    ],
    ScenarioName.QWEYL_H2: ["qweyl.h2-bracket", "qweyl.h2-lift"],
}

SMALL_RUNS = [
    Scenario(name="sridharan", bound=(2, 2), order=2),
    Scenario(name="star-assoc", bound=(2, 2), order=3),
    Scenario(name="ep-fuzz", count=12, seed=5),
    Scenario(name="chi-table", bound=(2, 2)),
    Scenario(name="qp-cohomology", q="zeta:3", bound=(3, 3)),
    Scenario(name="qp-cohomology", q="symbolic", bound=(2, 2)),
    Scenario(name="qweyl-center", q="zeta:3", bound=(6, 6)),
    Scenario(name="qweyl-center", q="symbolic", bound=(4, 4)),
    Scenario(name="qweyl-infinitesimal", bound=(3, 3)),
    Scenario(name="qweyl-derivations", q="zeta:2"),
    Scenario(name="qweyl-h2", q="zeta:2", bound=(4, 4)),
]


def test_every_name_has_a_runner():
    assert set(SCENARIOS) == set(ScenarioName)
    assert set(EXPECTED_CHECKS) == set(ScenarioName)


@pytest.mark.parametrize("scenario", SMALL_RUNS, ids=lambda s: f"{s.name.value}-{s.q}")
def test_scenario_passes(scenario):
    report = run(scenario)
    failing = [row.check_id for row in report.checks if row.verdict is Verdict.FAIL]
    assert failing == []
    assert [row.check_id for row in report.checks] == EXPECTED_CHECKS[scenario.name]
    assert report.overall is Verdict.PASS
    assert report.exit_code == 0


def test_window_limits_are_reported():
    report = run(Scenario(name="qweyl-derivations", q="zeta:3"))
    shadow = next(row for row in report.checks if row.check_id == "qweyl.obstruction-shadow")
    assert shadow.verdict is Verdict.NONE_AT_WINDOW
    assert shadow.window
    assert report.has_window_limits
    assert report.overall is Verdict.PASS


def test_run_progress_goes_to_the_logger(caplog):
    with caplog.at_level(logging.INFO, logger="src.scenarios.runner"):
        report = run(Scenario(name="chi-table", bound=(1, 1)))
    messages = [r.getMessage() for r in caplog.records if r.name == "src.scenarios.runner"]
    assert messages[0].startswith("scenario chi-table started")
    assert messages[-1] == f"scenario chi-table finished: {report.overall.value} ({len(report.checks)} checks)"


def test_report_holds_only_echo_and_checks():
    assert [f.name for f in dataclasses.fields(Report)] == ["scenario", "checks"]


class TestWindowVanishing:
    def test_default_bound_is_clipped_with_a_warning(self, caplog):
        session = ScenarioRun(Scenario(name="sridharan"))
        with caplog.at_level(logging.WARNING, logger="src.scenarios.sridharan"):
            assert vanishing_range(session) == (2, 2)
        messages = [r.getMessage() for r in caplog.records if r.name == "src.scenarios.sridharan"]
        assert any("[-1,2]^2" in m for m in messages)
        assert any("star order 2" in m for m in messages)

    def test_small_bound_is_honoured_silently(self, caplog):
        session = ScenarioRun(Scenario(name="sridharan", bound=(1, 1), order=1))
        with caplog.at_level(logging.WARNING, logger="src.scenarios.sridharan"):
            assert vanishing_range(session) == (1, 1)
        assert not [r for r in caplog.records if r.name == "src.scenarios.sridharan"]

    def test_sweep_covers_bidegree_two(self):
        report = run(Scenario(name="sridharan", bound=(2, 2), order=2))
        row = next(row for row in report.checks if row.check_id == "sridharan.window-vanishing")
        assert row.verdict is Verdict.PASS
        assert "[-1,2]^2" in row.witness


class TestParameters:
    def test_defaults_filled_in_echo(self):
        echo = Scenario(name="sridharan").echo()
        assert echo["bound"] == [4, 4]
        assert echo["order"] == 4
        assert echo["name"] == "sridharan"
        assert "workers" not in echo

    def test_bound_from_text(self):
        assert Scenario(name="chi-table", bound="2,3").resolved_bound == (2, 3)

    @pytest.mark.parametrize(
        "fields",
        [
            {"name": "qweyl-h2", "q": "symbolic"},
            {"name": "qweyl-center", "q": "1"},
            {"name": "qp-cohomology", "q": "2"},
            {"name": "sridharan", "q": "zeta:0"},
            {"name": "chi-table", "bound": "2"},
            {"name": "chi-table", "bound": (-1, 2)},
            {"name": "sridharan", "order": -1},
            {"name": "ep-fuzz", "count": 0},
            {"name": "star-assoc", "window": "order=2"},
            {"name": "star-assoc", "colour": "red"},
        ],
    )
    def test_rejected(self, fields):
        with pytest.raises((ValidationError, InvalidParameters)):
            Scenario(**fields)

    def test_frozen(self):
        scenario = Scenario(name="chi-table")
        with pytest.raises(ValidationError):
            scenario.seed = 3


class TestReports:
    @pytest.fixture
    def report(self):
        session = ScenarioRun(Scenario(name="chi-table", bound=(1, 1)))
        session.check("demo.pass", "one is one", "chi-table", lambda: Outcome.of(True, "1 = 1"))
        session.check("demo.window", "searched", "chi-table", lambda: Outcome(Verdict.NONE_AT_WINDOW, "", "order=2,deg=6"))
        return session.report

    def test_window_rows_do_not_fail(self, report):
        assert report.overall is Verdict.PASS
        assert report.has_window_limits

    def test_failure(self, report):
        report.add(CheckRow("demo.fail", "two is one", "chi-table", Verdict.FAIL, "1 != 2"))
        assert report.overall is Verdict.FAIL
        assert report.exit_code == 1

    def test_json_is_canonical(self, report):
        text = render_json(report)
        data = json.loads(text)
        assert set(data) == {"schema_version", "scenario", "checks", "overall", "none_at_window"}
        assert "wall_time_s" not in data["checks"][0]
        assert text == render_json(report)
        assert "wall_time_s" in json.loads(render_json(report, timings=True))["checks"][0]

    def test_csv(self, report):
        lines = render_csv(report).splitlines()
        assert lines[0] == "check_id,statement,anchor,verdict,witness,window"
        assert len(lines) == 3

    def test_text(self, report):
        text = render_text(report)
        assert "[PASS] demo.pass  (chi-table)" in text
        assert text.rstrip().endswith("OVERALL: PASS (some statements verified only within windows)")

    def test_emit_to_file(self, report, tmp_path):
        path = tmp_path / "report.json"
        text = emit(report, OutputFormat.JSON, str(path))
        assert path.read_text(encoding="utf-8") == text

    def test_errors_inside_a_check_become_failures(self):
        def broken():
            raise NotACocycle("δF != 0")

        session = ScenarioRun(Scenario(name="chi-table"))
        row = session.check("demo.broken", "raises", "chi-table", broken)
        assert row.verdict is Verdict.FAIL
        assert row.witness.startswith("NotACocycle")

    def test_invalid_parameters_propagate(self):
        def invalid():
            raise InvalidParameters("bad q")

        session = ScenarioRun(Scenario(name="chi-table"))
        with pytest.raises(InvalidParameters):
            session.check("demo.invalid", "raises", "chi-table", invalid)


def test_runs_are_deterministic():
    scenario = Scenario(name="ep-fuzz", count=4, seed=9)
    assert render_json(run(scenario)) == render_json(run(scenario))


def test_report_type():
    assert isinstance(run(Scenario(name="chi-table", bound=(0, 0))), Report)
