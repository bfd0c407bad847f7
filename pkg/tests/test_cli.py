"""Tests for the defcoh command line."""

import json

import pytest

from src.cli import EXIT_FAIL, EXIT_INVALID, EXIT_IO, EXIT_OK, build_parser, main


def _stdout_json(capsys):
    return json.loads(capsys.readouterr().out)


class TestRun:
    def test_report_to_file(self, tmp_path):
        path = tmp_path / "chi.json"
        assert main(["run", "chi-table", "--bound", "1,1", "--out", str(path)]) == EXIT_OK
        data = json.loads(path.read_text(encoding="utf-8"))
        assert data["overall"] == "PASS"
        assert data["scenario"]["bound"] == [1, 1]
        assert [row["check_id"] for row in data["checks"]] == ["chi.table", "chi.total", "chi.window-cross-check"]

    def test_text_format(self, capsys):
        assert main(["run", "chi-table", "--bound", "1,1", "--format", "text"]) == EXIT_OK
        assert "OVERALL: PASS" in capsys.readouterr().out

    def test_timings_only_on_request(self, capsys):
        main(["run", "chi-table", "--bound", "0,0"])
        assert "wall_time_s" not in capsys.readouterr().out
        main(["run", "chi-table", "--bound", "0,0", "--timings"])
        assert "wall_time_s" in capsys.readouterr().out

    @pytest.mark.parametrize(
        "argv",
        [
            ["run", "qweyl-h2", "--q", "symbolic"],
            ["run", "qp-cohomology", "--q", "3"],
            ["run", "chi-table", "--bound", "1"],
            ["run", "star-assoc", "--window", "deg=3"],
        ],
    )
    def test_invalid_parameters(self, argv):
        assert main(argv) == EXIT_INVALID

    def test_unwritable_output(self, tmp_path):
        path = tmp_path / "missing" / "report.json"
        assert main(["run", "chi-table", "--bound", "0,0", "--out", str(path)]) == EXIT_IO

    def test_unknown_scenario(self):
        with pytest.raises(SystemExit):
            build_parser().parse_args(["run", "nonsense"])


class TestStar:
    def test_moyal_associative(self, capsys):
        assert main(["star", "--pairs", "(dx,dy)", "--order", "3", "--bound", "2"]) == EXIT_OK
        data = _stdout_json(capsys)
        assert data["passed"] is True
        assert data["failed_order"] is None
        assert data["checked"] == 729

    def test_commutator(self, capsys):
        assert main(["star", "--pairs", "(dx,dy)", "--check", "commutator"]) == EXIT_OK
        data = _stdout_json(capsys)
        assert data["x*y - y*x"] == "h"

    def test_bad_pairs(self):
        assert main(["star", "--pairs", "(dx)"]) == EXIT_INVALID

    def test_noncommuting_pairs_fail(self):
        assert main(["star", "--pairs", "(dx,x*dy)", "--order", "2"]) == EXIT_FAIL


class TestCohomology:
    @pytest.mark.parametrize("arity, dim", [(0, 1), (1, 2), (2, 1)])
    def test_polynomial_ring(self, capsys, arity, dim):
        assert main(["cohomology", "--arity", str(arity), "--bidegree", "0,0"]) == EXIT_OK
        row = _stdout_json(capsys)
        assert row["dim"] == dim
        assert row["algebra"] == "poly"

    @pytest.mark.parametrize("bidegree, dim", [("3,3", 1), ("1,0", 0), ("3,0", 1)])
    def test_quantum_plane_center(self, capsys, bidegree, dim):
        argv = ["cohomology", "--algebra", "qp", "--q", "zeta:3", "--arity", "0", "--bidegree", bidegree]
        assert main(argv) == EXIT_OK
        row = _stdout_json(capsys)
        assert row["dim"] == dim
        assert row["window"] == "graded"

    def test_bad_bidegree(self):
        assert main(["cohomology", "--arity", "1", "--bidegree", "1"]) == EXIT_INVALID


class TestEPFuzz:
    def test_rows(self, capsys):
        assert main(["ep-fuzz", "--count", "3", "--seed", "11"]) == EXIT_OK
        data = _stdout_json(capsys)
        assert data["passed"] is True
        assert [row["seed"] for row in data["rows"]] == [11, 12, 13]
        assert data["parameters"]["count"] == 3

    def test_same_seed_same_bytes(self, capsys):
        main(["ep-fuzz", "--count", "2", "--seed", "4"])
        first = capsys.readouterr().out
        main(["ep-fuzz", "--count", "2", "--seed", "4"])
        assert capsys.readouterr().out == first
