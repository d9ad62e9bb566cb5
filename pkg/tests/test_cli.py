"""Tests for the command-line interface."""

import json

import pytest

from supergeo.cli import EXIT_OK, EXIT_USAGE, main, parse_coeffs, parse_tolerances
from supergeo.errors import ConfigurationError
from supergeo.models import CATALOG_IDS


class TestParsing:
    def test_coeffs_accumulate(self):
        coeffs = parse_coeffs(["Z=0:0.3+1j,Z=3:0.1", "Th=1:0.5"])
        assert coeffs["Z"].terms == {0: 0.3 + 1j, 3: 0.1}
        assert coeffs["Th"].is_odd()

    @pytest.mark.parametrize("text", ["Z=0.3", "Z=x:1", "=0:1", "Z=999:1"])
    def test_bad_coeffs(self, text):
        with pytest.raises(ConfigurationError):
            parse_coeffs([text])

    def test_tolerances(self):
        assert parse_tolerances(["inverse=1e-3"]) == {"inverse": 1e-3}
        with pytest.raises(ConfigurationError):
            parse_tolerances(["inverse"])


class TestCommands:
    def test_models(self, capsys):
        assert main(["models"]) == EXIT_OK
        assert capsys.readouterr().out.split() == list(CATALOG_IDS)

    def test_verify_writes_report(self, tmp_path):
        assert main(["verify", "--suite", "algebra", "--out", str(tmp_path)]) == EXIT_OK
        data = json.loads((tmp_path / "algebra.json").read_text())
        assert data["suite"] == "algebra"
        assert all(c["status"] == "pass" for c in data["checks"])

    def test_bad_tolerance_is_usage_error(self):
        assert main(["verify", "--suite", "algebra", "--tol", "nonsense"]) == EXIT_USAGE

    def test_unknown_suite_is_rejected_by_parser(self):
        with pytest.raises(SystemExit) as exc:
            main(["verify", "--suite", "topology"])
        assert exc.value.code == 2

    def test_identity_report(self, capsys):
        assert main(["emit", "identity-report", "--coeffs", "Th=1:0.2"]) == EXIT_OK
        data = json.loads(capsys.readouterr().out)
        assert data["kind"] == "torus"
        assert "d_nome" in [t["name"] for t in data["per_term"]]

    def test_green_grid_csv(self, capsys):
        assert main(["emit", "green-grid", "--points", "3"]) == EXIT_OK
        lines = capsys.readouterr().out.splitlines()
        assert lines[0] == "z.re,z.im,G.c0.re,G.c0.im"
        assert len(lines) == 9

    def test_short_trace(self, tmp_path):
        out = tmp_path / "trace.csv"
        assert main(["emit", "geodesic-trace", "--u-range", "0:0.05", "--step", "0.01", "--out", str(out)]) == EXIT_OK
        lines = out.read_text().splitlines()
        assert lines[0].startswith("u,Z.c0.re,Z.c0.im")
        assert len(lines) == 7

    def test_model_without_green_function(self):
        assert main(["emit", "green-grid", "--model", "ch11"]) == EXIT_USAGE
