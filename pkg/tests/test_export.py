"""Tests for report schemas and the CSV/JSON exporters."""

import json

import pytest

from supergeo.errors import ConfigurationError
from supergeo.export import green_grid_report, green_grid_rows, identity_report, render, render_csv
from supergeo.green import IdentityKind, ThetaContext, manin_identity, sample_grid, sphere_green
from supergeo.schemas import CheckResult, CheckStatus, CoefficientView, SuiteReport, canonical_json


class TestCheckResult:
    @pytest.mark.parametrize("value, report_only, status", [
        (1e-13, False, CheckStatus.PASS),
        (1e-13, True, CheckStatus.PASS),
        (1e-3, False, CheckStatus.FAIL),
        (1e-3, True, CheckStatus.PAPER_DISCREPANCY),
    ])
    def test_status(self, value, report_only, status):
        assert CheckResult.evaluate("x", value, 1e-12, report_only).status is status

    def test_tolerance_is_strict(self):
        assert CheckResult.evaluate("x", 1e-6, 1e-6).status is CheckStatus.FAIL

    def test_report_ok_ignores_discrepancies(self):
        report = SuiteReport(suite="s", seed=1, checks=[
            CheckResult.evaluate("a", 0.0, 1e-9),
            CheckResult.evaluate("b", 1.0, 1e-9, report_only=True),
        ])
        assert report.ok
        assert report.check("b").status is CheckStatus.PAPER_DISCREPANCY


class TestCanonicalJson:
    def test_sorted_and_indented(self):
        text = canonical_json(CheckResult.evaluate("x", 0.5, 1.0, notes="n"))
        data = json.loads(text)
        assert list(data) == sorted(data)
        assert data["status"] == "pass"
        assert text.splitlines()[1].startswith("  ")

    def test_floats_use_seventeen_digits(self):
        text = canonical_json(CheckResult.evaluate("x", 0.5, 0.1))
        assert '"tolerance": 0.10000000000000001' in text
        assert '"max_residual": 0.5' in text
        assert json.loads(text)["tolerance"] == 0.1

    def test_empty_containers_and_nulls(self):
        text = canonical_json(SuiteReport(suite="s", seed=3, checks=[]))
        assert '"checks": []' in text
        assert '"wall_time": null' in text
        assert text.endswith("}")

    def test_coefficient_view(self, algebra, th):
        view = CoefficientView.of(th[0] * 2j + 1)
        assert view.root == {"0": [1.0, 0.0], "1": [0.0, 2.0]}


class TestExport:
    def test_green_grid_csv(self, algebra):
        samples = sample_grid([0.5, 1j], algebra.zero(), sphere_green)
        text = render(green_grid_report(samples, algebra.zero(), "sphere11"), green_grid_rows(samples), "csv")
        lines = text.splitlines()
        assert lines[0] == "z.re,z.im,G.c0.re,G.c0.im"
        assert len(lines) == 3

    def test_identity_json(self, algebra, th):
        ctx = ThetaContext.create(algebra.scalar(1j))
        result = manin_identity(IdentityKind.TORUS, algebra.scalar(0.3 + 0.2j), th[0] * 1j + th[1], ctx)
        data = json.loads(render(identity_report(result), None, "json"))
        assert data["kind"] == "torus"
        assert [t["name"] for t in data["per_term"]] == list(result.per_term)
        assert data["residual"] == pytest.approx(result.residual)

    def test_identity_has_no_csv(self, algebra):
        result = manin_identity(IdentityKind.SPHERE_DQ, algebra.scalar(0.5 + 0.5j), algebra.zero())
        with pytest.raises(ConfigurationError):
            render(identity_report(result), None, "csv")

    def test_unknown_format(self, algebra):
        with pytest.raises(ConfigurationError):
            render(CheckResult.evaluate("x", 0.0, 1.0), [], "xml")

    def test_empty_rows(self):
        assert render_csv([]) == ""
