import csv
import io
import json

import pytest

from weinstein_tube.bounds import certificate
from weinstein_tube.errors import InputError
from weinstein_tube.formatters import (
    FORMATTERS,
    CSVFormatter,
    JSONFormatter,
    TextFormatter,
    emit_report,
    get_formatter,
)
from weinstein_tube.formatters.csv_formatter import CHECK_COLUMNS, FLOW_COLUMNS
from weinstein_tube.models import CheckReport, FlowSample, MoserReport, SuiteReport


@pytest.fixture
def report() -> SuiteReport:
    checks = [
        CheckReport(check_id="pushforward-bound", anchor="pushforward-growth",
                    n_samples=10, worst_margin=0.25, worst_lhs=1.0, worst_rhs=1.25,
                    verdict="pass", seed=7),
        CheckReport(check_id="exp-derivative-constants",
                    anchor="exp-derivative-constants", verdict="hypothesis-not-met",
                    hypothesis="D0(r) <= Cbar0"),
        CheckReport(check_id="energy-bound", anchor="energy-growth", n_samples=3,
                    worst_margin=-0.5, worst_lhs=2.0, worst_rhs=1.5, verdict="fail",
                    failing_sample={"s": 0.5}),
    ]
    certs = [certificate("radius_1396", "min-expression/1396", 1 / 1396, {"A0": 1.0},
                         assumptions=["rK1(r) <= e"])]
    return SuiteReport(scene="unit", seed=7, radius=0.2, checks=checks,
                       certificates=certs)


@pytest.fixture
def moser_report() -> MoserReport:
    sample = FlowSample(x=[0.5], xi=[0.1], endpoint_x=[0.5], endpoint_xi=[0.105572],
                        method="rk4", steps=100, stayed_inside=True, residual=1e-9)
    return MoserReport(scene="unit", radius=0.2, start_radius=0.1, alpha_practical=0.5,
                       samples=[sample], max_residual=1e-9)


def test_registry():
    assert set(FORMATTERS) == {"json", "csv", "text"}
    assert isinstance(get_formatter("csv"), CSVFormatter)
    with pytest.raises(InputError, match="unsupported format"):
        get_formatter("xml")


def test_json_keeps_model_fields(report):
    data = json.loads(JSONFormatter().format(report))
    assert list(data) == ["scene", "seed", "radius", "checks", "certificates"]
    verdicts = [c["verdict"] for c in data["checks"]]
    assert verdicts == ["pass", "hypothesis-not-met", "fail"]
    assert data["certificates"][0]["display"] == "0.000716332"
    assert SuiteReport.model_validate(data) == report


def test_csv_has_one_row_per_check(report):
    rows = list(csv.reader(io.StringIO(CSVFormatter().format(report))))
    assert tuple(rows[0]) == CHECK_COLUMNS
    assert len(rows) == 4
    first = dict(zip(rows[0], rows[1]))
    assert first["worst_margin"] == "0.25"
    assert first["hypothesis"] == ""
    assert dict(zip(rows[0], rows[2]))["hypothesis"] == "D0(r) <= Cbar0"


def test_text_summary(report):
    text = TextFormatter().format(report)
    assert "radius_1396" in text
    assert "[PASS] pushforward-bound <pushforward-growth>" in text
    assert "hypothesis 'D0(r) <= Cbar0' does not hold" in text
    assert "worst sample: s=0.5" in text
    assert text.endswith("3 checks, 1 failed\n")


def test_empty_report():
    empty = SuiteReport()
    assert "no checks" in TextFormatter().format(empty)
    assert CSVFormatter().format(empty) == ",".join(CHECK_COLUMNS) + "\n"
    assert json.loads(JSONFormatter().format(empty))["checks"] == []


def test_moser_formats(moser_report):
    rows = list(csv.reader(io.StringIO(CSVFormatter().format_moser(moser_report))))
    assert tuple(rows[0]) == FLOW_COLUMNS
    row = dict(zip(rows[0], rows[1]))
    assert row["endpoint_xi"] == "0.105572"
    assert row["method_gap"] == ""
    text = TextFormatter().format_moser(moser_report)
    assert "starts: 1  all inside: True" in text
    encoded = JSONFormatter().format_moser(moser_report)
    assert MoserReport.model_validate_json(encoded) == moser_report


def test_emit_report(report):
    payload = emit_report(report.checks)
    assert isinstance(payload, bytes)
    assert len(json.loads(payload.decode("utf-8"))["checks"]) == 3
    assert emit_report(report, "text").decode("utf-8").startswith("scene: unit")
