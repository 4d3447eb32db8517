import json

import numpy as np
import pytest
from click.testing import CliRunner

from weinstein_tube.cli import cli

SMALL_SAMPLING = {"seed": 7, "points": 6, "pairs": 200, "flow_starts": 2,
                  "heavy_points": 2, "lipschitz_samples": 2}


@pytest.fixture
def runner() -> CliRunner:
    return CliRunner()


@pytest.fixture
def config_path(tmp_path):
    path = tmp_path / "circle.json"
    path.write_text(json.dumps({
        "name": "unit-circle",
        "lagrangian": {"kind": "circle", "radius": 1.0},
        "sampling": SMALL_SAMPLING,
        "radius": 0.2,
    }), encoding="utf-8")
    return path


def test_list_checks(runner):
    result = runner.invoke(cli, ["verify", "--list"])
    assert result.exit_code == 0
    assert "numeric-regressions" in result.output
    assert "printed-constants" in result.output


def test_config_is_required(runner):
    for command in ("verify", "bounds", "moser"):
        result = runner.invoke(cli, [command])
        assert result.exit_code == 2
        assert "--config is required" in result.output


def test_bounds_text(runner, config_path):
    result = runner.invoke(cli, ["bounds", "-c", str(config_path)])
    assert result.exit_code == 0
    assert "scene: unit-circle" in result.output
    assert "radius_1396" in result.output
    assert "r_emb" in result.output
    assert "practical_radius" in result.output
    assert "not certified" in result.output


def test_bounds_json_file(runner, config_path, tmp_path):
    out = tmp_path / "certs.json"
    args = ["-q", "bounds", "-c", str(config_path), "--printed-alpha", "-f", "json",
            "-o", str(out)]
    result = runner.invoke(cli, args)
    assert result.exit_code == 0
    data = json.loads(out.read_text(encoding="utf-8"))
    certs = {c["name"]: c for c in data["certificates"]}
    assert "alpha variant: printed-alpha" in certs["moser_subtube"]["notes"]
    again = runner.invoke(cli, args)
    assert again.exit_code == 2
    assert "--force" in again.output
    assert runner.invoke(cli, [*args, "--force"]).exit_code == 0


def test_verify_then_convert(runner, config_path, tmp_path):
    out = tmp_path / "report.json"
    result = runner.invoke(cli, [
        "-q", "verify", "-c", str(config_path),
        "--checks", "numeric-regressions, lagrangian-condition", "-o", str(out),
    ])
    assert result.exit_code == 0
    data = json.loads(out.read_text(encoding="utf-8"))
    assert [c["check_id"] for c in data["checks"]] == [
        "numeric-regressions", "lagrangian-condition"]
    assert data["radius"] == 0.2

    converted = runner.invoke(cli, ["report", "--in", str(out), "-f", "csv"])
    assert converted.exit_code == 0
    lines = converted.output.strip().splitlines()
    assert lines[0].startswith("check_id,anchor,verdict")
    assert len(lines) == 3


def test_verify_reports_errors(runner, config_path, tmp_path):
    unknown = runner.invoke(cli, ["-q", "verify", "-c", str(config_path),
                                  "--checks", "no-such-check"])
    assert unknown.exit_code == 1
    assert "Error:" in unknown.output

    bad_radius = runner.invoke(cli, ["verify", "-c", str(config_path), "-r", "0"])
    assert bad_radius.exit_code == 2

    broken = tmp_path / "broken.json"
    broken.write_text('{"lagrangian": ', encoding="utf-8")
    result = runner.invoke(cli, ["-q", "verify", "-c", str(broken)])
    assert result.exit_code == 1
    assert "invalid JSON" in result.output


def test_report_rejects_other_json(runner, tmp_path):
    other = tmp_path / "other.json"
    other.write_text('{"unrelated": true}', encoding="utf-8")
    result = runner.invoke(cli, ["report", "--in", str(other)])
    assert result.exit_code == 1
    assert "is not a suite or Moser report" in result.output


def test_report_rejects_undecodable_file(runner, tmp_path):
    garbled = tmp_path / "garbled.json"
    garbled.write_bytes(b'\xff\xfe{"scene": "x"}')
    result = runner.invoke(cli, ["report", "--in", str(garbled)])
    assert result.exit_code == 1
    assert "Error: cannot read" in result.output
    assert not isinstance(result.exception, UnicodeDecodeError)


def test_unexpected_errors_are_reported(runner, config_path, monkeypatch):
    def singular(*args, **kwargs):
        raise np.linalg.LinAlgError("Singular matrix")

    monkeypatch.setattr("weinstein_tube.cli.run_suite", singular)
    result = runner.invoke(cli, ["-q", "verify", "-c", str(config_path)])
    assert result.exit_code == 1
    assert "Error: LinAlgError: Singular matrix" in result.output
    assert isinstance(result.exception, SystemExit)


@pytest.mark.slow
def test_moser_command(runner, config_path, tmp_path):
    out = tmp_path / "moser.json"
    result = runner.invoke(cli, ["-q", "moser", "-c", str(config_path), "-n", "1",
                                 "--no-residual", "-f", "json", "-o", str(out)])
    assert result.exit_code == 0
    data = json.loads(out.read_text(encoding="utf-8"))
    assert data["all_inside"] is True
    assert len(data["samples"]) == 1
    assert data["samples"][0]["residual"] is None
    assert data["start_radius"] <= data["radius"] / 2
