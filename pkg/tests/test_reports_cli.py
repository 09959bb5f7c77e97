"""Report documents, serialization determinism and the CLI surface."""

import json

import pytest

from omlab import cli
from omlab.reports import (
    CheckResult,
    ReportDocument,
    ReportError,
    RunConfig,
    emit,
    report_from_json,
    validate_report,
)


def small_report(passed=True):
    config = RunConfig(command="verify toy-born", seed=3)
    checks = (CheckResult("demo", "1", "1" if passed else "0", "TRIVIAL", passed),)
    return ReportDocument(config, checks, wall_clock_s=0.01)


# ------------------------------------------------------------- documents

def test_config_validation():
    with pytest.raises(ReportError):
        RunConfig(command="x", number_mode="decimal")
    with pytest.raises(ReportError):
        RunConfig(command="x", tolerance=0.0)


def test_check_provenance_validation():
    with pytest.raises(ReportError):
        CheckResult("n", "1", "1", "GUESSED", True)


def test_empty_report_is_schema_valid():
    config = RunConfig(command="verify toy-born")
    doc = ReportDocument(config, (), 0.0).to_json()
    validate_report(doc)
    assert doc["checks"] == []


def test_json_round_trip():
    report = small_report()
    text = emit(report, "json")
    back = report_from_json(json.loads(text))
    assert back.config == report.config
    assert back.checks == report.checks
    assert back.all_passed


def test_text_format_mentions_every_check():
    text = emit(small_report(), "text")
    assert "PASS" in text and "demo" in text and "1/1 checks" in text


def test_unknown_format_rejected():
    with pytest.raises(ReportError):
        emit(small_report(), "yaml")


# ------------------------------------------------------------- determinism

def _strip_clock(doc: dict) -> dict:
    doc = dict(doc)
    doc.pop("wall_clock_s")
    return doc


def test_replay_determinism_byte_identical_minus_clock():
    config = RunConfig(command="verify noncomm", seed=11)
    a = cli.run(config).to_json()
    b = cli.run(config).to_json()
    assert json.dumps(_strip_clock(a), sort_keys=True) == \
        json.dumps(_strip_clock(b), sort_keys=True)


def test_different_seeds_still_pass_but_may_differ():
    a = cli.run(RunConfig(command="verify noncomm", seed=1)).to_json()
    b = cli.run(RunConfig(command="verify noncomm", seed=2)).to_json()
    assert all(c["passed"] for c in a["checks"])
    assert all(c["passed"] for c in b["checks"])


# ------------------------------------------------------------- dispatch

def test_every_report_check_carries_a_provenance_tag():
    for command in ("verify toy-born", "verify combine-table", "nogo chsh"):
        report = cli.run(RunConfig(command=command))
        assert report.checks
        for c in report.checks:
            assert c.provenance in ("PAPER", "DERIVED", "TRIVIAL")
        validate_report(report.to_json())


def test_unknown_verb_is_captured_as_failed_check():
    report = cli.run(RunConfig(command="explode now"))
    assert not report.all_passed
    assert "ValueError" in report.checks[0].observed


def test_module_error_is_captured():
    report = cli.run(RunConfig(command="nogo pbr", args={"q": "7/2"}))
    assert not report.all_passed


# ------------------------------------------------------------- main()

def test_main_exit_zero_and_writes_output(tmp_path, capsys):
    out = tmp_path / "report.json"
    code = cli.main(["verify", "steering", "--format", "json",
                     "--output", str(out)])
    assert code == 0
    doc = json.loads(out.read_text())
    validate_report(doc)
    assert all(c["passed"] for c in doc["checks"])
    assert "steering" in capsys.readouterr().out


def test_main_env_output_dir(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv("OMLAB_OUTPUT_DIR", str(tmp_path))
    code = cli.main(["verify", "no-signaling"])
    assert code == 0
    capsys.readouterr()
    assert (tmp_path / "verify-no-signaling.text").exists()


def test_main_mz_both_models(capsys):
    code = cli.main(["simulate", "mz", "--phase", "pi", "--model", "both",
                     "--format", "json"])
    assert code == 0
    doc = json.loads(capsys.readouterr().out)
    names = [c["name"] for c in doc["checks"]]
    assert any("correspondence" in n for n in names)


def test_main_seed_after_subcommand(capsys):
    assert cli.main(["verify", "noncomm", "--seed", "9"]) == 0
    capsys.readouterr()


def test_verify_all_runs_every_target(capsys):
    assert cli.main(["verify", "all", "--format", "json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    names = " ".join(c["name"] for c in doc["checks"])
    for word in ("toy-born", "noncomm", "combine", "steering", "no-signaling"):
        assert word in names


def test_expected_infeasible_is_a_pass(capsys):
    # the constraint search reports infeasible, and that is the success case
    code = cli.main(["nogo", "pbr", "--q", "1/4", "--format", "json"])
    assert code == 0
    doc = json.loads(capsys.readouterr().out)
    verdict = next(c for c in doc["checks"] if c["name"].startswith("pbr verdict"))
    assert verdict["observed"] == "infeasible" and verdict["passed"]


def test_mz_float_theta_check(capsys):
    code = cli.main(["simulate", "mz", "--phase", "0", "--theta", "0.7",
                     "--format", "json"])
    assert code == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["config"]["number_mode"] == "float"
    assert any("float-mode" in c["name"] for c in doc["checks"])


def test_exit_status_reflects_failures(monkeypatch, capsys):
    # square an impossible expectation through the dispatcher
    monkeypatch.setitem(cli.VERIFY_TARGETS, "toy-born",
                        lambda cfg: [CheckResult("forced", "1", "0",
                                                 "TRIVIAL", False)])
    assert cli.main(["verify", "toy-born"]) == 1
    capsys.readouterr()
