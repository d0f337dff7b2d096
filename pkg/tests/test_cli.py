"""Tests for the hlsim command line."""

import json

import pandas as pd
import pytest

import src.cli.main as cli
from src.constants import ATLAS_COLUMNS, EVOLVE_COLUMNS, SWEEP_COLUMNS, VALIDATION_COLUMNS
from src.core.exceptions import IntegrationFault

FAST = ["--steps-per-unit-time", "100"]


def run(argv):
    return cli.main([str(arg) for arg in argv])


def meta(path):
    return json.loads(path.with_name(f"{path.stem}.meta.json").read_text())


def test_evolve_writes_table_and_sidecar(tmp_path):
    out = tmp_path / "evolve.csv"
    assert run(["evolve", "--kind", "flat", "--q0", 1, "--T", 5, "--out", out, *FAST]) == 0
    frame = pd.read_csv(out)
    assert list(frame.columns) == EVOLVE_COLUMNS
    assert frame["P"].iloc[0] == pytest.approx(1.0, abs=1e-9)
    sidecar = meta(out)
    assert sidecar["version"] == cli.PACKAGE_VERSION
    assert sidecar["config"]["evolve"]["parameters"] == {"q0": 1.0, "T": 5.0}
    assert sidecar["summary"]["kind"] == "flat"


def test_evolve_history_and_gaps(tmp_path):
    history, gaps = tmp_path / "history.csv", tmp_path / "gaps.csv"
    code = run(["evolve", "--kind", "hopping", "--T1", 1, "--T2", 2, "--history", history,
                "--gaps", gaps, "--out", tmp_path / "run.csv", *FAST])
    assert code == 0
    assert pd.read_csv(history)["t"].iloc[-1] == pytest.approx(4.0)
    assert len(pd.read_csv(gaps)) == 1001


def test_identical_runs_give_identical_files(tmp_path):
    outputs = [tmp_path / "first.csv", tmp_path / "second.csv"]
    for out in outputs:
        assert run(["evolve", "--kind", "tilted", "--q0", 0.5, "--T", 5, "--out", out, *FAST]) == 0
    assert outputs[0].read_bytes() == outputs[1].read_bytes()


def test_json_output_mirrors_columns(tmp_path):
    out = tmp_path / "sweep.json"
    code = run(["sweep", "--kind", "all", "--q0", 1, "--T", 5, "--format", "json",
                "--out", out, *FAST])
    assert code == 0
    records = json.loads(out.read_text())
    assert [record["kind"] for record in records] == ["tilted", "flat", "hopping"]
    assert all(list(record) == SWEEP_COLUMNS for record in records)


def test_sweep_grid(tmp_path):
    out = tmp_path / "sweep.csv"
    code = run(["sweep", "--kind", "flat", "--q0-grid", "0:1:3", "--chi", "-1", "--T", 5,
                "--out", out, *FAST])
    assert code == 0
    frame = pd.read_csv(out)
    assert frame["q0"].tolist() == [0.0, 0.5, 1.0]
    assert (frame["chi"] == -1).all()
    assert meta(out)["summary"]["errors"] == 0


def test_sweep_other_parameter(tmp_path):
    out = tmp_path / "sweep.csv"
    code = run(["sweep", "--kind", "hopping", "--param", "alpha_ii", "--grid", "5:10:2",
                "--q0", 1, "--T", 5, "--out", out, *FAST])
    assert code == 0
    assert pd.read_csv(out)["alpha_ii"].tolist() == [5.0, 10.0]


def test_ep_map_empty_grid(tmp_path):
    out = tmp_path / "atlas.csv"
    code = run(["ep-map", "--samples", 0, "--alpha-grid", "1:1:0", "--out", out])
    assert code == 0
    assert list(pd.read_csv(out).columns) == ATLAS_COLUMNS
    assert pd.read_csv(out).empty
    summary = meta(out)["summary"]
    assert summary["rows"] == 0 and summary["counts"] == {}


def test_ep_map_fourth_order(tmp_path):
    out = tmp_path / "atlas.csv"
    assert run(["ep-map", "--target", 4, "--samples", 3, "--out", out]) == 0
    frame = pd.read_csv(out)
    numeric = frame[frame["branch"].str.startswith("numeric:")]
    assert len(numeric) == 1
    assert numeric["order"].iloc[0] == 4
    assert meta(out)["summary"]["max_deviation"] < 1e-4


def test_validate_writes_report(tmp_path):
    out = tmp_path / "validate.csv"
    code = run(["validate", "--suite", "liouvillian", "--samples", 20, "--out", out])
    assert code == 0
    assert list(pd.read_csv(out).columns) == VALIDATION_COLUMNS


def test_validation_failure_exit_code(tmp_path, monkeypatch):
    report = cli.run_validation_suite
    monkeypatch.setattr(
        cli, "run_validation_suite",
        lambda config, **options: report(config, builder=lambda p: p.gamma * 0, **options),
    )
    code = run(["validate", "--suite", "liouvillian", "--samples", 5,
                "--out", tmp_path / "v.csv"])
    assert code == 3


@pytest.mark.parametrize(
    "argv, fragments",
    [
        (["evolve", "--chi", "2"], ["chi", "{+1, -1}"]),
        (["evolve", "--q0", "1.5"], ["q0", "[0, 1]"]),
        (["sweep", "--q0-grid", "0:1.5:3"], ["q0", "[0, 1]"]),
        (["evolve", "--steps-per-unit-time", "10"], ["steps_per_unit_time", "10"]),
        (["evolve", "--kind", "spiral"], ["--kind", "spiral"]),
        (["sweep", "--param", "T"], ["--grid"]),
        (["ep-map", "--q-grid", "0:2:3"], ["q grid", "[0, 1]"]),
        ([], ["command"]),
    ],
)
def test_usage_errors(argv, fragments, capsys, output_dir):
    assert cli.main(argv) == 1
    message = capsys.readouterr().err
    for fragment in fragments:
        assert fragment in message


def test_missing_config_file(tmp_path, capsys):
    assert cli.main(["evolve", "--config", str(tmp_path / "missing.yaml")]) == 1
    assert "cannot read config" in capsys.readouterr().err


def test_config_file_with_flag_override(tmp_path):
    config = tmp_path / "run.yaml"
    config.write_text(
        "command: evolve\n"
        "steps_per_unit_time: 100\n"
        "evolve:\n"
        "  kind: flat\n"
        "  parameters: {q0: 0.0, T: 5.0}\n"
    )
    out = tmp_path / "out.csv"
    assert run(["evolve", "--config", config, "--q0", 1, "--out", out]) == 0
    row = pd.read_csv(out).iloc[0]
    assert row["q0"] == 1.0 and row["T"] == 5.0


def test_numerical_fault_exit_code(tmp_path, monkeypatch, capsys):
    def broken(*args, **kwargs):
        raise IntegrationFault("trace exceeded 1", {"t": 2.0})

    monkeypatch.setattr(cli, "integrate", broken)
    assert run(["evolve", "--out", tmp_path / "e.csv", *FAST]) == 2
    assert "trace exceeded 1" in capsys.readouterr().err


def test_help_exits_cleanly(capsys):
    assert cli.main(["--help"]) == 0
    assert "ep-map" in capsys.readouterr().out


def test_unknown_log_level(capsys):
    assert cli.main(["validate", "--log-level", "LOUD"]) == 1
    assert "LOUD" in capsys.readouterr().err
