from __future__ import annotations

import json

from src.adapters.metrics.csv_metrics_writer import COLUMNS
from src.cli.main import build_parser, main


def _no_config(tmp_path):
    return ["--config", str(tmp_path / "absent.yaml")]


def test_appendix_markdown(capsys):
    assert main(["appendix", "--dim", "8", "--level", "2", "--steps", "3"]) == 0
    out = capsys.readouterr().out
    assert "| t4 | 3.50 |" in out
    assert "| t6 | 3.88 |" in out


def test_appendix_json(capsys):
    assert main(["appendix", "--level", "3", "--steps", "2", "--format", "json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert [r["expected_tilde"] for r in doc["rows"]] == [0.11, 0.38]
    assert "h5" in doc["hypothesis_constants"]


def test_appendix_bad_steps_exit_two(capsys):
    assert main(["appendix", "--steps", "12"]) == 2
    assert "ConfigError" in capsys.readouterr().err


def test_run_then_check_state_then_report(tmp_path, capsys):
    out = tmp_path / "run.csv"
    snap = tmp_path / "state.json"
    code = main(
        _no_config(tmp_path)
        + ["run", "--dim", "3", "--m", "20", "--seed", "2", "--out", str(out), "--snapshot", str(snap),
           "--plans", str(tmp_path / "plans.jsonl"), "--telemetry", str(tmp_path / "events.jsonl")]
    )
    summary = json.loads(capsys.readouterr().out)
    assert code == 0
    assert summary["requests"] == 20
    assert out.read_text().splitlines()[0] == ",".join(COLUMNS)
    assert (tmp_path / "events.jsonl").read_text().count("run_completed") == 1

    assert main(["check-state", str(snap)]) == 0
    assert "0 problem(s)" in capsys.readouterr().out

    assert main(["report", str(tmp_path / "run.summary.json"), "--format", "csv"]) == 0
    assert capsys.readouterr().out.splitlines()[1].startswith("dyhypes-N3-uniform-s2,20,")


def test_single_server_run_with_alias(tmp_path, capsys):
    code = main(_no_config(tmp_path) + ["run", "--algo", "ss", "--dim", "4", "--server", "5", "--m", "15"])
    assert code == 0
    assert json.loads(capsys.readouterr().out)["run_id"].startswith("dyhypes_s-N4")


def test_replaying_a_trace_file(tmp_path, capsys):
    trace = tmp_path / "t.jsonl"
    trace.write_text('{"t": 1, "u": 0, "v": 1}\n{"t": 2, "u": 0, "v": 6}\n')
    assert main(_no_config(tmp_path) + ["run", "--dim", "3", "--trace", str(trace)]) == 0
    assert json.loads(capsys.readouterr().out)["requests"] == 2


def test_malformed_trace_exits_two(tmp_path, capsys):
    trace = tmp_path / "t.jsonl"
    trace.write_text('{"t": 2, "u": 0, "v": 1}\n{"t": 1, "u": 0, "v": 6}\n')
    assert main(_no_config(tmp_path) + ["run", "--dim", "3", "--trace", str(trace)]) == 2
    assert "TraceOrderError" in capsys.readouterr().err


def test_check_state_on_a_broken_placement(tmp_path, capsys):
    snap = tmp_path / "bad.json"
    snap.write_text(json.dumps({"dimension": 1, "placement": [0, 0], "server": 0}))
    assert main(["check-state", str(snap)]) == 2


def test_verify_unknown_claim_exits_two(tmp_path, capsys):
    assert main(_no_config(tmp_path) + ["verify", "nonsense", "--seeds", "1", "--m", "5"]) == 2


def test_verify_writes_the_full_report(tmp_path, capsys):
    report = tmp_path / "ss.json"
    code = main(
        _no_config(tmp_path)
        + ["verify", "ss_thm", "--dim", "3", "--seeds", "2", "--m", "20", "--workloads", "uniform", "--out", str(report)]
    )
    assert code in (0, 1)
    doc = json.loads(report.read_text())
    assert doc["name"] == "ss_thm" and len(doc["cells"]) == 2


def test_parser_requires_a_command():
    parser = build_parser()
    assert parser.parse_args(["appendix"]).command == "appendix"
