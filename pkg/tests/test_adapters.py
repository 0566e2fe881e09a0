from __future__ import annotations

import json

import pytest

from src.adapters.state.json_snapshot import JSONSnapshotStore
from src.adapters.telemetry.jsonl_sink import JSONLSink
from src.adapters.telemetry.null_sink import NullSink
from src.adapters.telemetry.print_sink import PrintSink
from src.adapters.traces.jsonl_trace_store import JSONLTraceStore
from src.core.errors import StateCorruption, TraceOrderError
from src.core.types import TelemetryEvent
from src.workloads.generators import example_trace, gen_uniform
from tests.conftest import REPO_ROOT


def _event(level="info", stage="routed"):
    return TelemetryEvent(timestamp="", run_id="r", t=1, stage=stage, level=level, payload={"hops": 2})


def test_trace_store_round_trip(tmp_path):
    store = JSONLTraceStore(tmp_path / "traces" / "u.jsonl")
    trace = gen_uniform(8, 25, seed=5)
    store.write(trace)
    assert list(store) == trace


def test_shipped_trace_matches_the_generator():
    assert list(JSONLTraceStore(REPO_ROOT / "data" / "example_trace.jsonl")) == example_trace()


@pytest.mark.parametrize(
    "lines",
    [
        ['{"t": 2, "u": 0, "v": 1}', '{"t": 2, "u": 1, "v": 2}'],
        ['{"t": 1, "u": 3, "v": 3}'],
        ['{"t": 1, "u": 0}'],
        ["not json"],
    ],
)
def test_trace_store_rejects_bad_lines(tmp_path, lines):
    path = tmp_path / "bad.jsonl"
    path.write_text("\n".join(lines) + "\n")
    with pytest.raises(TraceOrderError):
        list(JSONLTraceStore(path))


def test_snapshot_store(tmp_path):
    store = JSONSnapshotStore(tmp_path / "s.json")
    store.export({"dimension": 2, "placement": [0, 1, 2, 3]})
    assert store.load()["placement"] == [0, 1, 2, 3]
    (tmp_path / "s.json").write_text("{oops")
    with pytest.raises(StateCorruption):
        store.load()


def test_jsonl_sink_stamps_events(tmp_path):
    sink = JSONLSink(tmp_path / "events.jsonl")
    sink.record(_event())
    sink.record(_event(stage="audited"))
    events = [json.loads(line) for line in (tmp_path / "events.jsonl").read_text().splitlines()]
    assert [e["stage"] for e in events] == ["routed", "audited"]
    assert all(e["timestamp"] for e in events)


def test_print_sink_filters_by_level(capsys):
    sink = PrintSink(min_level="warn")
    sink.record(_event("info"))
    assert capsys.readouterr().out == ""
    sink.record(_event("error"))
    out = capsys.readouterr().out
    assert "'stage': 'routed'" in out and "timestamp" not in out


def test_null_sink_accepts_anything():
    assert NullSink().record(_event()) is None
