from __future__ import annotations

import json

import pytest

from src.adapters.metrics.csv_metrics_writer import CSVMetricsWriter, read_metrics
from src.adapters.plans.jsonl_plan_sink import JSONLPlanSink, read_plans
from src.adapters.telemetry.null_sink import NullSink
from src.core.errors import ConfigError
from src.core.types import RequestMetrics, TraceRecord
from src.engine.dyhypes import DyHypesServer
from src.sim.audit import audit_messages, payload_bits
from src.sim.runner import SimulationRunner, build_server, build_trace, run, run_id_for


def test_one_adjacent_request_costs_one(make_config, recording):
    config = make_config(workload={"kind": "repeating", "pattern": [[0, 1]], "repeats": 1})
    outcome = run(config, recording)
    (row,) = outcome.rows
    assert (row["hops"], row["rounds"], row["cost"], row["log_ws"]) == (1, 0, 1, 1)
    assert outcome.summary["total_cost"] == 1
    assert outcome.summary["ratio"] == 0.5


def test_runs_are_deterministic(make_config):
    config = make_config(m=40, seed=11)
    first = run(config, NullSink())
    second = run(config, NullSink())
    assert first.rows == second.rows
    assert first.summary == second.summary


def test_telemetry_follows_the_request_lifecycle(make_config, recording):
    outcome = run(make_config(m=5), recording)
    stages = recording.stages()
    assert stages[0] == "run_started" and stages[-1] == "run_completed"
    assert stages.count("request_received") == 5
    assert stages.count("request_completed") == 5
    assert stages.count("phase_applied") == sum(len(r["phases"]) for r in outcome.rows)
    assert all(e["run_id"] == run_id_for(outcome.summary["config"]) for e in recording.events)


def test_invalid_requests_are_rejected_and_the_run_continues(make_config, recording):
    config = make_config()
    server = DyHypesServer(3)
    trace = [TraceRecord(t=1, u=0, v=0), TraceRecord(t=2, u=0, v=1)]
    outcome = SimulationRunner(config, server, recording).run(trace)
    assert outcome.summary["rejected"] == 1
    assert outcome.summary["requests"] == 1
    assert recording.by_stage("request_rejected")[0]["level"] == "warn"


def test_single_server_runs_keep_the_server_in_every_request(make_config):
    config = make_config(algorithm="dyhypes_s", server=3, m=30)
    outcome = run(config, NullSink())
    assert all(r["u"] == 3 for r in outcome.rows)
    assert all(r["invariant_ok"] for r in outcome.rows)
    assert outcome.summary["state_bits_per_node"] == 0


def test_adversarial_workload_runs_against_the_live_server(make_config):
    outcome = run(make_config(workload={"kind": "adversarial", "c": 1.0}, m=10), NullSink())
    assert outcome.summary["requests"] == 10
    assert all(r["hops"] >= 2 for r in outcome.rows[:1])


def test_trace_workload_needs_a_source(make_config):
    config = make_config(workload={"kind": "trace", "path": "x.jsonl"})
    with pytest.raises(ConfigError):
        build_trace(config, build_server(config))


def test_sampled_fractions_are_shares(make_config):
    for algorithm in ("dyhypes", "dyhypes_s"):
        outcome = run(make_config(algorithm=algorithm, m=40, sample_every=1), NullSink())
        for values in outcome.summary["samples"].values():
            assert all(0.0 <= x <= 1.0 for x in values)


def test_metrics_and_plans_are_written(make_config, tmp_path):
    metrics = CSVMetricsWriter(tmp_path / "run.csv")
    plans = JSONLPlanSink(tmp_path / "plans.jsonl")
    outcome = run(make_config(m=15), NullSink(), metrics, plans)
    rows = read_metrics(tmp_path / "run.csv")
    assert [r["cost"] for r in rows] == [r["cost"] for r in outcome.rows]
    summary = json.loads((tmp_path / "run.summary.json").read_text())
    assert summary["requests"] == 15
    dumped = read_plans(tmp_path / "plans.jsonl")
    assert len(dumped) == sum(len(r["phases"]) for r in outcome.rows)


def test_audit_flags_overload_and_wide_payloads():
    records = [
        {"round": 1, "src": 0, "dst": 1, "fields": {}},
        {"round": 1, "src": 1, "dst": 0, "fields": {}},
        {"round": 3, "src": 2, "dst": 3, "fields": {"x": 2**20}},
    ]
    found = audit_messages(records, 3, c=4.0)
    assert [v["kind"] for v in found] == ["payload_size", "link_overload"]
    assert found[1]["link"] == [0, 1]
    assert payload_bits({"a": 0, "b": 7}) == 4


def test_multi_hop_sends_occupy_consecutive_rounds():
    records = [
        {"round": 1, "src": 0, "dst": 3, "fields": {}},
        {"round": 2, "src": 2, "dst": 3, "fields": {}},
    ]
    (violation,) = audit_messages(records, 2)
    assert (violation["round"], violation["link"]) == (2, [2, 3])


@pytest.mark.slow
def test_medium_run_is_clean(make_config):
    outcome = run(make_config(dimension=5, m=400, seed=2), NullSink())
    assert outcome.summary["invariant_failures"] == 0
    assert outcome.summary["audit_violations"] == 0


class _ReportsEveryCheck:
    """Serves every request in one hop and fails whichever checks it is asked for."""

    name = "dyhypes"

    def __init__(self) -> None:
        self.asked: list[set[str]] = []

    def serve(self, t: int, u: int, v: int) -> RequestMetrics:
        return RequestMetrics(
            t=t, u=u, v=v, hops=1, rounds=0, messages=0, ws=2, log_ws=1, cost=1,
            invariant_ok=True, alpha=2, phases=[], k_order=None, released_pairs=0,
        )

    def check_invariants(self, checks=None) -> list[str]:
        self.asked.append(set(checks))
        return [f"{name} broken" for name in sorted(checks)]


@pytest.mark.parametrize("check", ["bijection", "invariant_I", "contiguity", "timestamps"])
def test_each_structural_check_runs_on_its_own(make_config, recording, check):
    server = _ReportsEveryCheck()
    config = make_config(checks=[check, "adjacency"])
    outcome = SimulationRunner(config, server, recording).run([TraceRecord(t=1, u=0, v=1)])
    assert server.asked == [{check}]
    assert outcome.summary["invariant_failures"] == 1
    assert recording.by_stage("audited")[0]["payload"]["invariants"] == [f"{check} broken"]


def test_adjacency_alone_skips_the_structural_checks(make_config, recording):
    server = _ReportsEveryCheck()
    outcome = SimulationRunner(make_config(checks=["adjacency"]), server, recording).run([TraceRecord(t=1, u=0, v=1)])
    assert server.asked == []
    assert outcome.summary["invariant_failures"] == 0


def test_built_servers_only_run_the_configured_checks(make_config):
    server = build_server(make_config(checks=["contiguity", "adjacency"]))
    server.table.level(2, 1).T = 4
    assert server.check_invariants(server.checks) == []
    assert server.check_invariants() == ["node 2: T_2 < T_1"]
