from __future__ import annotations
"""Simulation runner orchestrates one run end to end.

Flow summary:
  run_started → (request_received → routed → phase_applied* → audited
  → request_completed | request_rejected)* → run_completed

Every stage emits a `TelemetryEvent` through the injected `TelemetrySink`;
metrics rows go to the `MetricsSink`, plan dumps to the optional `PlanSink`.
"""
from dataclasses import dataclass, field
from typing import Iterable, Optional

import numpy as np

from src.core.errors import ConfigError, InvalidRequest, StateCorruption
from src.core.interfaces import MetricsSink, PlanSink, RequestServer, TelemetrySink, TraceSource
from src.core.types import RequestMetrics, RunConfig, RunSummary, TelemetryEvent, TraceRecord
from src.engine.dyhypes import DyHypesServer
from src.engine.dyhypes_s import SingleServerSwapper
from src.workloads.adversarial import gen_adversarial_ws
from src.workloads.generators import as_single_server, example_trace, gen_repeating, gen_uniform, gen_zipf

from .audit import congest_audit


def run_id_for(config: RunConfig) -> str:
    return f"{config['algorithm']}-N{config['dimension']}-{config['workload']['kind']}-s{config['seed']}"


def build_server(config: RunConfig) -> RequestServer:
    N = config["dimension"]
    if config["algorithm"] == "dyhypes_s":
        return SingleServerSwapper(N, config.get("server", 0), seed=config["seed"])
    structural = set(config.get("checks", [])) - {"adjacency"}
    return DyHypesServer(N, seed=config["seed"], check_phases=bool(structural), checks=structural)


def build_trace(
    config: RunConfig,
    server: RequestServer,
    workload: Optional[dict] = None,
    source: Optional[TraceSource] = None,
) -> Iterable[TraceRecord]:
    """Materialize the configured workload; `source` serves the "trace" kind."""
    N, m, seed = config["dimension"], config["m"], config["seed"]
    spec = workload if workload is not None else config["workload"]
    kind = spec["kind"]
    if kind == "uniform":
        trace = gen_uniform(1 << N, m, seed)
    elif kind == "zipf":
        trace = gen_zipf(1 << N, m, float(spec.get("s", 1.0)), seed)
    elif kind == "repeating":
        trace = gen_repeating(spec["pattern"], int(spec.get("repeats", m)))
    elif kind == "example":
        trace = example_trace()
    elif kind == "trace":
        if source is None:
            raise ConfigError("trace workload needs a trace source")
        trace = list(source)
    elif kind == "adversarial":
        base = build_trace(config, server, spec.get("base", {"kind": "uniform"}), source)
        return gen_adversarial_ws(server, base, float(spec.get("c", 1.0)))
    else:
        raise ConfigError(f"unknown workload kind {kind!r}")
    if config["algorithm"] == "dyhypes_s":
        trace = as_single_server(trace, config.get("server", 0))
    return trace


@dataclass
class RunOutcome:
    rows: list[RequestMetrics] = field(default_factory=list)
    summary: RunSummary = field(default_factory=dict)  # type: ignore[assignment]


class SimulationRunner:
    """Coordinates: trace → serve → checks → audit → metrics.

    Dependencies are Protocols so sinks and algorithms swap freely.
    """

    def __init__(
        self,
        config: RunConfig,
        server: RequestServer,
        telemetry: TelemetrySink,
        metrics: Optional[MetricsSink] = None,
        plans: Optional[PlanSink] = None,
    ) -> None:
        self.config = config
        self.server = server
        self.telemetry = telemetry
        self.metrics = metrics
        self.plans = plans
        self.run_id = run_id_for(config)
        self._sample_rng = np.random.default_rng([config["seed"], 1])
        self._samples: dict[str, list[float]] = {}
        self._clients: list[int] = []

    def run(self, trace: Iterable[TraceRecord]) -> RunOutcome:
        outcome = RunOutcome()
        rejected = invariant_failures = audit_violations = 0
        self._emit(0, "run_started", payload={"config": dict(self.config)})
        for rec in trace:
            t = rec["t"]
            self._emit(t, "request_received", payload={"u": rec["u"], "v": rec["v"]})
            try:
                row = self.server.serve(t, rec["u"], rec["v"])
            except InvalidRequest as exc:
                rejected += 1
                self._emit(t, "request_rejected", level="warn", payload={"reason": str(exc)})
                continue
            self._emit(t, "routed", payload={"hops": row["hops"], "alpha": row["alpha"], "ws": row["ws"]})
            self._emit_phases(t)
            if not self._check(t, row):
                invariant_failures += 1
            audit_violations += self._audit(t)
            self._sample(t, row)
            outcome.rows.append(row)
            if self.metrics is not None:
                self.metrics.write_row(row)
            self._emit(t, "request_completed", payload={"cost": row["cost"], "rounds": row["rounds"]})
        outcome.summary = self._summarize(outcome.rows, rejected, invariant_failures, audit_violations)
        if self.metrics is not None:
            self.metrics.write_summary(outcome.summary)
        self._emit(outcome.rows[-1]["t"] if outcome.rows else 0, "run_completed", payload={
            "requests": outcome.summary["requests"],
            "ratio": outcome.summary["ratio"],
        })
        return outcome

    # --- Helpers ---

    def _emit(self, t: int, stage: str, level: str = "info", payload: Optional[dict] = None) -> None:
        self.telemetry.record(
            TelemetryEvent(
                timestamp="",
                run_id=self.run_id,
                t=t,
                stage=stage,  # type: ignore[typeddict-item]
                level=level,  # type: ignore[typeddict-item]
                payload=payload or {},
            )
        )

    def _emit_phases(self, t: int) -> None:
        for plan in getattr(self.server, "last_plans", []):
            self._emit(t, "phase_applied", payload={
                "phase": plan.phase,
                "moves": len(plan.moves),
                "rounds": plan.rounds,
                "messages": plan.messages,
            })
            if self.plans is not None:
                self.plans.write_plan(t, plan.phase, [list(m) for m in plan.moves], plan.message_log)

    def _check(self, t: int, row: RequestMetrics) -> bool:
        """Run the configured structural checks; strict runs stop on the first failure."""
        checks = set(self.config.get("checks", []))
        structural = checks - {"adjacency"}
        problems = self.server.check_invariants(structural) if structural else []
        if "adjacency" in checks and not row["invariant_ok"]:
            problems.append(f"request ({row['u']}, {row['v']}) left an unhealthy state")
        if not problems:
            return True
        strict = self.config.get("strict", False)
        self._emit(t, "audited", level="error" if strict else "warn", payload={"invariants": problems[:5]})
        if strict:
            raise StateCorruption(f"t={t}: {problems[0]}")
        return False

    def _audit(self, t: int) -> int:
        violations = congest_audit(
            getattr(self.server, "last_plans", []), self.config["dimension"], self.config.get("audit_c", 4.0)
        )
        self._emit(t, "audited", level="warn" if violations else "info", payload={
            "violations": len(violations),
            "first": violations[0] if violations else None,
        })
        return len(violations)

    def _sample(self, t: int, row: RequestMetrics) -> None:
        """Sampling hooks for the timestamp and single-server time lemmas."""
        every = self.config.get("sample_every", 0)
        N = self.config["dimension"]
        if isinstance(self.server, SingleServerSwapper):
            self._clients.append(row["v"])
        if not every or t % every:
            return
        rng = self._sample_rng
        if isinstance(self.server, DyHypesServer):
            x = int(rng.integers(1 << N))
            d = int(rng.integers(1, N))
            T = self.server.table.level(x, d).T
            if T > 0:
                net = self.server.net
                subtree = set(net.nodes_in(net.subtree(x, d).coordinates()))
                comp = self.server.graph.component(x, int(T), t + 1)
                self._samples.setdefault("ts_fraction", []).append(len(comp & subtree) / len(subtree))
        elif isinstance(self.server, SingleServerSwapper):
            d = int(rng.integers(1, N))
            window = 1 << (N - d)
            if len(self._clients) >= window:
                net = self.server.net
                seen = set(self._clients[-window:]) | {self.server.server}
                subtree = set(net.nodes_in(net.subtree(self.server.server, d).coordinates()))
                self._samples.setdefault("ss_fraction", []).append(len(seen & subtree) / len(subtree))

    def _summarize(
        self, rows: list[RequestMetrics], rejected: int, invariant_failures: int, audit_violations: int
    ) -> RunSummary:
        served = len(rows)
        ws = sum(r["log_ws"] for r in rows)
        total_cost = sum(r["cost"] for r in rows)
        total_hops = sum(r["hops"] for r in rows)
        denominator = ws + served
        N = self.config["dimension"]
        return RunSummary(
            run_id=self.run_id,
            config=self.config,
            requests=served,
            rejected=rejected,
            total_hops=total_hops,
            total_rounds=sum(r["rounds"] for r in rows),
            total_cost=total_cost,
            total_messages=sum(r["messages"] for r in rows),
            ws_bound=ws,
            ratio=total_cost / denominator if denominator else 0.0,
            hops_ratio=total_hops / denominator if denominator else 0.0,
            max_cost=max((r["cost"] for r in rows), default=0),
            invariant_failures=invariant_failures,
            audit_violations=audit_violations,
            state_bits_per_node=self.server.state_bits() if hasattr(self.server, "state_bits") else 0,
            samples=self._samples,
            message_fit=[[N - r["alpha"], r["messages"]] for r in rows],
            rounds_fit=[[N - r["alpha"], r["rounds"]] for r in rows],
            released_pairs=sum(r.get("released_pairs", 0) for r in rows),
        )


def run(
    config: RunConfig,
    telemetry: TelemetrySink,
    metrics: Optional[MetricsSink] = None,
    plans: Optional[PlanSink] = None,
    source: Optional[TraceSource] = None,
) -> RunOutcome:
    """Build the configured server and workload, then drive one run."""
    server = build_server(config)
    trace = build_trace(config, server, source=source)
    return SimulationRunner(config, server, telemetry, metrics, plans).run(trace)
