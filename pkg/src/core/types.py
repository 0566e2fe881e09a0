from __future__ import annotations
"""Shared type definitions used across the simulator.

Records that cross component boundaries (trace lines, metrics rows, telemetry,
audit findings, reports) are plain `TypedDict`s so adapters can serialize them
to JSON/CSV without custom encoders. Mutable model objects (network placement,
per-node state, plans) are dataclasses living next to the code that owns them.
"""
from typing import Any, Dict, List, Literal, Optional, TypedDict


AlgorithmName = Literal["dyhypes", "dyhypes_s"]
PhaseName = Literal["leap", "inter", "intra", "swap"]
StageKind = Literal["broadcast", "convergecast", "move", "exchange"]


class TraceRecord(TypedDict):
    t: int
    u: int
    v: int


class MessageRecord(TypedDict):
    """One send starting in `round`; it occupies one link per round along its bit-fixing path."""
    round: int
    src: int
    dst: int
    fields: Dict[str, int]


class WorkloadSpec(TypedDict, total=False):
    kind: Literal["uniform", "zipf", "repeating", "example", "trace", "adversarial"]
    s: float
    pattern: List[List[int]]
    repeats: int
    path: str
    base: "WorkloadSpec"
    c: float


class RunConfig(TypedDict, total=False):
    dimension: int
    algorithm: AlgorithmName
    workload: WorkloadSpec
    m: int
    seed: int
    server: int
    checks: List[str]
    audit_c: float
    strict: bool
    sample_every: int


class RequestMetrics(TypedDict, total=False):
    t: int
    u: int
    v: int
    hops: int
    rounds: int
    messages: int
    ws: int
    log_ws: int
    cost: int
    invariant_ok: bool
    alpha: int
    phases: List[str]
    k_order: Optional[float]
    released_pairs: int


class RunSummary(TypedDict, total=False):
    run_id: str
    config: RunConfig
    requests: int
    rejected: int
    total_hops: int
    total_rounds: int
    total_cost: int
    total_messages: int
    ws_bound: int
    ratio: float
    hops_ratio: float
    max_cost: int
    invariant_failures: int
    audit_violations: int
    state_bits_per_node: int
    samples: Dict[str, List[float]]
    message_fit: List[List[int]]
    rounds_fit: List[List[int]]
    released_pairs: int


class TelemetryEvent(TypedDict, total=False):
    timestamp: str
    run_id: str
    t: int
    stage: Literal[
        "run_started",
        "request_received",
        "routed",
        "phase_applied",
        "audited",
        "request_completed",
        "request_rejected",
        "run_completed",
    ]
    level: Literal["info", "warn", "error"]
    payload: Dict[str, Any]


class AuditViolation(TypedDict):
    kind: Literal["link_overload", "payload_size"]
    round: int
    link: List[int]
    detail: str


class InvariantViolation(TypedDict):
    level: int
    prefix: int
    group_ids: List[Any]


class AppendixRow(TypedDict, total=False):
    time: int
    expected_size: float
    expected_tilde: Optional[float]


class VerifyReport(TypedDict, total=False):
    name: str
    claim: str
    statistic: float
    bound: float
    slack: float
    ci_low: float
    ci_high: float
    samples: int
    passed: bool
    fitted_c: Optional[float]
    cells: List[Dict[str, Any]]
    config: Dict[str, Any]
