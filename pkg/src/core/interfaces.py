from __future__ import annotations
"""Interface definitions for the simulator's swappable primitives.

These `Protocol`s keep the runner independent of where traces come from,
where metrics and telemetry go, and which self-adjusting algorithm serves the
requests (full DyHypes vs. the single-server variant).
"""
from typing import Any, Collection, Iterable, Iterator, Optional, Protocol

from .types import (
    MessageRecord,
    RequestMetrics,
    RunSummary,
    TelemetryEvent,
    TraceRecord,
)


class RequestServer(Protocol):
    """A self-adjusting algorithm: serves one request and adjusts the network."""

    name: str

    def serve(self, t: int, u: int, v: int) -> RequestMetrics: ...

    def check_invariants(self, checks: Optional[Collection[str]] = None) -> list[str]: ...


class TraceSource(Protocol):
    """Yields trace records in strictly increasing time order."""

    def __iter__(self) -> Iterator[TraceRecord]: ...


class TraceSink(Protocol):
    """Persists generated traces (JSONL in practice)."""

    def write(self, records: Iterable[TraceRecord]) -> None: ...


class MetricsSink(Protocol):
    """Receives per-request metrics and the final summary."""

    def write_row(self, row: RequestMetrics) -> None: ...

    def write_summary(self, summary: RunSummary) -> None: ...


class PlanSink(Protocol):
    """Debug stream of per-request plans and their accounted messages."""

    def write_plan(self, t: int, phase: str, moves: list[list[int]], messages: list[MessageRecord]) -> None: ...


class TelemetrySink(Protocol):
    """Records structured events for observability."""

    def record(self, event: TelemetryEvent) -> None: ...


class ConfigSource(Protocol):
    """Provides run defaults and named campaign grids."""

    def defaults(self) -> dict[str, Any]: ...

    def campaign(self, name: str) -> dict[str, Any]: ...


class StateExporter(Protocol):
    """Writes and reads per-node state snapshots."""

    def export(self, snapshot: dict[str, Any]) -> None: ...

    def load(self) -> dict[str, Any]: ...
