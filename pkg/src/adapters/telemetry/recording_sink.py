from __future__ import annotations
"""In-memory telemetry sink for tests and report embedding."""
from src.core.interfaces import TelemetrySink
from src.core.types import TelemetryEvent


class RecordingSink(TelemetrySink):
    def __init__(self) -> None:
        self.events: list[TelemetryEvent] = []

    def record(self, event: TelemetryEvent) -> None:
        self.events.append(event)

    def stages(self) -> list[str]:
        return [e["stage"] for e in self.events]

    def by_stage(self, stage: str) -> list[TelemetryEvent]:
        return [e for e in self.events if e["stage"] == stage]
