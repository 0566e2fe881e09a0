from __future__ import annotations
"""Null telemetry sink.

Drops every event. Default for campaigns, where thousands of runs would
otherwise flood the output.
"""
from src.core.interfaces import TelemetrySink
from src.core.types import TelemetryEvent


class NullSink(TelemetrySink):
    def record(self, event: TelemetryEvent) -> None:
        """Does nothing."""
