from __future__ import annotations
"""Telemetry sink that prints events.

Makes a run traceable on stdout (`--verbose`). Campaigns use the null sink,
long runs the JSONL sink.
"""
from pprint import pprint

from src.core.interfaces import TelemetrySink
from src.core.types import TelemetryEvent


class PrintSink(TelemetrySink):
    """Prints structured events, optionally only from a minimum level up."""

    _RANK = {"info": 0, "warn": 1, "error": 2}

    def __init__(self, min_level: str = "info") -> None:
        self.min_rank = self._RANK[min_level]

    def record(self, event: TelemetryEvent) -> None:
        """Pretty-print the event without the raw timestamp."""
        if self._RANK.get(event.get("level", "info"), 0) < self.min_rank:
            return
        pprint({k: v for k, v in event.items() if k != "timestamp"})
