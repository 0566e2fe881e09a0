from __future__ import annotations
"""Telemetry sink appending one JSON object per event to a file."""
import json
from datetime import datetime, timezone
from pathlib import Path

from src.core.interfaces import TelemetrySink
from src.core.types import TelemetryEvent


class JSONLSink(TelemetrySink):
    def __init__(self, path: str | Path) -> None:
        self.path = Path(path)
        self.path.parent.mkdir(parents=True, exist_ok=True)

    def record(self, event: TelemetryEvent) -> None:
        stamped = dict(event)
        if not stamped.get("timestamp"):
            stamped["timestamp"] = datetime.now(timezone.utc).isoformat()
        with self.path.open("a") as f:
            f.write(json.dumps(stamped, default=str) + "\n")
