from __future__ import annotations
"""Per-node state snapshots as a JSON file."""
import json
from pathlib import Path
from typing import Any

from src.core.errors import StateCorruption
from src.core.interfaces import StateExporter


class JSONSnapshotStore(StateExporter):
    def __init__(self, path: str | Path) -> None:
        self.path = Path(path)

    def export(self, snapshot: dict[str, Any]) -> None:
        self.path.parent.mkdir(parents=True, exist_ok=True)
        self.path.write_text(json.dumps(snapshot, sort_keys=True))

    def load(self) -> dict[str, Any]:
        try:
            return json.loads(self.path.read_text())
        except json.JSONDecodeError as exc:
            raise StateCorruption(f"snapshot {self.path} is not valid JSON: {exc}") from None
