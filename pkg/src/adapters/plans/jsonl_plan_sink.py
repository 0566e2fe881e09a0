from __future__ import annotations
"""Plan dump: one JSON line per executed phase, for differential testing."""
import json
from pathlib import Path

from src.core.interfaces import PlanSink
from src.core.types import MessageRecord


class JSONLPlanSink(PlanSink):
    def __init__(self, path: str | Path) -> None:
        self.path = Path(path)
        self.path.parent.mkdir(parents=True, exist_ok=True)
        self.path.write_text("")

    def write_plan(self, t: int, phase: str, moves: list[list[int]], messages: list[MessageRecord]) -> None:
        with self.path.open("a") as f:
            f.write(json.dumps({"t": t, "phase": phase, "moves": moves, "messages": messages}) + "\n")


def read_plans(path: str | Path) -> list[dict]:
    return [json.loads(line) for line in Path(path).read_text().splitlines() if line.strip()]
