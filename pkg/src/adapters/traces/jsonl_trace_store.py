from __future__ import annotations
"""JSONL-backed trace store.

One `{"t", "u", "v"}` object per line. Loading validates as it reads:
times strictly increase and no record names a node twice.
"""
import json
from pathlib import Path
from typing import Iterable, Iterator

from src.core.errors import TraceOrderError
from src.core.interfaces import TraceSink, TraceSource
from src.core.types import TraceRecord


class JSONLTraceStore(TraceSource, TraceSink):
    """Reads and writes traces at one path."""

    def __init__(self, path: str | Path) -> None:
        self.path = Path(path)

    def __iter__(self) -> Iterator[TraceRecord]:
        last = None
        with self.path.open() as f:
            for lineno, line in enumerate(f, start=1):
                if not line.strip():
                    continue
                try:
                    raw = json.loads(line)
                    rec = TraceRecord(t=int(raw["t"]), u=int(raw["u"]), v=int(raw["v"]))
                except (ValueError, KeyError, TypeError) as exc:
                    raise TraceOrderError(f"{self.path}:{lineno}: malformed record ({exc})") from None
                if rec["u"] == rec["v"]:
                    raise TraceOrderError(f"{self.path}:{lineno}: node {rec['u']} talks to itself")
                if last is not None and rec["t"] <= last:
                    raise TraceOrderError(f"{self.path}:{lineno}: time {rec['t']} does not follow {last}")
                last = rec["t"]
                yield rec

    def write(self, records: Iterable[TraceRecord]) -> None:
        self.path.parent.mkdir(parents=True, exist_ok=True)
        with self.path.open("w") as f:
            for rec in records:
                f.write(json.dumps({"t": rec["t"], "u": rec["u"], "v": rec["v"]}) + "\n")
