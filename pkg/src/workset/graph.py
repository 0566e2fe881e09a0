from __future__ import annotations
"""Timestamped communication graph.

Each served request (t, u, v) becomes an edge. Working-set queries need the
connected component of a node restricted to edges with time in [start, end),
so every adjacency keeps the sorted list of times the pair communicated.
"""
from bisect import bisect_left
from collections import defaultdict, deque
from dataclasses import dataclass, field
from typing import Iterable

from src.core.errors import TraceOrderError
from src.core.types import TraceRecord


@dataclass
class CommGraph:
    edges: list[tuple[int, int, int]] = field(default_factory=list)
    _adjacency: dict[int, dict[int, list[int]]] = field(
        default_factory=lambda: defaultdict(dict), repr=False
    )

    @classmethod
    def from_trace(cls, records: Iterable[TraceRecord]) -> "CommGraph":
        graph = cls()
        for rec in records:
            graph.record(rec["t"], rec["u"], rec["v"])
        return graph

    @property
    def last_time(self) -> int | None:
        return self.edges[-1][0] if self.edges else None

    def record(self, t: int, u: int, v: int) -> None:
        if u == v:
            raise TraceOrderError(f"self-communication of node {u} at t={t}")
        if self.edges and t <= self.edges[-1][0]:
            raise TraceOrderError(f"time {t} does not follow {self.edges[-1][0]}")
        self.edges.append((t, u, v))
        self._adjacency[u].setdefault(v, []).append(t)
        self._adjacency[v].setdefault(u, []).append(t)

    def last_communication(self, u: int, v: int, before: int | None = None) -> int | None:
        """Latest time < `before` at which u and v communicated directly."""
        times = self._adjacency.get(u, {}).get(v)
        if not times:
            return None
        if before is None:
            return times[-1]
        idx = bisect_left(times, before)
        return times[idx - 1] if idx > 0 else None

    def _active(self, times: list[int], start: int, end: int | None) -> bool:
        idx = bisect_left(times, start)
        return idx < len(times) and (end is None or times[idx] < end)

    def component(self, u: int, start: int = 0, end: int | None = None) -> set[int]:
        """Vertices reachable from u over edges timed in [start, end)."""
        seen = {u}
        queue = deque([u])
        while queue:
            x = queue.popleft()
            for y, times in self._adjacency.get(x, {}).items():
                if y not in seen and self._active(times, start, end):
                    seen.add(y)
                    queue.append(y)
        return seen

    def copy(self) -> "CommGraph":
        return CommGraph.from_trace({"t": t, "u": u, "v": v} for t, u, v in self.edges)
