from __future__ import annotations
"""Adversarial working-set workload, generated against a live algorithm.

The generator reads the server's current placement and communication graph
each time the next request is pulled. A base request is kept when its
routing distance already meets the working-set threshold; otherwise its
destination is replaced by the farthest node that does. Pull one record,
serve it, pull the next: that interleaving is what makes it adversarial.
"""
from dataclasses import dataclass, field
from math import log2
from typing import Iterable, Iterator

from src.core.errors import WitnessNotFound
from src.core.types import TraceRecord
from src.hypercube.network import NetworkState
from src.workset.graph import CommGraph
from src.workset.oracle import log2_ceil, ws_number


def routing_distance(net: NetworkState, u: int, v: int) -> int:
    """Hops minus one."""
    return (net.coord_of[u] ^ net.coord_of[v]).bit_count() - 1


def ws_threshold(T: int, dimension: int, c: float) -> float:
    """⌈log2 T⌉ / (c · log2 log2 n), with log2 log2 n = log2 N."""
    return log2_ceil(T) / (c * max(log2(dimension), 1.0))


@dataclass
class AdversarialTrace:
    """Iterable trace bound to a server exposing `net` and `graph`."""

    server: object
    base: Iterable[TraceRecord]
    c: float = 1.0
    substitutions: int = 0
    distance_total: int = 0
    ws_total: int = 0
    emitted: list[TraceRecord] = field(default_factory=list)

    def _qualifies(self, net: NetworkState, graph: CommGraph, t: int, u: int, v: int) -> tuple[bool, int]:
        T = ws_number(graph, net, t, u, v).T
        return routing_distance(net, u, v) >= ws_threshold(T, net.dimension, self.c), T

    def __iter__(self) -> Iterator[TraceRecord]:
        for rec in self.base:
            net: NetworkState = self.server.net  # type: ignore[attr-defined]
            graph: CommGraph = self.server.graph  # type: ignore[attr-defined]
            t, u, v = rec["t"], rec["u"], rec["v"]
            ok, T = self._qualifies(net, graph, t, u, v)
            if not ok:
                v, T = self._far_partner(net, graph, t, u)
                self.substitutions += 1
            self.distance_total += routing_distance(net, u, v)
            self.ws_total += log2_ceil(T)
            out = TraceRecord(t=t, u=u, v=v)
            self.emitted.append(out)
            yield out

    def _far_partner(self, net: NetworkState, graph: CommGraph, t: int, u: int) -> tuple[int, int]:
        cu = net.coord_of[u]
        candidates = sorted(
            (x for x in range(net.size) if x != u),
            key=lambda x: (-(cu ^ net.coord_of[x]).bit_count(), net.coord_of[x]),
        )
        for x in candidates:
            ok, T = self._qualifies(net, graph, t, u, x)
            if ok:
                return x, T
        raise WitnessNotFound(f"no partner of node {u} meets the working-set threshold at t={t}")


def gen_adversarial_ws(server: object, base: Iterable[TraceRecord], c: float = 1.0) -> AdversarialTrace:
    return AdversarialTrace(server, base, c)
