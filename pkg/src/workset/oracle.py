from __future__ import annotations
"""Exact working-set queries over the communication graph.

T_t(u, v) has three cases:
  repeat-pair      u, v last talked at t′ < t: |component of u over [t′, t)|
  same-component   never talked directly, but connected over [0, t)
  disjoint         max(2^d, |V_u| + |V_v|) with d the current tree distance

Components are rebuilt per query (BFS); the window's left edge depends on the
pair, so nothing is maintained incrementally.
"""
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Sequence, Union

from src.core.errors import InvalidRequest
from src.core.types import TraceRecord
from src.hypercube.network import NetworkState, tree_distance

from .graph import CommGraph


class WorkingSetCase(str, Enum):
    REPEAT_PAIR = "repeat-pair"
    SAME_COMPONENT = "same-component"
    DISJOINT = "disjoint-components"


@dataclass(frozen=True)
class WorkingSetQueryResult:
    T: int
    case: WorkingSetCase


NetsPerStep = Union[NetworkState, Sequence[NetworkState], Callable[[int], NetworkState]]


def log2_ceil(x: int) -> int:
    """⌈log2 x⌉ for x ≥ 1, on integers."""
    return (x - 1).bit_length()


def ws_number(graph: CommGraph, net: NetworkState, t: int, u: int, v: int) -> WorkingSetQueryResult:
    if u == v:
        raise InvalidRequest(f"working-set query names node {u} twice")
    last = graph.last_communication(u, v, before=t)
    if last is not None:
        return WorkingSetQueryResult(len(graph.component(u, last, t)), WorkingSetCase.REPEAT_PAIR)
    comp_u = graph.component(u, 0, t)
    if v in comp_u:
        return WorkingSetQueryResult(len(comp_u), WorkingSetCase.SAME_COMPONENT)
    comp_v = graph.component(v, 0, t)
    d = tree_distance(net, u, v)
    return WorkingSetQueryResult(max(1 << d, len(comp_u) + len(comp_v)), WorkingSetCase.DISJOINT)


def _net_for(nets: NetsPerStep, i: int) -> NetworkState:
    if isinstance(nets, NetworkState):
        return nets
    if callable(nets):
        return nets(i)
    return nets[i]


def ws_bound(trace: Sequence[TraceRecord], nets: NetsPerStep) -> int:
    """WS(σ) = Σ ⌈log2 T_i⌉ with T_i taken just before request i."""
    graph = CommGraph()
    total = 0
    for i, rec in enumerate(trace):
        T = ws_number(graph, _net_for(nets, i), rec["t"], rec["u"], rec["v"]).T
        total += log2_ceil(T)
        graph.record(rec["t"], rec["u"], rec["v"])
    return total


def ws_property_holds(net: NetworkState, graph: CommGraph, t: int, u: int, v: int) -> bool:
    return tree_distance(net, u, v) <= log2_ceil(ws_number(graph, net, t, u, v).T)


def distance_witness(graph: CommGraph, net: NetworkState, t: int, u: int) -> int | None:
    """A node v with tree_distance(u, v) ≥ ⌈log2 T_t(u, v)⌉, farthest first, or None."""
    candidates = sorted(
        (x for x in range(net.size) if x != u),
        key=lambda x: (-tree_distance(net, u, x), net.coord_of[x]),
    )
    for v in candidates:
        if tree_distance(net, u, v) >= log2_ceil(ws_number(graph, net, t, u, v).T):
            return v
    return None


def brute_force_ws_number(
    edges: Sequence[tuple[int, int, int]], t: int, u: int, v: int, distance: int
) -> int:
    """Reference T_t(u, v) from a plain edge list (fixpoint sweep, no indexing)."""

    def reach(src: int, lo: int) -> set[int]:
        window = [(a, b) for (tau, a, b) in edges if lo <= tau < t]
        seen = {src}
        grown = True
        while grown:
            grown = False
            for a, b in window:
                if (a in seen) != (b in seen):
                    seen.update((a, b))
                    grown = True
        return seen

    direct = [tau for (tau, a, b) in edges if tau < t and {a, b} == {u, v}]
    if direct:
        return len(reach(u, max(direct)))
    comp_u = reach(u, 0)
    if v in comp_u:
        return len(comp_u)
    return max(2 ** distance, len(comp_u) + len(reach(v, 0)))
