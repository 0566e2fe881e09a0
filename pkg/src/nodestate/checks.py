from __future__ import annotations
"""Structural checks over per-node state.

These read only the stored node fields (ids, ranges, timestamps) and the
placement, never the table's registry, so they double as an independent
oracle for what the engine maintains.
"""
from collections import defaultdict
from dataclasses import dataclass
from typing import Collection, Optional, Sequence

from src.core.errors import StateCorruption
from src.core.types import InvariantViolation
from src.hypercube.coordinates import subtree_of
from src.hypercube.network import NetworkState
from src.workset.oracle import log2_ceil

from .state import NodeLevelState


@dataclass(frozen=True)
class GroupView:
    level: int
    start: int
    end: int
    relative: tuple[int, int] | None = None

    @property
    def size(self) -> int:
        return self.end - self.start + 1


def invariant_I_check(net: NetworkState, states: Sequence[NodeLevelState]) -> list[InvariantViolation]:
    """At most one d-relative pair per level-d subtree, read from 𝒮/ℰ/~𝒮/~ℰ."""
    N = net.dimension
    violations: list[InvariantViolation] = []
    for d in range(N):
        pairs: dict[int, set[frozenset]] = defaultdict(set)
        for c in range(net.size):
            lv = states[net.node_at[c]].levels[d]
            if lv.relative is None or lv.peer is None:
                continue
            pairs[c >> (N - d)].add(frozenset((lv.relative, lv.peer)))
        for prefix, found in sorted(pairs.items()):
            if len(found) > 1:
                ids = []
                for pair in sorted(found, key=sorted):
                    for s, _ in sorted(pair):
                        ids.append(states[net.node_at[s]].levels[min(d + 1, N - 1)].group)
                violations.append(InvariantViolation(level=d, prefix=prefix, group_ids=ids))
    return violations


def contiguity_violations(net: NetworkState, states: Sequence[NodeLevelState]) -> list[str]:
    """Every [S^x_d, E^x_d] holds exactly the carriers of G^x_d, inside s^x_d."""
    N = net.dimension
    problems: list[str] = []
    for d in range(N):
        carriers: dict[object, set[int]] = defaultdict(set)
        for x, st in enumerate(states):
            carriers[st.levels[d].group].add(x)
        for x, st in enumerate(states):
            lv = st.levels[d]
            coord = net.coord_of[x]
            subtree = subtree_of(coord, d, N)
            if not (lv.start <= coord <= lv.end) or not (subtree.contains(lv.start) and subtree.contains(lv.end)):
                problems.append(f"node {x} level {d}: range [{lv.start}, {lv.end}] misplaced")
                continue
            if set(net.nodes_in(range(lv.start, lv.end + 1))) != carriers[lv.group]:
                problems.append(f"node {x} level {d}: group {lv.group} not contiguous")
    return problems


def timestamp_monotonicity_violations(states: Sequence[NodeLevelState]) -> list[str]:
    problems = []
    for x, st in enumerate(states):
        for d in range(1, len(st.levels)):
            if st.levels[d].T < st.levels[d - 1].T:
                problems.append(f"node {x}: T_{d} < T_{d - 1}")
    return problems


def relative_duality_violations(states: Sequence[NodeLevelState]) -> list[str]:
    return [
        f"node {x} level {d}: one-sided relative range"
        for x, st in enumerate(states)
        for d, lv in enumerate(st.levels)
        if (lv.relative is None) != (lv.peer is None)
    ]


CHECK_NAMES = ("bijection", "invariant_I", "contiguity", "timestamps")


def all_violations(
    net: NetworkState, states: Sequence[NodeLevelState], checks: Optional[Collection[str]] = None
) -> list[str]:
    """Structural checks as readable messages (empty = healthy); `checks` picks a subset of CHECK_NAMES."""
    wanted = set(CHECK_NAMES if checks is None else checks)
    problems = ["placement is not a bijection"] if "bijection" in wanted and not net.is_bijection() else []
    if "invariant_I" in wanted:
        problems += [
            f"invariant I: level {v['level']} prefix {v['prefix']} groups {v['group_ids']}"
            for v in invariant_I_check(net, states)
        ]
        problems += relative_duality_violations(states)
    if "contiguity" in wanted:
        problems += contiguity_violations(net, states)
    if "timestamps" in wanted:
        problems += timestamp_monotonicity_violations(states)
    return problems


def group_view(net: NetworkState, states: Sequence[NodeLevelState], x: int, d: int) -> GroupView:
    lv = states[x].levels[d]
    for y in net.nodes_in(range(lv.start, lv.end + 1)):
        other = states[y].levels[d]
        if (other.group, other.start, other.end) != (lv.group, lv.start, lv.end):
            raise StateCorruption(f"node {y} disagrees with node {x} on its level-{d} group")
    relative = None
    if d >= 1:
        parent = states[x].levels[d - 1]
        if parent.relative == (lv.start, lv.end):
            relative = parent.peer
    return GroupView(d, lv.start, lv.end, relative)


def relative_distance(g: GroupView, n: int) -> int:
    """k − ⌈log2 n⌉ for a group at level k with n members."""
    return g.level - log2_ceil(n)
