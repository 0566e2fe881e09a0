from __future__ import annotations
"""Intra-group transformation: pull the submissive communicant next to the anchor.

The anchor a stays put. A reposition set S is selected ring by ring around
a, sized by how many of the mover's level-(α+1) group are at least as recent
as a's T-timestamps, then S is permuted among its own coordinates so that
recent nodes sit close to a. The mover b always ranks first and lands on a's
sibling leaf. Timestamp rules T1 (counter and next-T refresh), T2 (K demotion
on outward moves) and T3 (communicants stamped with t) follow.
"""
from collections import defaultdict
from math import ceil, inf

import numpy as np

from src.hypercube.network import NetworkState, tree_distance
from src.nodestate.state import GroupTable
from src.workset.oracle import log2_ceil

from .geometry import alpha, coordinate_distance, ring, ring_level
from .plan import TransformPlan, broadcast_stage, convergecast_stage, move_stage
from .selection import approx_lth_largest
from .units import DisjointSets

# smallest accepted share of inner-ring nodes keyed above the next ring out
K_ORDER_BOUND = 0.8


def choose_anchor(table: GroupTable, u: int, v: int, a: int) -> tuple[int, int]:
    """(dominant, submissive); ties go to u."""
    if table.group_size(u, a + 1) >= table.group_size(v, a + 1):
        return u, v
    return v, u


def _partial_selection(
    net: NetworkState, table: GroupTable, source: list[int], count: int, level: int, rng: np.random.Generator
) -> set[int]:
    """Relatives inside `source`, then a random contiguous filler closed under groups."""
    inside = set(source)
    selected: set[int] = set()

    def pieces(pair):
        for gid in (pair.left, pair.right):
            s, e = table.piece_range(pair, gid)
            yield [c for c in range(s, e + 1) if c in inside]

    for pair in table.relatives:
        if pair.level <= level:
            for coords in pieces(pair):
                selected.update(net.nodes_in(coords))
    for pair in table.pairs_touching(net, selected):
        if pair.level > level:
            for coords in pieces(pair):
                selected.update(net.nodes_in(coords))

    remaining = [c for c in source if net.node_at[c] not in selected]
    need = count - len(selected)
    if need > 0 and remaining:
        start = int(rng.integers(len(remaining)))
        for c in remaining[start : start + need]:
            x = net.node_at[c]
            members = [net.coord_of[y] for y in table.members(net, x, level + 1)]
            selected.update(net.nodes_in(m for m in members if m in inside))
            for pair in table.pairs_touching(net, [x]):
                for coords in pieces(pair):
                    selected.update(net.nodes_in(coords))
    return selected


def reposition_set(
    net: NetworkState, table: GroupTable, anchor: int, mover: int, a: int, rng: np.random.Generator
) -> tuple[set[int], dict[int, int]]:
    """S with the anchor excluded, plus count_anchor(i) for every level i > α."""
    N = net.dimension
    group = table.members(net, mover, a + 1)
    st = table.states[anchor]

    def k_alpha(x: int) -> float:
        return inf if x == mover else table.level(x, a).K

    counts = {i: sum(1 for x in group if k_alpha(x) >= st.T(i)) for i in range(a + 1, N)}
    selected: set[int] = set()
    for i in range(a + 1, N):
        if st.T(i + 1) > 0:
            source = list(ring(net, anchor, i + 1).coordinates())
        elif st.T(i) > 0:
            inner = table.level(anchor, i + 1)
            source = [c for c in net.subtree(anchor, i).coordinates() if not inner.start <= c <= inner.end]
        else:
            continue
        if counts[i] >= len(source):
            selected.update(net.nodes_in(source))
        else:
            selected |= _partial_selection(net, table, source, counts[i], i, rng)
    S = selected | set(group) | {mover}
    S.discard(anchor)
    return S, counts


def intra_group_transform(
    net: NetworkState, table: GroupTable, u: int, v: int, t: int, rng: np.random.Generator
) -> TransformPlan:
    N = net.dimension
    plan = TransformPlan("intra")
    if tree_distance(net, u, v) == 1:
        return plan
    a = alpha(net, u, v)
    anchor, mover = choose_anchor(table, u, v, a)
    ca, cb = net.coord_of[anchor], net.coord_of[mover]
    old_group = table.members(net, anchor, a)
    S, counts = reposition_set(net, table, anchor, mover, a, rng)

    def level_of(x: int) -> int:
        c = net.coord_of[x]
        return N - min(coordinate_distance(ca, c, N), coordinate_distance(cb, c, N))

    key = {x: inf if x == mover else table.states[x].K(level_of(x)) for x in S}

    units = DisjointSets(S)
    for x in S:
        units.union_all([x] + [y for y in table.members(net, x, min(level_of(x) + 1, N - 1)) if y in S])
    for pair in table.relatives:
        touched = [
            y
            for gid in (pair.left, pair.right)
            for y in table.members(net, net.node_at[table.piece_range(pair, gid)[0]], pair.level + 1)
            if y in S
        ]
        units.union_all(touched)

    def coord(x: int) -> int:
        return net.coord_of[x]

    t_list = sorted((table.states[y].T(i) for y in (anchor, mover) for i in range(a + 1, N + 1)), reverse=True)
    limits = rank_limits(S, key, t_list)
    slots = sorted((coord(x) for x in S), key=lambda c: (coordinate_distance(ca, c, N), c))
    classes = sorted(units.classes(), key=lambda unit: (-max(key[x] for x in unit), min(map(coord, unit))))
    order = _unit_order(classes, key, limits, coord)
    k_order = _k_order_fraction(order, slots, key, ca, N)
    placement = "units"
    if not _within_limits(order, limits) or (k_order is not None and k_order < K_ORDER_BOUND):
        unit_index = {x: i for i, unit in enumerate(classes) for x in unit}
        order = sorted(S, key=lambda x: (-key[x], unit_index[x], coord(x)))
        k_order = _k_order_fraction(order, slots, key, ca, N)
        placement = "keys"
    moves = [(x, coord(x), slot) for x, slot in zip(order, slots) if coord(x) != slot]
    plan.diagnostics["k_order"] = k_order
    plan.diagnostics["placement"] = placement
    plan.diagnostics["within_limits"] = _within_limits(order, limits)
    plan.diagnostics["reposition"] = len(S)

    header = {"u": net.coord_of[u], "v": net.coord_of[v], "level": a}
    top = max(counts.values(), default=0)
    plan.add_stage(*convergecast_stage(net.subtree(mover, a + 1), cb, {"count": top}))
    plan.add_stage(*broadcast_stage(net.subtree(anchor, a), ca, {**header, "count": top}))
    plan.add_stage(*move_stage(N, moves))
    plan.moves = moves

    old_ring = {x: ring_level(ca, old, N) for x, old, _ in moves}
    table.apply_moves(net, moves, region_level=a)

    _refresh_T(net, table, plan, S, key, t_list, anchor, a, t)
    for x, _, new in moves:
        r_old, r_new = old_ring[x], ring_level(ca, new, N)
        if r_new < r_old:
            levels = table.states[x].levels
            levels[r_new - 1].K = levels[r_old - 1].K
            levels[r_old - 1].K = 0

    cluster = set(old_group) | S | {anchor}
    for d in range(a, N):
        s = net.subtree(anchor, d)
        lo = hi = ca
        while lo > s.start and net.node_at[lo - 1] in cluster:
            lo -= 1
        while hi < s.end and net.node_at[hi + 1] in cluster:
            hi += 1
        table.assign_group(net.nodes_in(range(lo, hi + 1)), d, table.level(anchor, d).group)
    table.normalize(net)
    return plan


def _refresh_T(
    net: NetworkState,
    table: GroupTable,
    plan: TransformPlan,
    S: set[int],
    key: dict[int, float],
    t_list: list[float],
    anchor: int,
    a: int,
    t: int,
) -> None:
    """Rule T1 over the buckets X_i of the sorted T-list, after placement.

    The per-level selections run side by side, so together they
    cost the slowest level's rounds and every level's messages.
    """
    N = net.dimension
    rounds = messages = 0

    def bucket(x: int) -> int:
        return next((i for i, T in enumerate(t_list, start=1) if key[x] >= T), len(t_list) + 1)

    buckets: dict[int, list[int]] = defaultdict(list)
    for x in sorted(S, key=lambda y: net.coord_of[y]):
        buckets[bucket(x)].append(x)

    for d in range(a + 1, N):
        inner, outer = net.subtree(anchor, d), net.subtree(anchor, d - 1)
        hit = None
        for i in sorted(buckets):
            coords = [net.coord_of[x] for x in buckets[i]]
            if any(inner.contains(c) for c in coords) and any(
                outer.contains(c) and not inner.contains(c) for c in coords
            ):
                hit = i
                break
        if hit is None:
            continue
        X_i = buckets[hit]
        k = sum(1 for x in X_i if inner.contains(net.coord_of[x]))
        L = ceil((ceil(k / N) + 1) * (1 << log2_ceil(len(X_i))) / N)
        L = min(max(L, 1), len(X_i))
        result = approx_lth_largest([t if key[x] == inf else key[x] for x in X_i], L)
        rounds = max(rounds, result.rounds)
        messages += result.messages
        threshold = 1 << (N - d - 1)
        for x in net.nodes_in(inner.coordinates()):
            lv = table.level(x, d)
            lv.next_T = result.value
            if lv.counter + k >= threshold:
                lv.T = lv.next_T
            lv.counter = (lv.counter + k) % threshold
    plan.charge(rounds, messages)


def rank_limits(nodes: set[int], key: dict[int, float], t_list: list[float]) -> dict[int, int]:
    """COUNT(k(x)) per node: how many nodes key at least the highest T-value that k(x) reaches.

    A node may take any of the first COUNT(k(x)) slots around the anchor; a
    key below every T-value leaves it unconstrained.
    """
    limits = {}
    for x in nodes:
        reached = next((T for T in t_list if key[x] >= T), None)
        limits[x] = len(nodes) if reached is None else sum(1 for y in nodes if key[y] >= reached)
    return limits


def _unit_order(classes: list[set[int]], key: dict[int, float], limits: dict[int, int], coord) -> list[int]:
    """Units back to back, earliest rank deadline first; members by key inside a unit."""
    members = [sorted(unit, key=lambda x: (-key[x], coord(x))) for unit in classes]

    def due(k: int) -> int:
        nodes = members[k]
        return min(limits[x] - i - 1 for i, x in enumerate(nodes)) + len(nodes)

    return [x for k in sorted(range(len(members)), key=lambda k: (due(k), k)) for x in members[k]]


def _within_limits(order: list[int], limits: dict[int, int]) -> bool:
    return all(rank <= limits[x] for rank, x in enumerate(order, start=1))



def stamp_communicants(table: GroupTable, u: int, v: int, t: int) -> None:
    """Rule T3: both communicants record t at level N − 1."""
    for x in (u, v):
        lv = table.level(x, table.dimension - 1)
        lv.T = t
        lv.K = t


def _k_order_fraction(order: list[int], slots: list[int], key: dict[int, float], ca: int, N: int) -> float | None:
    """Worst share, over adjacent rings, of inner nodes keyed at least as high as every outer node."""
    by_ring: dict[int, list[float]] = defaultdict(list)
    for x, slot in zip(order, slots):
        by_ring[ring_level(ca, slot, N)].append(key[x])
    fractions = []
    for r in sorted(by_ring):
        if r + 1 in by_ring:
            top = max(by_ring[r])
            inner = by_ring[r + 1]
            fractions.append(sum(1 for k in inner if k >= top) / len(inner))
    return min(fractions) if fractions else None
