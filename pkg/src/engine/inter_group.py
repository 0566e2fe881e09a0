from __future__ import annotations
"""Inter-group transformation: make the communicating level-α groups adjacent.

Inside X = s^u_α the smaller (submissive) group Sb is placed next to the
larger (dominant) group D. Offsets are worked out in a frame where D sits in
the left half, so "towards the other half" is always "to the right".

When X holds an α-relative pair (C1 on D's side, C2 on Sb's side):

* cover: |Sb| ≥ |C1|. D and Sb are compacted, C1 is moved onto C2 and the two
  pieces rejoin as one group.
* filler: |Sb| < |C1|. A random window R of |Sb| nodes from D's half takes
  Sb's old place while C1, D and Sb are compacted together. When no window
  avoids the groups involved, R is made of the free nodes nearest to the
  compacted span instead.

Afterwards Sb carries D's id at every level from α up to the new common
level of u and v.
"""
from typing import Sequence

import numpy as np

from src.hypercube.network import NetworkState
from src.nodestate.state import GroupTable, RelativePair

from .geometry import alpha
from .plan import TransformPlan, broadcast_stage, convergecast_stage, move_stage, moves_between, place_blocks

Block = tuple[list[int], int]


def _nearest_offset(desired: int, size: int, width: int, taken: set[int], lo: int, hi: int) -> int | None:
    """Free offset for a block of `size`, inside [lo, hi) if possible, then closest to `desired`."""
    free = [s for s in range(width - size + 1) if not taken.intersection(range(s, s + size))]
    if not free:
        return None
    return min(free, key=lambda s: (not (lo <= s and s + size <= hi), abs(s - desired), s))


def _layout(main: list[int], main_at: int, side: list[int], side_at: int, width: int, half: int) -> list[Block]:
    """Blocks for `main` near `main_at` and `side` near `side_at`, preferring the right half."""
    main_at = min(max(main_at, 0), width - len(main))
    if not side:
        return [(main, main_at)]
    at = _nearest_offset(side_at, len(side), width, set(range(main_at, main_at + len(main))), half, width)
    if at is None:
        main_at = 0
        at = _nearest_offset(side_at, len(side), width, set(range(len(main))), half, width)
    return [(main, main_at), (side, at)]


def _filler(
    local: Sequence[int], size: int, half: int, excluded: set[int], span: tuple[int, int], rng: np.random.Generator
) -> tuple[list[int], str]:
    """A random window of `size` free nodes in [0, half), or the free nodes nearest `span`."""
    blocked = {k for k, x in enumerate(local) if x in excluded}
    starts = [s for s in range(half - size + 1) if not blocked.intersection(range(s, s + size))]
    if starts:
        s = starts[int(rng.integers(len(starts)))]
        return list(local[s : s + size]), "random"
    lo, hi = span

    def gap(k: int) -> int:
        return lo - k if k < lo else k - hi

    nearest = sorted((k for k in range(len(local)) if k not in blocked), key=lambda k: (gap(k), k))[:size]
    return [local[k] for k in sorted(nearest)], "adjacent"


def inter_group_transform(
    net: NetworkState, table: GroupTable, u: int, v: int, rng: np.random.Generator
) -> TransformPlan:
    N = net.dimension
    plan = TransformPlan("inter")
    a = alpha(net, u, v)
    if table.same_group(u, v, a) or not (table.g_level(u) > a or table.g_level(v) > a):
        return plan

    X = net.subtree(u, a)
    width, half = X.size, X.size // 2
    dom, sub = (u, v) if table.group_size(u, a) >= table.group_size(v, a) else (v, u)
    seq = net.nodes_in(X.coordinates())
    mirrored = net.coord_of[dom] - X.start >= half
    local = seq[::-1] if mirrored else seq
    pos = {x: k for k, x in enumerate(local)}

    def ordered(nodes) -> list[int]:
        return sorted(nodes, key=pos.__getitem__)

    D = ordered(table.members(net, dom, a))
    B = ordered(table.members(net, sub, a))
    movers = set(D) | set(B)

    pair = table.pair_in(X)
    rejoin: RelativePair | None = None
    c_nodes: list[int] = []
    if pair is None:
        plan.diagnostics["branch"] = "adjacent"
        blocks = _layout(D + B, pos[D[0]], [], 0, width, half)
    else:
        left, right = table.piece_range(pair, pair.left), table.piece_range(pair, pair.right)
        left_nodes = net.nodes_in(range(left[0], left[1] + 1))
        right_nodes = net.nodes_in(range(right[0], right[1] + 1))
        C1, C2 = (right_nodes, left_nodes) if mirrored else (left_nodes, right_nodes)
        c_nodes = C1 + C2
        rest1 = ordered(x for x in C1 if x not in movers)
        rest2 = ordered(x for x in C2 if x not in movers)
        if len(B) >= len(C1):
            plan.diagnostics["branch"] = "cover"
            side_at = pos[rest2[0]] if rest2 else half
            blocks = _layout(D + B, pos[D[0]], rest2 + rest1, side_at, width, half)
            rejoin = pair
        else:
            plan.diagnostics["branch"] = "filler"
            compact = ordered(set(D) | set(rest1))
            R, how = _filler(
                local, len(B), half, movers | set(C1) | set(C2), (pos[compact[0]], pos[compact[-1]]), rng
            )
            plan.diagnostics["filler"] = how
            plan.diagnostics["filler_size"] = len(R)
            main = rest1 + D + B
            limit = half if len(main) <= half else width
            blocks = _layout(main, min(pos[D[0]] - len(rest1), limit - len(main)), R, pos[B[0]], width, half)

    # deeper relatives among the movers travel as one group
    for deeper in table.pairs_touching(net, B):
        if deeper.level > a:
            table.reunite(deeper)

    new_local = place_blocks(local, blocks)
    new_seq = new_local[::-1] if mirrored else new_local
    moves = moves_between(X.start, seq, new_seq, net.coord_of)

    header = {"u": net.coord_of[u], "v": net.coord_of[v], "level": a}
    root = net.coord_of[dom]
    plan.add_stage(*broadcast_stage(X, root, header))
    plan.add_stage(*convergecast_stage(X, root, {"size": len(D) + len(B)}))
    plan.add_stage(*move_stage(N, moves))
    plan.moves = moves

    table.apply_moves(net, moves, region_level=a)
    if rejoin is not None:
        table.reunite(rejoin)
    elif pair is not None and _contiguous_in_one_half(net, c_nodes, a):
        table.reunite(pair)

    for d in range(a, alpha(net, u, v) + 1):
        s = net.subtree(dom, d)
        gid = table.level(dom, d).group
        table.assign_group([x for x in movers if s.contains(net.coord_of[x])], d, gid)
    table.normalize(net)
    return plan


def _contiguous_in_one_half(net: NetworkState, nodes: list[int], a: int) -> bool:
    coords = sorted(net.coord_of[x] for x in nodes)
    if not coords or coords[-1] - coords[0] != len(coords) - 1:
        return False
    return net.dimension > a + 1 and coords[0] >> (net.dimension - a - 1) == coords[-1] >> (net.dimension - a - 1)
