from __future__ import annotations
"""Subtree leap: bring v's level-m subtree next to u when no relative pair sits lower."""
from src.hypercube.network import NetworkState
from src.nodestate.state import GroupTable

from .geometry import alpha, ring
from .plan import TransformPlan, broadcast_stage, move_stage


def subtree_leap(net: NetworkState, table: GroupTable, u: int, v: int) -> TransformPlan:
    """Swap s^v_m with ~s^u_m, m = min(l(u), l(v)), when α < m < N.

    Each coordinate keeps its last N − m bits, so every group at level ≥ m
    travels intact. Levels below m stay with the coordinates.
    """
    N = net.dimension
    plan = TransformPlan("leap")
    a = alpha(net, u, v)
    m = min(table.l_level(net, u), table.l_level(net, v))
    plan.diagnostics["m"] = m
    if not a < m < N:
        return plan
    src = net.subtree(v, m)
    dst = ring(net, u, m)
    if src == dst:
        return plan

    moves = [(net.node_at[c], c, dst.start + c - src.start) for c in src.coordinates()]
    moves += [(net.node_at[c], c, src.start + c - dst.start) for c in dst.coordinates()]

    cu, cv = net.coord_of[u], net.coord_of[v]
    bridge = cu ^ (1 << (N - m))
    fields = {"u": cu, "v": cv, "level": m}
    plan.add_stage([{"round": 1, "src": cu, "dst": bridge, "fields": dict(fields)}], 1)
    left, rounds = broadcast_stage(src, cv, fields)
    right, _ = broadcast_stage(dst, bridge, fields)
    plan.add_stage(left + right, rounds)
    plan.add_stage(*move_stage(N, moves))
    plan.moves = moves

    table.apply_moves(net, moves, region_level=m)
    table.normalize(net)
    return plan
