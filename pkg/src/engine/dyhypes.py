from __future__ import annotations
"""DyHypes request handling: route, then leap → inter-group → intra-group.

Phases run one after another against the live placement; each one leaves
the group table normalized, so the structural checks can run between phases.
Rule T3 stamps the communicants last.
"""
from typing import Collection, Optional

import numpy as np

from src.core.errors import TraceOrderError
from src.core.types import RequestMetrics
from src.hypercube.network import NetworkState, route, tree_distance
from src.nodestate.checks import all_violations
from src.nodestate.state import GroupTable
from src.workset.graph import CommGraph
from src.workset.oracle import log2_ceil, ws_number

from .geometry import alpha
from .inter_group import inter_group_transform
from .intra_group import K_ORDER_BOUND, intra_group_transform, stamp_communicants
from .leap import subtree_leap
from .plan import TransformPlan


def check_time(graph: CommGraph, t: int) -> None:
    last = graph.last_time
    if last is not None and t <= last:
        raise TraceOrderError(f"time {t} does not follow {last}")


def serve_request(
    net: NetworkState,
    table: GroupTable,
    graph: CommGraph,
    rng: np.random.Generator,
    t: int,
    u: int,
    v: int,
    check_phases: bool = True,
    plans: Optional[list[TransformPlan]] = None,
    checks: Optional[Collection[str]] = None,
) -> RequestMetrics:
    """Serve (t, u, v) and return its metrics; raises InvalidRequest for bad pairs."""
    a = alpha(net, u, v)
    check_time(graph, t)
    T = ws_number(graph, net, t, u, v).T
    hops = len(route(net, u, v)) - 1

    executed: list[TransformPlan] = []
    released_before = table.released
    healthy = True
    k_order = None
    for phase in ("leap", "inter", "intra"):
        if phase == "leap":
            plan = subtree_leap(net, table, u, v)
        elif phase == "inter":
            plan = inter_group_transform(net, table, u, v, rng)
        else:
            plan = intra_group_transform(net, table, u, v, t, rng)
            k_order = plan.diagnostics.get("k_order")
            if k_order is not None and k_order < K_ORDER_BOUND:
                healthy = False
        if plan.is_empty:
            continue
        executed.append(plan)
        if check_phases and all_violations(net, table.states, checks):
            healthy = False

    stamp_communicants(table, u, v, t)
    table.normalize(net)
    graph.record(t, u, v)
    if check_phases and all_violations(net, table.states, checks):
        healthy = False
    healthy = healthy and tree_distance(net, u, v) == 1

    if plans is not None:
        plans.extend(executed)
    rounds = sum(p.rounds for p in executed)
    return RequestMetrics(
        t=t,
        u=u,
        v=v,
        hops=hops,
        rounds=rounds,
        messages=sum(p.messages for p in executed),
        ws=T,
        log_ws=log2_ceil(T),
        cost=hops + rounds,
        invariant_ok=healthy,
        alpha=a,
        phases=[p.phase for p in executed],
        k_order=k_order,
        released_pairs=table.released - released_before,
    )


class DyHypesServer:
    """Owns one network, its group table and communication graph."""

    name = "dyhypes"

    def __init__(
        self,
        dimension: int,
        seed: int = 0,
        net: Optional[NetworkState] = None,
        table: Optional[GroupTable] = None,
        check_phases: bool = True,
        checks: Optional[Collection[str]] = None,
    ) -> None:
        self.net = net or NetworkState.identity(dimension)
        self.table = table or GroupTable.initial(self.net)
        self.graph = CommGraph()
        self.rng = np.random.default_rng(seed)
        self.check_phases = check_phases
        self.checks = checks
        self.last_plans: list[TransformPlan] = []

    def serve(self, t: int, u: int, v: int) -> RequestMetrics:
        self.last_plans = []
        return serve_request(
            self.net, self.table, self.graph, self.rng, t, u, v, self.check_phases, self.last_plans, self.checks
        )

    def check_invariants(self, checks: Optional[Collection[str]] = None) -> list[str]:
        return all_violations(self.net, self.table.states, checks)

    def state_bits(self) -> int:
        return self.table.state_bits()

    def snapshot(self) -> dict:
        return self.table.to_snapshot(self.net)
