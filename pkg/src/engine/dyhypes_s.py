from __future__ import annotations
"""Single-server variant: the client is pulled next to a fixed server by random swaps.

Nodes keep no algorithm state. For d = α+1 … N−1 the client swaps with a
uniformly random node of ~s^server_{d+1}, so after each swap it shares one more
prefix bit with the server and ends on the server's sibling leaf.
"""
from typing import Collection, Optional

import numpy as np

from src.core.errors import InvalidRequest
from src.core.types import RequestMetrics
from src.hypercube.network import NetworkState, route, tree_distance
from src.workset.graph import CommGraph
from src.workset.oracle import log2_ceil, ws_number

from .dyhypes import check_time
from .geometry import alpha, ring
from .plan import TransformPlan, exchange_stage


def serve_request_ss(
    net: NetworkState,
    server: int,
    client: int,
    rng: np.random.Generator,
    t: int,
    graph: Optional[CommGraph] = None,
    plans: Optional[list[TransformPlan]] = None,
) -> RequestMetrics:
    graph = graph if graph is not None else CommGraph()
    a = alpha(net, server, client)
    check_time(graph, t)
    T = ws_number(graph, net, t, server, client).T
    hops = len(route(net, server, client)) - 1

    plan = TransformPlan("swap")
    exchanges = []
    for d in range(a + 1, net.dimension):
        target = ring(net, server, d + 1)
        r = target.start + int(rng.integers(target.size))
        c = net.coord_of[client]
        swap = [(client, c, r), (net.node_at[r], r, c)]
        net.apply_moves(swap)
        plan.moves.extend(swap)
        exchanges.append((c, r))
    plan.add_stage(*exchange_stage(net.dimension, exchanges, {"server": net.coord_of[server]}))
    graph.record(t, server, client)

    if plans is not None and not plan.is_empty:
        plans.append(plan)
    return RequestMetrics(
        t=t,
        u=server,
        v=client,
        hops=hops,
        rounds=plan.rounds,
        messages=plan.messages,
        ws=T,
        log_ws=log2_ceil(T),
        cost=hops + plan.rounds,
        invariant_ok=net.is_bijection() and tree_distance(net, server, client) == 1,
        alpha=a,
        phases=[] if plan.is_empty else ["swap"],
        k_order=None,
        released_pairs=0,
    )


class SingleServerSwapper:
    name = "dyhypes_s"

    def __init__(self, dimension: int, server: int, seed: int = 0, net: Optional[NetworkState] = None) -> None:
        self.net = net or NetworkState.identity(dimension)
        self.net.check_node(server)
        self.server = server
        self.graph = CommGraph()
        self.rng = np.random.default_rng(seed)
        self.last_plans: list[TransformPlan] = []

    def serve(self, t: int, u: int, v: int) -> RequestMetrics:
        """Serve a request that names the server on either side."""
        if u == self.server:
            client = v
        elif v == self.server:
            client = u
        else:
            raise InvalidRequest(f"request ({u}, {v}) does not involve server {self.server}")
        self.last_plans = []
        return serve_request_ss(self.net, self.server, client, self.rng, t, self.graph, self.last_plans)

    def check_invariants(self, checks: Optional[Collection[str]] = None) -> list[str]:
        """Only the placement exists here, so only the bijection check applies."""
        if checks is not None and "bijection" not in checks:
            return []
        return [] if self.net.is_bijection() else ["placement is not a bijection"]

    def state_bits(self) -> int:
        return 0

    def snapshot(self) -> dict:
        return {"dimension": self.net.dimension, "placement": list(self.net.coord_of), "server": self.server}
