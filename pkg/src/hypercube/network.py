from __future__ import annotations
"""Network placement: the bijection node-id ↔ coordinate for a fixed N.

`NetworkState` is the one mutable object the transformations rewrite. Node
ids are 0..2^N−1; at t=0 node i sits at coordinate i unless a placement is
supplied.
"""
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from src.core.errors import InvalidRequest, StateCorruption

from .coordinates import Coordinate, SubtreeRef, bit_fixing_path, common_prefix_length, subtree_of


@dataclass
class NetworkState:
    dimension: int
    node_at: list[int] = field(default_factory=list)
    coord_of: list[int] = field(default_factory=list)

    @classmethod
    def identity(cls, dimension: int) -> "NetworkState":
        n = 1 << dimension
        return cls(dimension, list(range(n)), list(range(n)))

    @classmethod
    def from_placement(cls, dimension: int, placement: Mapping[int, int]) -> "NetworkState":
        """Build from {node: coordinate}; every coordinate must be used once."""
        n = 1 << dimension
        node_at = [-1] * n
        coord_of = [-1] * n
        for node, coord in placement.items():
            if not (0 <= node < n and 0 <= coord < n) or node_at[coord] != -1:
                raise StateCorruption(f"placement is not a bijection at node {node}")
            node_at[coord] = node
            coord_of[node] = coord
        if -1 in node_at:
            raise StateCorruption("placement leaves coordinates empty")
        return cls(dimension, node_at, coord_of)

    @property
    def size(self) -> int:
        return 1 << self.dimension

    def check_node(self, node: int) -> None:
        if not 0 <= node < self.size:
            raise InvalidRequest(f"unknown node {node}")

    def coordinate(self, node: int) -> Coordinate:
        self.check_node(node)
        return Coordinate(self.coord_of[node], self.dimension)

    def subtree(self, node: int, level: int) -> SubtreeRef:
        return subtree_of(self.coord_of[node], level, self.dimension)

    def nodes_in(self, coords: Iterable[int]) -> list[int]:
        return [self.node_at[c] for c in coords]

    def is_bijection(self) -> bool:
        if sorted(self.node_at) != list(range(self.size)):
            return False
        return all(self.node_at[c] == node for node, c in enumerate(self.coord_of))

    def apply_moves(self, moves: Iterable[tuple[int, int, int]]) -> None:
        """Apply (node, old, new) moves atomically.

        The moves must form a partial permutation: old coordinates distinct,
        new coordinates distinct, and the vacated set equal to the filled set.
        """
        moves = list(moves)
        olds = [old for _, old, _ in moves]
        news = [new for _, _, new in moves]
        if len(set(olds)) != len(olds) or len(set(news)) != len(news) or set(olds) != set(news):
            raise StateCorruption("moves do not form a partial permutation")
        for node, old, _ in moves:
            if self.coord_of[node] != old:
                raise StateCorruption(f"node {node} is not at coordinate {old}")
        for node, _, new in moves:
            self.coord_of[node] = new
            self.node_at[new] = node

    def copy(self) -> "NetworkState":
        return NetworkState(self.dimension, list(self.node_at), list(self.coord_of))


def _check_pair(net: NetworkState, u: int, v: int) -> None:
    net.check_node(u)
    net.check_node(v)
    if u == v:
        raise InvalidRequest(f"request names node {u} twice")


def tree_distance(net: NetworkState, u: int, v: int) -> int:
    """N − L_lca(u, v), the depth of the subtree that separates u and v."""
    _check_pair(net, u, v)
    return net.dimension - common_prefix_length(net.coord_of[u], net.coord_of[v], net.dimension)


def route(net: NetworkState, u: int, v: int) -> list[Coordinate]:
    """Bit-fixing path from u to v, differing bits fixed in ascending bit index."""
    _check_pair(net, u, v)
    hops = bit_fixing_path(net.coord_of[u], net.coord_of[v], net.dimension)
    return [Coordinate(c, net.dimension) for c in hops]


def subtree_members(net: NetworkState, s: SubtreeRef) -> set[int]:
    return set(net.nodes_in(s.coordinates()))
