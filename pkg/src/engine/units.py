from __future__ import annotations
"""Disjoint sets over node ids: the placement units of the intra-group phase."""
from collections import defaultdict
from typing import Iterable


class DisjointSets:
    """Union-find with path compression and union by rank."""

    def __init__(self, items: Iterable[int]):
        self.parent = {x: x for x in items}
        self.rank = dict.fromkeys(self.parent, 0)

    def find(self, x: int) -> int:
        if self.parent[x] != x:
            self.parent[x] = self.find(self.parent[x])
        return self.parent[x]

    def union(self, x: int, y: int) -> bool:
        xroot, yroot = self.find(x), self.find(y)
        if xroot == yroot:
            return False
        if self.rank[xroot] < self.rank[yroot]:
            xroot, yroot = yroot, xroot
        self.parent[yroot] = xroot
        if self.rank[xroot] == self.rank[yroot]:
            self.rank[xroot] += 1
        return True

    def union_all(self, items: Iterable[int]) -> None:
        items = list(items)
        for y in items[1:]:
            self.union(items[0], y)

    def classes(self) -> list[list[int]]:
        found: dict[int, list[int]] = defaultdict(list)
        for x in self.parent:
            found[self.find(x)].append(x)
        return list(found.values())
