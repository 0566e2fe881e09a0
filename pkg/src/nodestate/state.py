from __future__ import annotations
"""Per-node, per-level algorithm state and the table that keeps it coherent.

For every node x and level d ∈ [0, N−1] we store the level-d group id, the
T- and K-timestamps, the counter and next-T used by timestamp rule T1, the
group's coordinate range [S, E], and the relative-group ranges (𝒮, ℰ) and
(~𝒮, ~ℰ) when x's level-d subtree holds a registered d-relative pair.
Level N is implicit: T^x_N = K^x_N = +∞.

Groups are contiguous coordinate intervals inside one level-d subtree. When a
level-(d+1) group ends up in both halves of a level-d subtree, normalization
splits it and the two pieces become a d-relative pair, whether or not they
touch. Pairs are tracked by that ancestry and dropped once either piece
leaves the subtree. Invariant I (one pair per subtree) is enforced as a
separate step: the oldest pair of a subtree stays, later ones are released
as plain groups and counted in `released`.
"""
from collections import defaultdict
from dataclasses import asdict, dataclass, field
from math import inf
from typing import Any, Iterable

from src.core.errors import StateCorruption
from src.hypercube.coordinates import SubtreeRef, common_prefix_length, subtree_of
from src.hypercube.network import NetworkState


@dataclass
class LevelState:
    group: int
    T: float = 0
    K: float = 0
    counter: int = 0
    next_T: float = 0
    start: int = 0
    end: int = 0
    rel_start: int | None = None
    rel_end: int | None = None
    peer_start: int | None = None
    peer_end: int | None = None

    @property
    def size(self) -> int:
        return self.end - self.start + 1

    @property
    def relative(self) -> tuple[int, int] | None:
        return None if self.rel_start is None else (self.rel_start, self.rel_end)

    @property
    def peer(self) -> tuple[int, int] | None:
        return None if self.peer_start is None else (self.peer_start, self.peer_end)


@dataclass
class NodeLevelState:
    node: int
    levels: list[LevelState]

    def T(self, d: int) -> float:
        return inf if d >= len(self.levels) else self.levels[d].T

    def K(self, d: int) -> float:
        return inf if d >= len(self.levels) else self.levels[d].K


@dataclass(frozen=True)
class RelativePair:
    """Two level-(level+1) pieces of one split group, `left` in the lower half of the subtree."""

    level: int
    left: int
    right: int


# values that stay with a coordinate when a phase works above their level
_SLOT_FIELDS = ("group", "T", "K", "counter", "next_T")


@dataclass
class GroupTable:
    dimension: int
    states: list[NodeLevelState]
    relatives: list[RelativePair] = field(default_factory=list)
    next_id: int = 0
    released: int = 0
    _intervals: dict[tuple[int, int], tuple[int, int]] = field(default_factory=dict, repr=False)

    @classmethod
    def initial(cls, net: NetworkState) -> "GroupTable":
        """Every node a singleton at every level, G^x_d = x, all timestamps 0."""
        states = [
            NodeLevelState(x, [LevelState(group=x) for _ in range(net.dimension)])
            for x in range(net.size)
        ]
        table = cls(net.dimension, states, [], net.size)
        table.normalize(net)
        return table

    def fresh_id(self) -> int:
        self.next_id += 1
        return self.next_id - 1

    # --- queries ---

    def level(self, x: int, d: int) -> LevelState:
        return self.states[x].levels[d]

    def members(self, net: NetworkState, x: int, d: int) -> list[int]:
        ls = self.level(x, d)
        return net.nodes_in(range(ls.start, ls.end + 1))

    def group_size(self, x: int, d: int) -> int:
        return 1 if d >= self.dimension else self.level(x, d).size

    def same_group(self, x: int, y: int, d: int) -> bool:
        return self.level(x, d).group == self.level(y, d).group

    def pair_subtree(self, pair: RelativePair) -> SubtreeRef:
        start = self._interval(pair.level + 1, pair.left)
        return subtree_of(start[0], pair.level, self.dimension)

    def pairs_touching(self, net: NetworkState, nodes: Iterable[int]) -> list[RelativePair]:
        """Registered pairs with at least one piece holding one of `nodes`."""
        wanted = set(nodes)
        found = []
        for pair in self.relatives:
            for gid in (pair.left, pair.right):
                s, e = self._interval(pair.level + 1, gid)
                if wanted.intersection(net.nodes_in(range(s, e + 1))):
                    found.append(pair)
                    break
        return found

    def pair_in(self, subtree: SubtreeRef) -> RelativePair | None:
        for pair in self.relatives:
            if pair.level == subtree.level and self.pair_subtree(pair) == subtree:
                return pair
        return None

    def piece_range(self, pair: RelativePair, gid: int) -> tuple[int, int]:
        return self._interval(pair.level + 1, gid)

    def l_level(self, net: NetworkState, x: int) -> int:
        """Lowest level e with a registered e-relative pair inside s^x_e (N if none)."""
        coord = net.coord_of[x]
        levels = [p.level for p in self.relatives if self.pair_subtree(p).contains(coord)]
        return min(levels, default=self.dimension)

    def g_level(self, x: int) -> int:
        """Highest level whose group is not a strict subset of any lower-level group."""
        levels = self.states[x].levels
        for g in range(self.dimension - 1, -1, -1):
            s, e = levels[g].start, levels[g].end
            strict = any(
                levels[d].start <= s and e <= levels[d].end and (levels[d].start, levels[d].end) != (s, e)
                for d in range(g)
            )
            if not strict:
                return g
        return 0

    # --- mutation ---

    def apply_moves(self, net: NetworkState, moves: list[tuple[int, int, int]], region_level: int) -> None:
        """Apply moves to the placement; levels below `region_level` stay with the slots."""
        carried = {}
        for node, _, new in moves:
            occupant = net.node_at[new]
            carried[node] = [
                {f: getattr(self.states[occupant].levels[d], f) for f in _SLOT_FIELDS}
                for d in range(region_level)
            ]
        net.apply_moves(moves)
        for node, values in carried.items():
            for d, vals in enumerate(values):
                for f, val in vals.items():
                    setattr(self.states[node].levels[d], f, val)

    def assign_group(self, nodes: Iterable[int], d: int, gid: int) -> None:
        for x in nodes:
            self.states[x].levels[d].group = gid

    def reunite(self, pair: RelativePair) -> None:
        """Give both pieces one id again; normalization re-splits if they still straddle."""
        d = pair.level + 1
        for x in self.states:
            if x.levels[d].group == pair.right:
                x.levels[d].group = pair.left
        self.relatives = [p for p in self.relatives if p != pair]

    def normalize(self, net: NetworkState, enforce: bool = True) -> int:
        """Re-derive intervals, pairs and shared timestamps; returns pairs released for Invariant I."""
        n, N = net.size, self.dimension
        new_pairs: list[RelativePair] = []
        self._intervals = {}
        for d in range(N):
            width = 1 << (N - d)
            gid = [self.states[net.node_at[c]].levels[d].group for c in range(n)]
            runs: dict[int, list[tuple[int, int]]] = defaultdict(list)
            c = 0
            while c < n:
                limit = (c // width + 1) * width - 1
                e = c
                while e < limit and gid[e + 1] == gid[c]:
                    e += 1
                runs[gid[c]].append((c, e))
                c = e + 1
            for g, spans in runs.items():
                ids = [g] * len(spans)
                if len(spans) > 1:
                    keep = max(range(len(spans)), key=lambda i: (spans[i][1] - spans[i][0], -i))
                    for i, (s, e) in enumerate(spans):
                        if i != keep:
                            ids[i] = self.fresh_id()
                            self.assign_group(net.nodes_in(range(s, e + 1)), d, ids[i])
                    if d >= 1:
                        for i in range(len(spans)):
                            for j in range(i + 1, len(spans)):
                                if common_prefix_length(spans[i][0], spans[j][0], N) == d - 1:
                                    new_pairs.append(RelativePair(d - 1, ids[i], ids[j]))
                for (s, e), i in zip(spans, ids):
                    self._intervals[(d, i)] = (s, e)
                    for x in net.nodes_in(range(s, e + 1)):
                        self.states[x].levels[d].start = s
                        self.states[x].levels[d].end = e
        self._validate_relatives(new_pairs)
        released = self.enforce_invariant_I() if enforce else 0
        self._share_timestamps(net)
        self._write_relative_ranges(net)
        return released

    def enforce_invariant_I(self) -> int:
        """Keep the oldest pair of every subtree, release the rest as plain groups."""
        seen: set[tuple[int, int]] = set()
        kept: list[RelativePair] = []
        for pair in self.relatives:
            where = (pair.level, self.pair_subtree(pair).start)
            if where in seen:
                continue
            seen.add(where)
            kept.append(pair)
        dropped = len(self.relatives) - len(kept)
        self.relatives = kept
        self.released += dropped
        return dropped

    # --- internals ---

    def _interval(self, d: int, gid: int) -> tuple[int, int]:
        try:
            return self._intervals[(d, gid)]
        except KeyError:
            raise StateCorruption(f"no level-{d} group with id {gid}") from None

    def _validate_relatives(self, new_pairs: list[RelativePair]) -> None:
        N = self.dimension
        kept: list[RelativePair] = []
        for pair in self.relatives + new_pairs:
            d = pair.level + 1
            left = self._intervals.get((d, pair.left))
            right = self._intervals.get((d, pair.right))
            if left is None or right is None:
                continue
            if left[0] > right[0]:
                pair, left, right = RelativePair(pair.level, pair.right, pair.left), right, left
            if pair not in kept and common_prefix_length(left[0], right[0], N) == pair.level:
                kept.append(pair)
        self.relatives = kept

    def _share_timestamps(self, net: NetworkState) -> None:
        for d in range(self.dimension):
            for (level, _), (s, e) in self._intervals.items():
                if level != d:
                    continue
                group = [self.states[x].levels for x in net.nodes_in(range(s, e + 1))]
                t_val = max(lv[d].T for lv in group)
                if d >= 1:
                    t_val = max(t_val, max(lv[d - 1].T for lv in group))
                    k_val = max(lv[d - 1].K for lv in group)
                for lv in group:
                    lv[d].T = t_val
                    if d >= 1:
                        lv[d - 1].K = k_val

    def _write_relative_ranges(self, net: NetworkState) -> None:
        for st in self.states:
            for lv in st.levels:
                lv.rel_start = lv.rel_end = lv.peer_start = lv.peer_end = None
        # the first pair of a subtree covers it whole; any later one only its own pieces
        covered: set[tuple[int, int]] = set()
        for pair in self.relatives:
            d = pair.level
            left = self._interval(d + 1, pair.left)
            right = self._interval(d + 1, pair.right)
            subtree = subtree_of(left[0], d, self.dimension)
            if (d, subtree.start) in covered:
                coords = [*range(left[0], left[1] + 1), *range(right[0], right[1] + 1)]
            else:
                covered.add((d, subtree.start))
                coords = subtree.coordinates()
            for c in coords:
                own, other = (left, right) if c < subtree.midpoint else (right, left)
                lv = self.states[net.node_at[c]].levels[d]
                lv.rel_start, lv.rel_end = own
                lv.peer_start, lv.peer_end = other

    # --- export ---

    def state_bits(self) -> int:
        """Largest per-node state size in bits (finite fields only)."""

        def bits(value: Any) -> int:
            if value is None or value == inf:
                return 1
            return max(1, int(value).bit_length())

        return max(
            sum(bits(getattr(lv, f)) for lv in st.levels for f in LevelState.__dataclass_fields__)
            for st in self.states
        )

    def to_snapshot(self, net: NetworkState) -> dict[str, Any]:
        def enc(value: Any) -> Any:
            return "inf" if value == inf else value

        return {
            "dimension": self.dimension,
            "placement": list(net.coord_of),
            "next_id": self.next_id,
            "released": self.released,
            "relatives": [asdict(p) for p in self.relatives],
            "states": [
                [{k: enc(v) for k, v in asdict(lv).items()} for lv in st.levels] for st in self.states
            ],
        }

    @classmethod
    def from_snapshot(cls, snapshot: dict[str, Any]) -> tuple["GroupTable", NetworkState]:
        def dec(value: Any) -> Any:
            return inf if value == "inf" else value

        N = snapshot["dimension"]
        net = NetworkState.from_placement(N, dict(enumerate(snapshot["placement"])))
        states = [
            NodeLevelState(x, [LevelState(**{k: dec(v) for k, v in lv.items()}) for lv in levels])
            for x, levels in enumerate(snapshot["states"])
        ]
        table = cls(
            N, states, [RelativePair(**p) for p in snapshot["relatives"]], snapshot["next_id"], snapshot.get("released", 0)
        )
        table._intervals = {}
        for st in states:
            for d, lv in enumerate(st.levels):
                table._intervals[(d, lv.group)] = (lv.start, lv.end)
        return table, net
