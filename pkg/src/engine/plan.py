from __future__ import annotations
"""Transformation plans and their CONGEST cost accounting.

A plan is a list of (node, old, new) moves plus the messages that realise
them, grouped into stages that run one after another:

  broadcast     binomial tree from a root over a subtree (k rounds, 2^k − 1 sends)
  convergecast  the same tree reversed
  move          every moved node sends one link-acquisition message to its
                new coordinate; sends are routed on bit-fixing paths and
                scheduled so no link carries two messages in one round
  exchange      sequential point-to-point sends (request and acknowledgement)

Rounds of a plan are the sum of its stage makespans. Message records keep the
round a send starts in, relative to the plan.
"""
from dataclasses import dataclass, field
from typing import Any, Sequence

from src.core.errors import StateCorruption
from src.core.types import MessageRecord
from src.hypercube.coordinates import SubtreeRef, bit_fixing_path

Move = tuple[int, int, int]


@dataclass
class TransformPlan:
    phase: str
    moves: list[Move] = field(default_factory=list)
    rounds: int = 0
    messages: int = 0
    message_log: list[MessageRecord] = field(default_factory=list)
    diagnostics: dict[str, Any] = field(default_factory=dict)

    @property
    def is_empty(self) -> bool:
        return not self.moves and self.rounds == 0

    def add_stage(self, records: Sequence[MessageRecord], rounds: int) -> None:
        """Append a stage whose record rounds are 1-based within the stage."""
        for rec in records:
            self.message_log.append({**rec, "round": rec["round"] + self.rounds})
        self.rounds += rounds
        self.messages += len(records)

    def charge(self, rounds: int, messages: int) -> None:
        """Account a protocol step whose individual sends are not scheduled here."""
        self.rounds += rounds
        self.messages += messages

    def extend(self, other: "TransformPlan") -> None:
        """Append another plan's stages (used when one phase runs a sub-plan)."""
        self.add_stage(other.message_log, other.rounds)
        self.moves.extend(other.moves)


def check_partial_permutation(moves: Sequence[Move]) -> None:
    olds = [m[1] for m in moves]
    news = [m[2] for m in moves]
    if len(set(olds)) != len(olds) or set(olds) != set(news) or len(set(news)) != len(news):
        raise StateCorruption("plan moves do not form a partial permutation")


def broadcast_stage(subtree: SubtreeRef, root: int, fields: dict[str, int]) -> tuple[list[MessageRecord], int]:
    """Binomial-tree broadcast from `root` over `subtree`, one tree level per round."""
    N = subtree.dimension
    informed = [root]
    records: list[MessageRecord] = []
    rounds = N - subtree.level
    for r, bit in enumerate(range(subtree.level + 1, N + 1), start=1):
        mask = 1 << (N - bit)
        sent = [c ^ mask for c in informed]
        records.extend({"round": r, "src": c, "dst": c ^ mask, "fields": dict(fields)} for c in informed)
        informed.extend(sent)
    return records, rounds


def convergecast_stage(
    subtree: SubtreeRef, root: int, fields: dict[str, int]
) -> tuple[list[MessageRecord], int]:
    """Aggregation towards `root`: the broadcast tree with every send reversed."""
    down, rounds = broadcast_stage(subtree, root, fields)
    return [
        {"round": rounds - rec["round"] + 1, "src": rec["dst"], "dst": rec["src"], "fields": rec["fields"]}
        for rec in down
    ], rounds


def _links(path: list[int]) -> list[tuple[int, int]]:
    return [tuple(sorted(pair)) for pair in zip(path, path[1:])]


def move_stage(dimension: int, moves: Sequence[Move]) -> tuple[list[MessageRecord], int]:
    """Greedy link scheduling of one message per moved node.

    Longest paths go first; each send starts at the earliest round from which
    its whole path is free hop after hop.
    """
    busy: set[tuple[int, int, int]] = set()
    records: list[MessageRecord] = []
    makespan = 0
    order = sorted(
        (m for m in moves if m[1] != m[2]),
        key=lambda m: (-(m[1] ^ m[2]).bit_count(), m[1]),
    )
    for node, old, new in order:
        links = _links(bit_fixing_path(old, new, dimension))
        start = 1
        while any((start + k, *link) in busy for k, link in enumerate(links)):
            start += 1
        for k, link in enumerate(links):
            busy.add((start + k, *link))
        makespan = max(makespan, start + len(links) - 1)
        records.append({"round": start, "src": old, "dst": new, "fields": {"node": node, "target": new}})
    return records, makespan


def exchange_stage(dimension: int, pairs: Sequence[tuple[int, int]], fields: dict[str, int]) -> tuple[list[MessageRecord], int]:
    """Each pair sends a request and gets an acknowledgement, pairs one after another."""
    records: list[MessageRecord] = []
    clock = 0
    for a, b in pairs:
        hops = (a ^ b).bit_count()
        if hops == 0:
            continue
        records.append({"round": clock + 1, "src": a, "dst": b, "fields": dict(fields)})
        records.append({"round": clock + hops + 1, "src": b, "dst": a, "fields": dict(fields)})
        clock += 2 * hops
    return records, clock


def place_blocks(sequence: Sequence[int], blocks: Sequence[tuple[Sequence[int], int]]) -> list[int]:
    """Rearrange `sequence` so each block of nodes sits contiguously at its target offset.

    Nodes outside the blocks keep their offset unless a block lands on it;
    those displaced nodes fill the vacated offsets in their previous order.
    """
    width = len(sequence)
    result: list[int | None] = [None] * width
    placed: set[int] = set()
    for nodes, offset in blocks:
        if offset < 0 or offset + len(nodes) > width:
            raise StateCorruption(f"block of {len(nodes)} does not fit at offset {offset}")
        for k, x in enumerate(nodes):
            if result[offset + k] is not None or x in placed:
                raise StateCorruption("placed blocks overlap")
            result[offset + k] = x
            placed.add(x)
    displaced = []
    for pos, x in enumerate(sequence):
        if x in placed:
            continue
        if result[pos] is None:
            result[pos] = x
        else:
            displaced.append(x)
    free = [pos for pos, x in enumerate(result) if x is None]
    for pos, x in zip(free, displaced):
        result[pos] = x
    return result  # type: ignore[return-value]


def moves_between(start: int, before: Sequence[int], after: Sequence[int], coord_of: Sequence[int]) -> list[Move]:
    """Moves turning the node order `before` into `after` over coordinates start.."""
    return [
        (x, coord_of[x], start + pos)
        for pos, x in enumerate(after)
        if before[pos] != x
    ]
