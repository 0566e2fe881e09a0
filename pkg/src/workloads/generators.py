from __future__ import annotations
"""Request-sequence generators.

Every generator returns a list of `TraceRecord`s with t = 1, 2, … and u ≠ v.
Random generators take a seed and draw from `numpy.random.default_rng`, so a
(params, seed) pair always yields the same trace.
"""
from typing import Iterable, Sequence

import numpy as np

from src.core.errors import ConfigError, TraceOrderError
from src.core.types import TraceRecord


def _records(pairs: Iterable[tuple[int, int]]) -> list[TraceRecord]:
    return [TraceRecord(t=t, u=int(u), v=int(v)) for t, (u, v) in enumerate(pairs, start=1)]


def gen_uniform(n: int, m: int, seed: int) -> list[TraceRecord]:
    """m i.i.d. ordered pairs, uniform over all u ≠ v."""
    if n < 2:
        raise ConfigError(f"need at least two nodes, got n={n}")
    rng = np.random.default_rng(seed)
    u = rng.integers(n, size=m)
    v = rng.integers(n - 1, size=m)
    v = v + (v >= u)
    return _records(zip(u, v))


def gen_repeating(pattern: Sequence[Sequence[int]], repeats: int) -> list[TraceRecord]:
    if not pattern:
        raise ConfigError("repeating workload needs a nonempty pattern")
    for pair in pattern:
        if len(pair) != 2 or pair[0] == pair[1]:
            raise TraceOrderError(f"malformed pattern entry {list(pair)}")
    return _records([tuple(pair) for _ in range(repeats) for pair in pattern])


def zipf_weights(count: int, s: float) -> np.ndarray:
    """Normalized Zipf(s) probabilities over ranks 1..count."""
    weights = 1.0 / np.arange(1, count + 1) ** s
    return weights / weights.sum()


def gen_zipf(n: int, m: int, s: float, seed: int) -> list[TraceRecord]:
    """Uniform source; destination rank ~ Zipf(s) over one random ordering of partners."""
    if s <= 0:
        raise ConfigError(f"zipf exponent must be positive, got {s}")
    if n < 2:
        raise ConfigError(f"need at least two nodes, got n={n}")
    rng = np.random.default_rng(seed)
    order = rng.permutation(n)
    position = np.empty(n, dtype=int)
    position[order] = np.arange(n)
    u = rng.integers(n, size=m)
    rank = rng.choice(n - 1, size=m, p=zipf_weights(n - 1, s))
    # skip the source's own slot in the ordering
    v = order[rank + (rank >= position[u])]
    return _records(zip(u, v))


def example_trace() -> list[TraceRecord]:
    """Repeating u–v communication with four other nodes in between.

    Nodes: u=0, v=1, e=2, a=3, k=4, b=5, c=6, d=7. Just before the final
    request, the working-set number of (u, v) is 5.
    """
    return [
        TraceRecord(t=1, u=0, v=1),
        TraceRecord(t=2, u=0, v=2),
        TraceRecord(t=3, u=3, v=4),
        TraceRecord(t=4, u=2, v=3),
        TraceRecord(t=5, u=5, v=6),
        TraceRecord(t=6, u=6, v=7),
        TraceRecord(t=7, u=0, v=1),
    ]


def as_single_server(trace: Iterable[TraceRecord], server: int) -> list[TraceRecord]:
    """Rewrite every request so the server is one endpoint; the other endpoint is kept."""
    out = []
    for rec in trace:
        u, v = rec["u"], rec["v"]
        if u == server:
            client = v
        elif v == server:
            client = u
        else:
            client = v
        out.append(TraceRecord(t=rec["t"], u=server, v=client))
    return out
