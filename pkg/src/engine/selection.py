from __future__ import annotations
"""Distributed order-statistic selection used by timestamp rule T1.

The nodes of a bucket pad themselves to a power of two, aggregate sample
ranks up a binary tree and push the answer back down. The returned value is
the exact L-th largest of the inputs; rounds and messages are what the
tree-based protocol is charged.
"""
from dataclasses import dataclass

import numpy as np

from src.core.errors import SelectionError
from src.workset.oracle import log2_ceil


@dataclass(frozen=True)
class SelectionResult:
    value: float
    rounds: int
    messages: int


def approx_lth_largest(values: list[float], L: int) -> SelectionResult:
    if not values:
        raise SelectionError("selection over an empty bucket")
    if not 1 <= L <= len(values):
        raise SelectionError(f"L={L} outside [1, {len(values)}]")
    arr = np.asarray(values, dtype=float)
    pos = len(arr) - L
    value = values[int(np.argpartition(arr, pos)[pos])]
    padded = 1 << log2_ceil(len(values))
    return SelectionResult(value=value, rounds=log2_ceil(len(values)), messages=2 * (padded - 1))
