from __future__ import annotations
"""Expected subtree-occupancy recurrences for the smallest levels.

Every step feeds on the exact value of the step before; only the reported
values are rounded half-up to two decimals. The recurrences divide only by
2, 4 and 8, so `Decimal` carries them exactly.
"""
from decimal import ROUND_HALF_UP, Decimal

from src.core.errors import ConfigError
from src.core.types import AppendixRow

# proof-level constants; printed next to the tables, never used as gates
HYPOTHESIS_CONSTANTS = {
    "h1": 0.999,
    "h2": 0.99,
    "h3": 0.86,
    "h4": 0.52,
    "h5": 0.125,
}

MAX_STEPS = 8
_CENT = Decimal("0.01")


def _r(x: Decimal) -> float:
    return float(x.quantize(_CENT, rounding=ROUND_HALF_UP))


def _second_level(count: int) -> list[Decimal]:
    """E|S| one level above the leaves' parents, from t4 onwards."""
    values = [Decimal("3.5")]
    while len(values) < count:
        values.append(2 + values[-1] / 2)
    return values


def appendix_recurrence(dimension: int, d: int, steps: int) -> list[AppendixRow]:
    if not 1 <= steps <= MAX_STEPS:
        raise ConfigError(f"steps must be in [1, {MAX_STEPS}], got {steps}")
    depth = dimension - d
    if depth not in (1, 2, 3) or d < 0:
        raise ConfigError(f"level {d} must be one of N−1, N−2, N−3 for N={dimension}")

    if depth == 1:
        return [AppendixRow(time=i, expected_size=2.0, expected_tilde=None) for i in range(1, steps + 1)]

    a = _second_level(steps + 2)
    if depth == 2:
        return [AppendixRow(time=4 + i, expected_size=_r(a[i]), expected_tilde=None) for i in range(steps)]

    # a[k] is the level N−2 value at time 4 + k
    rows: list[AppendixRow] = []
    b = a[1] + Decimal("0.75") * Decimal("0.5") + (a[1] - 2) / 2
    e = Decimal("0.5") / 4 * (1 - Decimal(1) / 8)
    for i in range(steps):
        rows.append(AppendixRow(time=5 + i, expected_size=_r(b), expected_tilde=_r(e)))
        nxt = a[i + 2]
        e = e + (b - nxt) / 4 - e / 8
        b = nxt + Decimal("0.75") * (b - nxt) + (nxt - 2) / 2
    return rows
