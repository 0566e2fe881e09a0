from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.core.errors import SelectionError, StateCorruption
from src.engine.geometry import ring, ring_level
from src.engine.plan import (
    TransformPlan,
    broadcast_stage,
    check_partial_permutation,
    convergecast_stage,
    exchange_stage,
    move_stage,
    moves_between,
    place_blocks,
)
from src.engine.selection import approx_lth_largest
from src.engine.units import DisjointSets
from src.hypercube.coordinates import SubtreeRef
from src.sim.audit import audit_messages


def test_broadcast_reaches_the_subtree_in_one_round_per_level():
    records, rounds = broadcast_stage(SubtreeRef(0, 0, 3), 5, {"x": 1})
    assert rounds == 3
    assert len(records) == 7
    assert {r["dst"] for r in records} | {5} == set(range(8))
    assert audit_messages(records, 3) == []


def test_convergecast_sends_once_from_every_non_root():
    records, rounds = convergecast_stage(SubtreeRef(1, 1, 3), 4, {"size": 3})
    assert rounds == 2
    assert sorted(r["src"] for r in records) == [5, 6, 7]
    assert max(r["round"] for r in records) == 2


def test_reversed_cube_moves_are_scheduled_without_overload():
    moves = [(c, c, 7 - c) for c in range(8)]
    records, makespan = move_stage(3, moves)
    assert len(records) == 8
    assert makespan >= 3
    assert audit_messages(records, 3) == []


def test_exchange_runs_pairs_sequentially():
    records, rounds = exchange_stage(3, [(0, 7), (1, 1), (2, 3)], {"server": 0})
    assert rounds == 2 * 3 + 2 * 1
    assert len(records) == 4
    assert [r["round"] for r in records] == [1, 4, 7, 8]


def test_plan_stages_are_offset_on_one_clock():
    plan = TransformPlan("inter")
    assert plan.is_empty
    plan.add_stage([{"round": 1, "src": 0, "dst": 1, "fields": {}}], 2)
    plan.add_stage([{"round": 1, "src": 1, "dst": 0, "fields": {}}], 1)
    plan.charge(2, 6)
    assert [r["round"] for r in plan.message_log] == [1, 3]
    assert (plan.rounds, plan.messages) == (5, 8)
    assert not plan.is_empty


def test_partial_permutation_check():
    check_partial_permutation([(0, 0, 1), (1, 1, 0)])
    with pytest.raises(StateCorruption):
        check_partial_permutation([(0, 0, 1)])


def test_place_blocks_moves_only_displaced_nodes():
    assert place_blocks(list(range(8)), [([5, 6], 0)]) == [5, 6, 2, 3, 4, 0, 1, 7]
    assert place_blocks([3, 2, 1], []) == [3, 2, 1]
    with pytest.raises(StateCorruption):
        place_blocks(list(range(4)), [([1], 0), ([2], 0)])
    with pytest.raises(StateCorruption):
        place_blocks(list(range(8)), [([1, 2], 7)])


def test_moves_between():
    assert moves_between(4, [0, 1, 2], [1, 0, 2], [4, 5, 6]) == [(1, 5, 4), (0, 4, 5)]


def test_selection_returns_the_lth_largest_input():
    result = approx_lth_largest([9, 7, 7, 3], 2)
    assert result.value == 7
    assert (result.rounds, result.messages) == (2, 6)
    assert approx_lth_largest([9, 7, 7, 3], 4).value == 3
    assert approx_lth_largest([4.5], 1).messages == 0


@given(st.lists(st.integers(0, 50), min_size=1, max_size=30), st.data())
def test_selection_matches_sorting(values, data):
    L = data.draw(st.integers(1, len(values)))
    assert approx_lth_largest(values, L).value == sorted(values, reverse=True)[L - 1]


def test_selection_rejects_bad_input():
    with pytest.raises(SelectionError):
        approx_lth_largest([], 1)
    with pytest.raises(SelectionError):
        approx_lth_largest([1, 2], 3)


def test_disjoint_sets():
    sets = DisjointSets(range(6))
    sets.union_all([0, 2, 4])
    assert sets.union(1, 3)
    assert not sets.union(4, 0)
    assert sorted(sorted(c) for c in sets.classes()) == [[0, 2, 4], [1, 3], [5]]


def test_rings_partition_the_cube_around_an_anchor(net3):
    assert list(ring(net3, 0, 3).coordinates()) == [1]
    assert list(ring(net3, 0, 1).coordinates()) == [4, 5, 6, 7]
    assert ring_level(0, 4, 3) == 1
    assert ring_level(0, 0, 3) == 4


@settings(max_examples=30, deadline=None)
@given(st.permutations(list(range(16))))
def test_any_permutation_schedules_cleanly(perm):
    moves = [(c, c, perm[c]) for c in range(16)]
    records, _ = move_stage(4, moves)
    assert len(records) == sum(1 for c in range(16) if perm[c] != c)
    assert [v for v in audit_messages(records, 4) if v["kind"] == "link_overload"] == []
