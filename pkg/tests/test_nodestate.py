from __future__ import annotations

import json

from src.hypercube.coordinates import SubtreeRef
from src.hypercube.network import NetworkState
from src.nodestate.checks import (
    GroupView,
    all_violations,
    contiguity_violations,
    group_view,
    invariant_I_check,
    relative_distance,
    relative_duality_violations,
    timestamp_monotonicity_violations,
)
from src.nodestate.state import GroupTable, RelativePair


def test_initial_table_is_all_singletons(net3, table3):
    assert table3.relatives == []
    assert all_violations(net3, table3.states) == []
    assert all(table3.group_size(x, d) == 1 for x in range(8) for d in range(4))
    assert table3.l_level(net3, 0) == 3
    assert table3.g_level(0) == 2
    assert group_view(net3, table3.states, 5, 1) == GroupView(1, 5, 5, None)


def test_group_across_a_midpoint_becomes_a_relative_pair(net3, table3):
    table3.assign_group([3, 4], 1, 99)
    table3.normalize(net3)

    assert table3.relatives == [RelativePair(0, 99, 8)]
    assert table3.level(4, 1).group == 8
    assert table3.level(0, 0).relative == (3, 3)
    assert table3.level(0, 0).peer == (4, 4)
    assert table3.level(7, 0).relative == (4, 4)
    assert table3.pair_in(SubtreeRef(0, 0, 3)) == RelativePair(0, 99, 8)
    assert table3.l_level(net3, 0) == 0
    assert invariant_I_check(net3, table3.states) == []
    assert all_violations(net3, table3.states) == []


def test_reunite_drops_the_pair(net3, table3):
    table3.assign_group([3, 4], 1, 99)
    table3.normalize(net3)
    pair = table3.relatives[0]
    table3.reunite(pair)
    assert table3.relatives == []
    assert table3.level(4, 1).group == 99


def test_group_timestamps_are_shared_and_monotone(net3, table3):
    table3.level(0, 2).T = 5
    table3.assign_group([0, 1], 2, 0)
    table3.normalize(net3)
    assert table3.level(1, 2).T == 5
    assert timestamp_monotonicity_violations(table3.states) == []


def test_apply_moves_keeps_low_levels_with_the_slots(net3, table3):
    table3.level(1, 0).T = 3
    table3.apply_moves(net3, [(0, 0, 1), (1, 1, 0)], region_level=1)
    assert net3.coord_of[0] == 1
    assert table3.level(0, 0).T == 3
    assert table3.level(0, 0).group == 1
    assert table3.level(0, 2).group == 0


def test_snapshot_round_trip(net3, table3):
    table3.assign_group([3, 4], 1, 99)
    table3.normalize(net3)
    snap = json.loads(json.dumps(table3.to_snapshot(net3)))
    table, net = GroupTable.from_snapshot(snap)
    assert net.coord_of == net3.coord_of
    assert table.relatives == table3.relatives
    assert table.to_snapshot(net) == snap
    assert all_violations(net, table.states) == []


def test_checks_catch_corruption(net3, table3):
    table3.level(0, 2).start = 5
    assert contiguity_violations(net3, table3.states)

    table3 = GroupTable.initial(net3)
    table3.level(2, 1).T = 4
    assert timestamp_monotonicity_violations(table3.states) == ["node 2: T_2 < T_1"]

    table3.level(2, 0).rel_start, table3.level(2, 0).rel_end = 0, 0
    assert relative_duality_violations(table3.states)


def test_two_pairs_in_one_subtree_violate_invariant_I(net3, table3):
    a, b = table3.level(0, 0), table3.level(1, 0)
    a.rel_start, a.rel_end, a.peer_start, a.peer_end = 0, 0, 4, 4
    b.rel_start, b.rel_end, b.peer_start, b.peer_end = 1, 1, 5, 5
    found = invariant_I_check(net3, table3.states)
    assert len(found) == 1
    assert (found[0]["level"], found[0]["prefix"]) == (0, 0)


def test_state_bits_stay_polylogarithmic():
    small = GroupTable.initial(NetworkState.identity(3)).state_bits()
    large = GroupTable.initial(NetworkState.identity(6)).state_bits()
    assert 0 < small < large <= 6 * 11 * 8


def test_relative_distance():
    assert relative_distance(GroupView(2, 0, 1), 2) == 1
    assert relative_distance(GroupView(3, 0, 4), 5) == 0


def test_split_pieces_are_relatives_without_touching(net3, table3):
    table3.assign_group([1, 4], 1, 99)
    table3.normalize(net3)

    assert table3.relatives == [RelativePair(0, 99, 8)]
    assert (table3.level(0, 0).relative, table3.level(0, 0).peer) == ((1, 1), (4, 4))
    assert (table3.level(7, 0).relative, table3.level(7, 0).peer) == ((4, 4), (1, 1))
    assert all_violations(net3, table3.states) == []


def test_invariant_I_is_enforced_as_its_own_step(net3, table3):
    table3.assign_group([0, 3], 2, 90)
    table3.assign_group([1, 2], 2, 91)

    assert table3.normalize(net3, enforce=False) == 0
    assert table3.relatives == [RelativePair(1, 90, 8), RelativePair(1, 91, 9)]
    found = invariant_I_check(net3, table3.states)
    assert [(v["level"], v["prefix"]) for v in found] == [(1, 0)]

    assert table3.normalize(net3) == 1
    assert table3.relatives == [RelativePair(1, 90, 8)]
    assert table3.released == 1
    assert all_violations(net3, table3.states) == []


def test_checks_can_be_selected_one_by_one(net3, table3):
    table3.level(2, 1).T = 4
    assert all_violations(net3, table3.states, ["bijection", "invariant_I", "contiguity"]) == []
    assert all_violations(net3, table3.states, ["timestamps"]) == ["node 2: T_2 < T_1"]
