from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from src.core.errors import DimensionMismatch, InvalidRequest, StateCorruption
from src.hypercube.coordinates import (
    Coordinate,
    SubtreeRef,
    bit_fixing_path,
    common_prefix_length,
    complementary_subtree,
    count_within_distance,
    hamming_distance,
    subtree_of,
)
from src.hypercube.network import NetworkState, route, subtree_members, tree_distance


def test_coordinate_bits_are_numbered_from_the_root():
    c = Coordinate.parse("0101")
    assert (c.bits, c.dimension) == (5, 4)
    assert [c.bit(i) for i in range(1, 5)] == [0, 1, 0, 1]
    assert str(c.flip(1)) == "1101"
    assert c.prefix(2) == 1


def test_coordinate_rejects_out_of_range_bits():
    with pytest.raises(DimensionMismatch):
        Coordinate(8, 3)
    with pytest.raises(DimensionMismatch):
        Coordinate(0, 0)


def test_subtrees_are_aligned_ranges():
    s = subtree_of(5, 2, 4)
    assert (s.start, s.end, s.size, s.midpoint) == (4, 7, 4, 6)
    assert complementary_subtree(5, 2, 4).coordinates() == range(0, 4)
    left, right = SubtreeRef(1, 0, 3).halves()
    assert (left.start, right.start) == (0, 2)
    assert right.parent() == SubtreeRef(1, 0, 3)


def test_root_has_no_complement():
    with pytest.raises(DimensionMismatch):
        SubtreeRef(0, 0, 3).complement()


def test_common_prefix_length():
    assert common_prefix_length(0b0101, 0b0110, 4) == 2
    assert common_prefix_length(3, 3, 4) == 4
    assert common_prefix_length(0, 8, 4) == 0


def test_hamming_distance_needs_equal_dimensions():
    assert hamming_distance(Coordinate(0, 3), Coordinate(7, 3)) == 3
    with pytest.raises(DimensionMismatch):
        hamming_distance(Coordinate(0, 3), Coordinate(0, 4))


def test_count_within_distance():
    assert count_within_distance(3, 1) == 3
    assert count_within_distance(3, 3) == 7
    assert count_within_distance(5, 0) == 0


@given(st.integers(1, 8).flatmap(lambda n: st.tuples(st.just(n), st.integers(0, (1 << n) - 1), st.integers(0, (1 << n) - 1))))
def test_bit_fixing_path_is_a_shortest_path(case):
    n, a, b = case
    path = bit_fixing_path(a, b, n)
    assert path[0] == a and path[-1] == b
    assert len(path) - 1 == (a ^ b).bit_count()
    assert all((x ^ y).bit_count() == 1 for x, y in zip(path, path[1:]))


def test_bit_fixing_path_fixes_high_bits_first():
    assert bit_fixing_path(0, 7, 3) == [0, 4, 6, 7]


def test_identity_network_and_routing():
    net = NetworkState.identity(3)
    assert net.is_bijection()
    assert [c.bits for c in route(net, 0, 7)] == [0, 4, 6, 7]
    assert tree_distance(net, 0, 1) == 1
    assert tree_distance(net, 0, 4) == 3
    assert subtree_members(net, SubtreeRef(1, 1, 3)) == {4, 5, 6, 7}


def test_requests_must_name_two_known_nodes():
    net = NetworkState.identity(3)
    with pytest.raises(InvalidRequest):
        tree_distance(net, 2, 2)
    with pytest.raises(InvalidRequest):
        net.check_node(8)


def test_placement_must_be_a_bijection():
    with pytest.raises(StateCorruption):
        NetworkState.from_placement(1, {0: 0, 1: 0})
    with pytest.raises(StateCorruption):
        NetworkState.from_placement(2, {0: 0, 1: 1})
    net = NetworkState.from_placement(1, {0: 1, 1: 0})
    assert net.node_at == [1, 0]


def test_apply_moves_swaps_and_rejects_non_permutations():
    net = NetworkState.identity(2)
    net.apply_moves([(0, 0, 3), (3, 3, 0)])
    assert net.coord_of[0] == 3 and net.node_at[0] == 3
    with pytest.raises(StateCorruption):
        net.apply_moves([(1, 1, 2)])
    with pytest.raises(StateCorruption):
        net.apply_moves([(1, 2, 1), (2, 1, 2)])
