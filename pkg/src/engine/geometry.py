from __future__ import annotations
"""Level arithmetic shared by the transformation phases."""
from src.hypercube.coordinates import SubtreeRef, common_prefix_length, complementary_subtree
from src.hypercube.network import NetworkState, tree_distance


def alpha(net: NetworkState, u: int, v: int) -> int:
    """Level of the smallest common subtree of u and v (raises InvalidRequest on u = v)."""
    return net.dimension - tree_distance(net, u, v)


def ring(net: NetworkState, anchor: int, level: int) -> SubtreeRef:
    """~s^anchor_level, the ring of nodes at tree distance N − level + 1 from the anchor."""
    return complementary_subtree(net.coord_of[anchor], level, net.dimension)


def ring_level(a: int, b: int, dimension: int) -> int:
    """Level j with coordinate b inside ~s^a_j (N + 1 when a = b)."""
    return common_prefix_length(a, b, dimension) + 1


def coordinate_distance(a: int, b: int, dimension: int) -> int:
    return dimension - common_prefix_length(a, b, dimension)
