from __future__ import annotations
"""Coordinate arithmetic and the binary-tree view of the hypercube.

A coordinate is an N-bit integer. Bit 1 is the most significant bit and
denotes the root split (level 0 → level 1); bit N is the last split. The
level-d subtree of a coordinate is the aligned block of 2^(N−d) coordinates
sharing its first d bits, so every subtree is a contiguous coordinate range.
"""
from dataclasses import dataclass
from math import comb

from src.core.errors import DimensionMismatch


@dataclass(frozen=True)
class Coordinate:
    bits: int
    dimension: int

    def __post_init__(self) -> None:
        if self.dimension < 1:
            raise DimensionMismatch(f"dimension must be positive, got {self.dimension}")
        if not 0 <= self.bits < (1 << self.dimension):
            raise DimensionMismatch(f"{self.bits} does not fit in {self.dimension} bits")

    @classmethod
    def parse(cls, text: str) -> "Coordinate":
        """Build from a bit string such as "0101"."""
        return cls(int(text, 2), len(text))

    def bit(self, i: int) -> int:
        """Return Coord_i, 1-indexed from the root split."""
        return bit_at(self.bits, i, self.dimension)

    def prefix(self, d: int) -> int:
        return self.bits >> (self.dimension - d)

    def flip(self, i: int) -> "Coordinate":
        return Coordinate(self.bits ^ (1 << (self.dimension - i)), self.dimension)

    def __str__(self) -> str:
        return format(self.bits, f"0{self.dimension}b")


@dataclass(frozen=True)
class SubtreeRef:
    """The level-d subtree holding every coordinate whose first d bits equal `prefix`."""

    level: int
    prefix: int
    dimension: int

    def __post_init__(self) -> None:
        if not 0 <= self.level <= self.dimension:
            raise DimensionMismatch(f"level {self.level} outside [0, {self.dimension}]")
        if not 0 <= self.prefix < (1 << self.level):
            raise DimensionMismatch(f"prefix {self.prefix} does not fit in {self.level} bits")

    @property
    def size(self) -> int:
        return 1 << (self.dimension - self.level)

    @property
    def start(self) -> int:
        return self.prefix << (self.dimension - self.level)

    @property
    def end(self) -> int:
        return self.start + self.size - 1

    @property
    def midpoint(self) -> int:
        """First coordinate of the right half (meaningless at level N)."""
        return self.start + self.size // 2

    def contains(self, bits: int) -> bool:
        return self.start <= bits <= self.end

    def coordinates(self) -> range:
        return range(self.start, self.end + 1)

    def complement(self) -> "SubtreeRef":
        if self.level == 0:
            raise DimensionMismatch("the root has no complementary subtree")
        return SubtreeRef(self.level, self.prefix ^ 1, self.dimension)

    def parent(self) -> "SubtreeRef":
        return SubtreeRef(self.level - 1, self.prefix >> 1, self.dimension)

    def halves(self) -> tuple["SubtreeRef", "SubtreeRef"]:
        left = SubtreeRef(self.level + 1, self.prefix << 1, self.dimension)
        return left, SubtreeRef(self.level + 1, (self.prefix << 1) | 1, self.dimension)


def bit_at(bits: int, i: int, dimension: int) -> int:
    return (bits >> (dimension - i)) & 1


def subtree_of(bits: int, level: int, dimension: int) -> SubtreeRef:
    return SubtreeRef(level, bits >> (dimension - level), dimension)


def complementary_subtree(bits: int, level: int, dimension: int) -> SubtreeRef:
    """~s^x_level: the sibling of x's level subtree under its level−1 parent."""
    return subtree_of(bits, level, dimension).complement()


def common_prefix_length(a: int, b: int, dimension: int) -> int:
    diff = a ^ b
    return dimension if diff == 0 else dimension - diff.bit_length()


def bit_fixing_path(a: int, b: int, dimension: int) -> list[int]:
    """Coordinates visited from a to b, fixing differing bits from bit 1 to bit N."""
    path = [a]
    for i in range(1, dimension + 1):
        mask = 1 << (dimension - i)
        if (a ^ b) & mask:
            a ^= mask
            path.append(a)
    return path


def hamming_distance(a: Coordinate, b: Coordinate) -> int:
    """Number of differing bits, i.e. the hop count of a shortest path."""
    if a.dimension != b.dimension:
        raise DimensionMismatch(f"dimensions differ: {a.dimension} vs {b.dimension}")
    return (a.bits ^ b.bits).bit_count()


def count_within_distance(dimension: int, k: int) -> int:
    """Σ_{i=1..k} C(N, i): nodes within Hamming distance k of a fixed node."""
    return sum(comb(dimension, i) for i in range(1, k + 1))
