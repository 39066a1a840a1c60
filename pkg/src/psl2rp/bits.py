"""Bit-vector element sets over the indices of a finite group.

Membership is held in a Python int (bit ``i`` set iff element ``i`` is in the
set), so intersection and containment are single big-int operations.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator

import numpy as np


def mask_to_int(mask: np.ndarray) -> int:
    packed = np.packbits(np.asarray(mask, dtype=bool), bitorder="little")
    return int.from_bytes(packed.tobytes(), "little")


def int_to_indices(bits: int) -> np.ndarray:
    if bits == 0:
        return np.zeros(0, dtype=np.int64)
    nbytes = (bits.bit_length() + 7) // 8
    raw = np.frombuffer(bits.to_bytes(nbytes, "little"), dtype=np.uint8)
    return np.flatnonzero(np.unpackbits(raw, bitorder="little")).astype(np.int64)


def indices_to_int(indices: Iterable[int]) -> int:
    idx = np.fromiter((int(i) for i in indices), dtype=np.int64)
    if idx.size == 0:
        return 0
    mask = np.zeros(int(idx.max()) + 1, dtype=bool)
    mask[idx] = True
    return mask_to_int(mask)


def iter_bits(bits: int) -> Iterator[int]:
    """Yield set bit positions in increasing order."""
    while bits:
        low = bits & -bits
        yield low.bit_length() - 1
        bits ^= low


@dataclass(frozen=True)
class ElementSet:
    """Immutable set of group element indices."""

    bits: int
    size: int = field(init=False, compare=False, repr=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "size", self.bits.bit_count())

    @classmethod
    def from_indices(cls, indices: Iterable[int]) -> ElementSet:
        return cls(indices_to_int(indices))

    @classmethod
    def from_mask(cls, mask: np.ndarray) -> ElementSet:
        return cls(mask_to_int(mask))

    def indices(self) -> np.ndarray:
        return int_to_indices(self.bits)

    def __len__(self) -> int:
        return self.size

    def __iter__(self) -> Iterator[int]:
        return iter(int(i) for i in self.indices())

    def __contains__(self, g: int) -> bool:
        return bool((self.bits >> int(g)) & 1)

    def __and__(self, other: ElementSet) -> ElementSet:
        return ElementSet(self.bits & other.bits)

    def __or__(self, other: ElementSet) -> ElementSet:
        return ElementSet(self.bits | other.bits)

    def __sub__(self, other: ElementSet) -> ElementSet:
        return ElementSet(self.bits & ~other.bits)

    def issubset(self, other: ElementSet) -> bool:
        return self.bits & ~other.bits == 0

    def __le__(self, other: ElementSet) -> bool:
        return self.issubset(other)

    def __lt__(self, other: ElementSet) -> bool:
        return self.issubset(other) and self.bits != other.bits

    def min_index(self) -> int:
        if not self.bits:
            raise ValueError("empty set has no minimum")
        return (self.bits & -self.bits).bit_length() - 1


def intersect(a: ElementSet, b: ElementSet) -> ElementSet:
    return a & b
