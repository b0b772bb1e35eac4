"""Bit-level helpers shared by the family types and the pure kernels.

A family over the n-cube is one Python integer with bit x set iff the subset
with characteristic mask x belongs to the family (so the integer has 2**n bit
positions).  Subsets themselves are n-bit masks; coordinates are 1-indexed
externally and 0-indexed in masks.
"""

from __future__ import annotations

from functools import lru_cache


def popcount(x: int) -> int:
    return x.bit_count()


def mask_of(elements) -> int:
    """Mask of a collection of 1-indexed elements."""
    m = 0
    for e in elements:
        if e < 1:
            raise ValueError(f"elements are 1-indexed, got {e}")
        m |= 1 << (e - 1)
    return m


def elements_of(mask: int) -> tuple[int, ...]:
    """Sorted 1-indexed elements of a subset mask."""
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length())
        mask ^= low
    return tuple(out)


def iter_bit_indices(x: int):
    """Yield 0-indexed positions of set bits, ascending."""
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


@lru_cache(maxsize=None)
def full_family_mask(n: int) -> int:
    """All 2**n cube positions set."""
    return (1 << (1 << n)) - 1


@lru_cache(maxsize=None)
def size_class_masks(n: int) -> tuple[int, ...]:
    """class[j] has bit x set iff popcount(x) == j."""
    classes = [0] * (n + 1)
    for x in range(1 << n):
        classes[x.bit_count()] |= 1 << x
    return tuple(classes)


@lru_cache(maxsize=None)
def coord_zero_mask(n: int, i: int) -> int:
    """Bit x set iff coordinate i (0-indexed) is absent from x."""
    m = 0
    d = 1 << i
    for x in range(1 << n):
        if not x & d:
            m |= 1 << x
    return m


def reverse_bits(x: int, width: int) -> int:
    """Reverse an integer's low `width` bits (position b -> width-1-b)."""
    s = format(x, f"0{width}b")
    return int(s[::-1], 2)
