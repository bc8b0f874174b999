"""Label-set combinatorics over the marked points {1, ..., m}.

Subsets are bitmasks, partitions into four nonempty blocks are the index
sets of F-curves, and shapes are their orbits under permutations fixing a
designated special label. Labels are 1-based throughout. Everything here
is immutable and hashable, so values double as divisor keys and can be
shared freely between threads.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Literal, Sequence

__all__ = [
    "Subset",
    "FourPartition",
    "PartitionShape",
    "canonical_key",
    "enumerate_four_partitions",
    "enumerate_shapes",
    "shape_of",
]


@dataclass(frozen=True)
class Subset:
    """A subset of {1, ..., m}; bit i-1 of ``mask`` holds label i."""

    mask: int
    m: int

    def __post_init__(self) -> None:
        if self.m < 1:
            raise ValueError(f"ambient size must be >= 1, got {self.m}")
        if not 0 <= self.mask < (1 << self.m):
            raise ValueError(f"mask {self.mask:#x} out of range for m={self.m}")

    @classmethod
    def from_labels(cls, labels: Iterable[int], m: int) -> "Subset":
        mask = 0
        for lab in labels:
            if not 1 <= lab <= m:
                raise ValueError(f"label {lab} out of range 1..{m}")
            mask |= 1 << (lab - 1)
        return cls(mask, m)

    @classmethod
    def parse(cls, text: str, m: int) -> "Subset":
        """Inverse of ``str``: comma-joined labels, e.g. "1,3,4"."""
        text = text.strip()
        if not text:
            return cls(0, m)
        return cls.from_labels((int(tok) for tok in text.split(",")), m)

    @property
    def labels(self) -> tuple[int, ...]:
        return tuple(i + 1 for i in range(self.m) if self.mask >> i & 1)

    @property
    def size(self) -> int:
        return self.mask.bit_count()

    @property
    def min_label(self) -> int:
        if not self.mask:
            raise ValueError("empty subset has no minimum")
        return (self.mask & -self.mask).bit_length()

    def __contains__(self, label: int) -> bool:
        return 1 <= label <= self.m and bool(self.mask >> (label - 1) & 1)

    def __iter__(self) -> Iterator[int]:
        return iter(self.labels)

    def __len__(self) -> int:
        return self.size

    def complement(self) -> "Subset":
        return Subset(self.mask ^ ((1 << self.m) - 1), self.m)

    def union(self, other: "Subset") -> "Subset":
        if other.m != self.m:
            raise ValueError(f"ambient mismatch: {self.m} vs {other.m}")
        return Subset(self.mask | other.mask, self.m)

    def isdisjoint(self, other: "Subset") -> bool:
        return not self.mask & other.mask

    def relabel(self, sigma: Sequence[int]) -> "Subset":
        """Apply a permutation given as the image tuple (sigma[i-1] = image of i)."""
        if sorted(sigma) != list(range(1, self.m + 1)):
            raise ValueError("sigma is not a permutation of 1..m")
        return Subset.from_labels((sigma[lab - 1] for lab in self.labels), self.m)

    def sort_key(self) -> tuple[int, tuple[int, ...]]:
        return (self.size, self.labels)

    def __str__(self) -> str:
        return ",".join(str(lab) for lab in self.labels)


def canonical_key(
    S: Subset, mode: Literal["complement-identified", "raw"] = "complement-identified"
) -> Subset:
    """Canonical divisor-key representative of a subset.

    In complement-identified mode the key stands for an unordered pair
    {S, S^c}; the representative is the smaller side, ties going to the side
    containing label 1. Raw mode keeps S itself (the two sides name genuinely
    different divisors there) and only checks |S| >= 2.
    """
    if mode == "raw":
        if S.size < 2:
            raise ValueError(f"raw key needs |S| >= 2, got {S}")
        return S
    if mode != "complement-identified":
        raise ValueError(f"unknown mode {mode!r}")
    if S.size == 0 or S.size == S.m:
        raise ValueError("empty or full subset cannot be a divisor key")
    Sc = S.complement()
    if S.size != Sc.size:
        return S if S.size < Sc.size else Sc
    return S if 1 in S else Sc


@dataclass(frozen=True)
class FourPartition:
    """An unordered partition of {1, ..., m} into four nonempty blocks.

    Stored canonically with blocks ordered by their minimum element; the
    constructor reorders, so any block order may be passed in.
    """

    parts: tuple[Subset, Subset, Subset, Subset]

    def __post_init__(self) -> None:
        parts = self.parts
        if len(parts) != 4:
            raise ValueError("a partition has exactly 4 blocks")
        m = parts[0].m
        if any(p.m != m for p in parts):
            raise ValueError("blocks live in different ambient sets")
        if any(p.mask == 0 for p in parts):
            raise ValueError("blocks must be nonempty")
        total = 0
        for p in parts:
            if total & p.mask:
                raise ValueError("blocks must be pairwise disjoint")
            total |= p.mask
        if total != (1 << m) - 1:
            raise ValueError("blocks must cover {1,...,m}")
        object.__setattr__(
            self, "parts", tuple(sorted(parts, key=lambda p: p.min_label))
        )

    @classmethod
    def from_blocks(cls, blocks: Iterable[Iterable[int]], m: int) -> "FourPartition":
        return cls(tuple(Subset.from_labels(b, m) for b in blocks))

    @classmethod
    def parse(cls, text: str, m: int) -> "FourPartition":
        """Inverse of ``str``, e.g. "{1}|{2}|{3}|{4,5}"."""
        blocks = []
        for tok in text.split("|"):
            tok = tok.strip()
            if not (tok.startswith("{") and tok.endswith("}")):
                raise ValueError(f"malformed block {tok!r}")
            blocks.append(Subset.parse(tok[1:-1], m))
        return cls(tuple(blocks))

    @property
    def m(self) -> int:
        return self.parts[0].m

    def block_labels(self) -> tuple[tuple[int, ...], ...]:
        return tuple(p.labels for p in self.parts)

    def relabel(self, sigma: Sequence[int]) -> "FourPartition":
        return FourPartition(tuple(p.relabel(sigma) for p in self.parts))

    def sort_key(self) -> tuple[tuple[int, ...], tuple[tuple[int, ...], ...]]:
        # lexicographic in the part minima, then in the full label tuples
        return (tuple(p.min_label for p in self.parts), self.block_labels())

    def __str__(self) -> str:
        return "|".join("{" + str(p) + "}" for p in self.parts)


@dataclass(frozen=True)
class PartitionShape:
    """Orbit label of a four-block partition: the size multiset, plus the size
    of the block containing the special label when one is designated."""

    sizes: tuple[int, int, int, int]
    special_part_size: int | None = None

    def __post_init__(self) -> None:
        if len(self.sizes) != 4 or any(s < 1 for s in self.sizes):
            raise ValueError(f"invalid size multiset {self.sizes}")
        if tuple(sorted(self.sizes)) != self.sizes:
            raise ValueError("sizes must be sorted ascending")
        if self.special_part_size is not None and self.special_part_size not in self.sizes:
            raise ValueError("special part size must be one of the sizes")

    def __str__(self) -> str:
        base = "+".join(str(s) for s in self.sizes)
        if self.special_part_size is None:
            return base
        return f"{base}(special in {self.special_part_size})"


def shape_of(P: FourPartition, special: int | None = None) -> PartitionShape:
    sizes = tuple(sorted(p.size for p in P.parts))
    sp = None
    if special is not None:
        if not 1 <= special <= P.m:
            raise ValueError(f"special label {special} out of range 1..{P.m}")
        sp = next(p.size for p in P.parts if special in p)
    return PartitionShape(sizes, sp)


def _block_lists(m: int) -> Iterator[tuple[tuple[int, ...], ...]]:
    # restricted-growth assignment: each label joins an existing block, in
    # creation order, or opens a new one; block minima are then increasing
    blocks: list[list[int]] = []

    def rec(label: int) -> Iterator[tuple[tuple[int, ...], ...]]:
        if label > m:
            if len(blocks) == 4:
                yield tuple(tuple(b) for b in blocks)
            return
        remaining = m - label
        for b in blocks:
            if remaining >= 4 - len(blocks):
                b.append(label)
                yield from rec(label + 1)
                b.pop()
        if len(blocks) < 4 and remaining >= 3 - len(blocks):
            blocks.append([label])
            yield from rec(label + 1)
            blocks.pop()

    yield from rec(1)


def enumerate_four_partitions(m: int) -> Iterator[FourPartition]:
    """All partitions of {1, ..., m} into four nonempty blocks, each exactly
    once, ordered lexicographically by part minima (ties by label tuples)."""
    if m < 4:
        raise ValueError(f"no four-block partitions of {m} < 4 labels")
    found = sorted(_block_lists(m), key=lambda bl: (tuple(b[0] for b in bl), bl))
    for bl in found:
        yield FourPartition.from_blocks(bl, m)


def enumerate_shapes(
    m: int, special: int | None = None
) -> list[tuple[PartitionShape, FourPartition]]:
    """Distinct shapes with one representative each, in order of first
    occurrence along ``enumerate_four_partitions``."""
    if m < 4:
        raise ValueError(f"no four-block partitions of {m} < 4 labels")
    if special is not None and not 1 <= special <= m:
        raise ValueError(f"special label {special} out of range 1..{m}")
    reps: dict[PartitionShape, FourPartition] = {}
    for P in enumerate_four_partitions(m):
        sh = shape_of(P, special)
        if sh not in reps:
            reps[sh] = P
    return list(reps.items())
