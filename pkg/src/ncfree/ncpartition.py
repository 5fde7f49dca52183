"""Non-crossing set partitions of {1, ..., n} and their permutation encoding.

A partition is kept in canonical form: every block is an increasing tuple and
blocks are ordered by their least element.  A partition is non-crossing when
no two blocks interleave, i.e. there are no positions i < j < k < l with
{i, k} in one block and {j, l} in another.

Each partition pi has a permutation perm(pi) whose cycles are the blocks of
pi traversed in increasing order.  The Kreweras complement of a non-crossing
pi is the unique non-crossing partition whose permutation composed on the
right of perm(pi) gives the forward cycle 1 -> 2 -> ... -> n -> 1.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

DEFAULT_MAX_GROUND_SET = 12


@dataclass(frozen=True)
class Partition:
    """A set partition of {1, ..., n} in canonical block form."""

    n: int
    blocks: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError(f"ground set size must be positive, got {self.n}")
        seen: set[int] = set()
        prev_min = 0
        for block in self.blocks:
            if not block:
                raise ValueError("empty block")
            if any(block[t] >= block[t + 1] for t in range(len(block) - 1)):
                raise ValueError(f"block not strictly increasing: {block}")
            if block[0] <= prev_min:
                raise ValueError("blocks not ordered by least element")
            prev_min = block[0]
            seen.update(block)
        if seen != set(range(1, self.n + 1)) or sum(map(len, self.blocks)) != self.n:
            raise ValueError(f"blocks do not partition 1..{self.n}: {self.blocks}")

    @classmethod
    def of(cls, n: int, blocks: Iterable[Iterable[int]]) -> "Partition":
        """Build a partition from blocks in any order, canonicalizing them."""
        canon = tuple(sorted(tuple(sorted(b)) for b in blocks))
        return cls(n, canon)

    @classmethod
    def singletons(cls, n: int) -> "Partition":
        return cls(n, tuple((k,) for k in range(1, n + 1)))

    @classmethod
    def whole(cls, n: int) -> "Partition":
        return cls(n, (tuple(range(1, n + 1)),))

    def block_count(self) -> int:
        return len(self.blocks)

    def block_of(self, k: int) -> tuple[int, ...]:
        for block in self.blocks:
            if k in block:
                return block
        raise ValueError(f"{k} not in ground set 1..{self.n}")

    def __str__(self) -> str:
        return "".join("{" + ",".join(str(e) for e in b) + "}" for b in self.blocks)


@dataclass(frozen=True)
class PartitionPermutation:
    """A permutation of {1, ..., n}, stored as the tuple of images of 1..n."""

    n: int
    images: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.images) != self.n or set(self.images) != set(range(1, self.n + 1)):
            raise ValueError(f"not a permutation of 1..{self.n}: {self.images}")

    @classmethod
    def identity(cls, n: int) -> "PartitionPermutation":
        return cls(n, tuple(range(1, n + 1)))

    @classmethod
    def forward_cycle(cls, n: int) -> "PartitionPermutation":
        """The cycle 1 -> 2 -> ... -> n -> 1."""
        return cls(n, tuple(range(2, n + 1)) + (1,))

    def __call__(self, k: int) -> int:
        return self.images[k - 1]

    def compose(self, other: "PartitionPermutation") -> "PartitionPermutation":
        """self after other: k -> self(other(k))."""
        if self.n != other.n:
            raise ValueError("size mismatch")
        return PartitionPermutation(self.n, tuple(self.images[i - 1] for i in other.images))

    def inverse(self) -> "PartitionPermutation":
        inv = [0] * self.n
        for k, img in enumerate(self.images, start=1):
            inv[img - 1] = k
        return PartitionPermutation(self.n, tuple(inv))

    def cycle_partition(self) -> Partition:
        """The partition of 1..n into the orbits of this permutation."""
        todo = set(range(1, self.n + 1))
        blocks = []
        while todo:
            start = min(todo)
            orbit = [start]
            todo.remove(start)
            k = self(start)
            while k != start:
                orbit.append(k)
                todo.remove(k)
                k = self(k)
            blocks.append(orbit)
        return Partition.of(self.n, blocks)


def is_noncrossing(p: Partition) -> bool:
    """True when no two blocks of p interleave.

    Two blocks cross exactly when walking the merged elements in increasing
    order meets them in an a, b, a, b pattern (four or more runs).
    """
    blocks = p.blocks
    for x, y in itertools.combinations(blocks, 2):
        merged = sorted((e, 0) for e in x) + sorted((e, 1) for e in y)
        merged.sort()
        runs = 1
        for t in range(1, len(merged)):
            if merged[t][1] != merged[t - 1][1]:
                runs += 1
        if runs >= 4:
            return False
    return True


@lru_cache(maxsize=None)
def _nc_block_sets(n: int) -> tuple[tuple[tuple[int, ...], ...], ...]:
    # All non-crossing partitions of {1..n} as block tuples; n = 0 gives the
    # empty partition so the gap recursion below composes cleanly.
    if n == 0:
        return ((),)
    out = []
    rest = list(range(2, n + 1))
    for size in range(0, n):
        for extra in itertools.combinations(rest, size):
            first = (1,) + extra
            # the complement splits into the gaps between consecutive
            # elements of the block containing 1
            bounds = list(first) + [n + 1]
            gap_parts = []
            for t in range(len(first)):
                gap = list(range(bounds[t] + 1, bounds[t + 1]))
                gap_parts.append((gap, _nc_block_sets(len(gap))))
            for combo in itertools.product(*(parts for _, parts in gap_parts)):
                blocks = [first]
                for (gap, _), sub in zip(gap_parts, combo):
                    for b in sub:
                        blocks.append(tuple(gap[e - 1] for e in b))
                out.append(tuple(sorted(tuple(sorted(b)) for b in blocks)))
    return tuple(sorted(out))


def enumerate_nc(n: int, max_n: int = DEFAULT_MAX_GROUND_SET) -> tuple[Partition, ...]:
    """All non-crossing partitions of {1..n}, lexicographic on canonical form."""
    if n < 1 or n > max_n:
        raise ValueError(f"n must be in 1..{max_n}, got {n}")
    return tuple(Partition(n, blocks) for blocks in _nc_block_sets(n))


def perm_of(p: Partition) -> PartitionPermutation:
    """The permutation whose cycles are the blocks of p, each traversed upward."""
    if not is_noncrossing(p):
        raise ValueError(f"partition is crossing: {p}")
    images = [0] * p.n
    for block in p.blocks:
        for t, e in enumerate(block):
            images[e - 1] = block[(t + 1) % len(block)]
    return PartitionPermutation(p.n, tuple(images))


@lru_cache(maxsize=None)
def _kreweras_cached(p: Partition) -> Partition:
    comp = perm_of(p).inverse().compose(PartitionPermutation.forward_cycle(p.n))
    q = comp.cycle_partition()
    assert is_noncrossing(q)
    return q


def kreweras(p: Partition) -> Partition:
    """Kreweras complement: perm(p) composed with perm(result) is the forward cycle."""
    return _kreweras_cached(p)


def leq(p: Partition, q: Partition) -> bool:
    """Refinement order: every block of p lies inside a block of q."""
    if p.n != q.n:
        raise ValueError("size mismatch")
    holder = {}
    for block in q.blocks:
        for e in block:
            holder[e] = block
    return all(set(b) <= set(holder[b[0]]) for b in p.blocks)


def insert(p: Partition, q: Partition, k: int) -> Partition:
    """Insert p between positions k and k+1 of q.

    The result partitions {1, ..., p.n + q.n}: the elements k+1 .. k+p.n carry
    a shifted copy of p, and the remaining positions carry q with its elements
    above k pushed up by p.n.
    """
    if not is_noncrossing(p) or not is_noncrossing(q):
        raise ValueError("insert requires non-crossing operands")
    if not 0 <= k <= q.n:
        raise ValueError(f"insertion position must be in 0..{q.n}, got {k}")
    blocks = [tuple(e + k for e in b) for b in p.blocks]
    blocks += [tuple(e if e <= k else e + p.n for e in b) for b in q.blocks]
    out = Partition.of(p.n + q.n, blocks)
    assert is_noncrossing(out)
    return out


def interval_block(p: Partition) -> tuple[int, ...]:
    """The leftmost block that is a contiguous interval.

    Every non-crossing partition has one; a crossing partition may not, in
    which case this raises.
    """
    for block in p.blocks:
        if block[-1] - block[0] + 1 == len(block):
            return block
    raise ValueError(f"no interval block; partition is crossing: {p}")


def restrict(p: Partition, keep: Sequence[int]) -> Partition:
    """Restriction of p to the elements of keep, relabeled to 1..len(keep)."""
    keep_sorted = sorted(keep)
    if len(set(keep_sorted)) != len(keep_sorted) or not keep_sorted:
        raise ValueError("keep must be a nonempty set of distinct elements")
    pos = {e: t + 1 for t, e in enumerate(keep_sorted)}
    blocks = []
    for block in p.blocks:
        proj = tuple(pos[e] for e in block if e in pos)
        if proj:
            blocks.append(proj)
    return Partition.of(len(keep_sorted), blocks)
