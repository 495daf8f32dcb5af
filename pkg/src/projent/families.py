"""Multisets of subsets of ``[n]``: covers, compressions and the minimal compression.

Subsets of ``[n] = {1, ..., n}`` are stored as bit masks (element ``i`` is bit
``i - 1``), so a family is just a tuple of ints plus the ground-set size.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable

from .errors import InstanceTooLarge, InvalidInput, NestedPair, NotACover, NotUniformCover

MAX_N = 30
MAX_SEARCH_M = 10
MAX_SEARCH_STATES = 200_000

SubsetMask = int


def mask_of(elements: Iterable[int], n: int | None = None) -> SubsetMask:
    """Mask of a collection of 1-based indices."""
    m = 0
    for i in elements:
        i = int(i)
        if i < 1 or (n is not None and i > n) or i > MAX_N:
            raise InvalidInput(f"index {i} outside [1, {n if n is not None else MAX_N}]")
        m |= 1 << (i - 1)
    return m


def elements_of(mask: SubsetMask) -> list[int]:
    out = []
    i = 1
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def full_mask(n: int) -> SubsetMask:
    return (1 << n) - 1


def prefix_mask(j: int) -> SubsetMask:
    """Mask of ``[j] = {1, ..., j}``; ``[0]`` is empty."""
    return (1 << j) - 1 if j > 0 else 0


def popcount(mask: SubsetMask) -> int:
    return bin(mask).count("1")


def mask_key(mask: SubsetMask) -> tuple[int, int]:
    return popcount(mask), mask


def format_mask(mask: SubsetMask) -> str:
    return "{" + ",".join(map(str, elements_of(mask))) + "}"


@dataclass(frozen=True, eq=False)
class SetFamily:
    """A multiset of non-empty subsets of ``[n]``.

    ``members`` keeps the order it was given in, which is what member
    indices refer to. Equality and hashing use the canonical form (members
    sorted by size, then mask value), so two families are equal exactly when
    they are the same multiset.
    """

    n: int
    members: tuple[SubsetMask, ...]

    def __post_init__(self):
        if not 1 <= self.n <= MAX_N:
            raise InvalidInput(f"ground-set size must lie in [1, {MAX_N}], got {self.n}")
        object.__setattr__(self, "members", tuple(int(a) for a in self.members))
        limit = full_mask(self.n)
        for a in self.members:
            if a == 0:
                raise InvalidInput("families may not contain the empty set")
            if a & ~limit:
                raise InvalidInput(f"member {format_mask(a)} is not a subset of [{self.n}]")

    @classmethod
    def from_sets(cls, n: int, sets: Iterable[Iterable[int]]) -> SetFamily:
        return cls(n, tuple(mask_of(s, n) for s in sets))

    @property
    def m(self) -> int:
        return sum(popcount(a) for a in self.members)

    @property
    def canonical(self) -> tuple[SubsetMask, ...]:
        return tuple(sorted(self.members, key=mask_key))

    def canonicalized(self) -> SetFamily:
        return SetFamily(self.n, self.canonical)

    def sets(self) -> list[list[int]]:
        return [elements_of(a) for a in self.members]

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __eq__(self, other):
        if not isinstance(other, SetFamily):
            return NotImplemented
        return self.n == other.n and self.canonical == other.canonical

    def __hash__(self):
        return hash((self.n, self.canonical))

    def __repr__(self):
        body = ", ".join(format_mask(a) for a in self.members)
        return f"SetFamily(n={self.n}, {{{body}}})"


def all_subsets_of_size(n: int, r: int) -> SetFamily:
    from itertools import combinations

    return SetFamily.from_sets(n, combinations(range(1, n + 1), r))


def cover_profile(fam: SetFamily) -> tuple[int, ...]:
    """For each ``i`` in ``[n]``, the number of members containing ``i``."""
    return tuple(sum((a >> i) & 1 for a in fam.members) for i in range(fam.n))


def is_k_cover(fam: SetFamily, k: int) -> bool:
    return min(cover_profile(fam)) >= k


def is_uniform_k_cover(fam: SetFamily, k: int) -> bool:
    return all(c == k for c in cover_profile(fam))


def require_k_cover(fam: SetFamily, k: int) -> None:
    for i, c in enumerate(cover_profile(fam), start=1):
        if c < k:
            raise NotACover(f"element {i} lies in {c} member(s) of {fam!r}, fewer than k={k}")


def require_uniform_k_cover(fam: SetFamily, k: int) -> None:
    for i, c in enumerate(cover_profile(fam), start=1):
        if c != k:
            raise NotUniformCover(f"element {i} lies in {c} member(s) of {fam!r}, not k={k}")


def is_nested(a: SubsetMask, b: SubsetMask) -> bool:
    return a & b == a or a & b == b


def elementary_compression(fam: SetFamily, i: int, j: int) -> SetFamily:
    """Replace members ``i`` and ``j`` (0-based) by their intersection and union.

    The intersection takes position ``i`` and the union position ``j``; an
    empty intersection is dropped.
    """
    members = list(fam.members)
    for idx in (i, j):
        if not 0 <= idx < len(members):
            raise IndexError(f"member index {idx} out of range for {len(members)} members")
    a, b = members[i], members[j]
    if i == j or is_nested(a, b):
        raise NestedPair(f"members {format_mask(a)} and {format_mask(b)} are nested")
    members[i], members[j] = a & b, a | b
    return SetFamily(fam.n, tuple(x for x in members if x))


def legal_pairs(fam: SetFamily) -> list[tuple[int, int]]:
    ms = fam.members
    return [
        (i, j)
        for i in range(len(ms))
        for j in range(i + 1, len(ms))
        if not is_nested(ms[i], ms[j])
    ]


def potential(fam: SetFamily) -> int:
    return sum(popcount(a) ** 2 for a in fam.members)


def minimal_compression(fam: SetFamily) -> SetFamily:
    """The chain whose ``j``-th row is the set of elements lying in at least ``j`` members.

    Rows are returned smallest first, which is also the canonical order.
    """
    counts = cover_profile(fam)
    rows = []
    for j in range(max(counts, default=0), 0, -1):
        rows.append(mask_of((i + 1 for i, c in enumerate(counts) if c >= j), fam.n))
    return SetFamily(fam.n, tuple(rows))


def is_chain(fam: SetFamily) -> bool:
    ms = fam.canonical
    return all(a & b == a for a, b in zip(ms, ms[1:]))


def compresses_to(fam_a: SetFamily, fam_b: SetFamily) -> bool:
    """Whether ``fam_b`` is reachable from ``fam_a`` by elementary compressions.

    Reflexive: a family compresses to itself through the empty sequence.
    Searches forward from ``fam_a`` over canonical forms. Every elementary
    compression preserves the cover profile, does not add members, and
    strictly raises the potential, which bounds and prunes the search.
    """
    if fam_a.n != fam_b.n:
        raise InvalidInput("families live on different ground sets")
    if max(fam_a.m, fam_b.m) > MAX_SEARCH_M:
        raise InstanceTooLarge(f"reachability search is capped at m <= {MAX_SEARCH_M}")
    if cover_profile(fam_a) != cover_profile(fam_b):
        return False
    target = fam_b.canonical
    target_pot = potential(fam_b)
    target_len = len(fam_b)
    n = fam_a.n

    start = fam_a.canonical
    seen = {start}
    queue = deque([start])
    while queue:
        state = queue.popleft()
        if state == target:
            return True
        fam = SetFamily(n, state)
        pot = potential(fam)
        if pot >= target_pot:
            continue
        for i, j in legal_pairs(fam):
            nxt = elementary_compression(fam, i, j)
            if potential(nxt) <= pot:
                raise AssertionError("compression failed to raise the potential")
            key = nxt.canonical
            if key in seen or potential(nxt) > target_pot or len(key) < target_len:
                continue
            seen.add(key)
            if len(seen) > MAX_SEARCH_STATES:
                raise InstanceTooLarge("reachability search exceeded its state budget")
            queue.append(key)
    return False
