"""Finite point sets in Z^n, their coordinate projections, and cover inequalities.

Everything here is exact integer arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product
from math import prod
from typing import Iterable

from .errors import EmptySet, InvalidInput
from .families import (
    SetFamily,
    SubsetMask,
    cover_profile,
    elements_of,
    full_mask,
    mask_of,
    minimal_compression,
    require_k_cover,
)


@dataclass(frozen=True)
class LatticeSet:
    n: int
    points: frozenset

    def __post_init__(self):
        pts = frozenset(tuple(int(c) for c in p) for p in self.points)
        for p in pts:
            if len(p) != self.n:
                raise InvalidInput(f"point {p} is not in Z^{self.n}")
        object.__setattr__(self, "points", pts)

    @classmethod
    def of(cls, points: Iterable[Iterable[int]]) -> LatticeSet:
        pts = [tuple(p) for p in points]
        if not pts:
            raise EmptySet("cannot infer the dimension of an empty point set")
        return cls(len(pts[0]), frozenset(pts))

    def __len__(self):
        return len(self.points)

    def sorted_points(self) -> list[tuple[int, ...]]:
        return sorted(self.points)


def project(s: LatticeSet, a: SubsetMask) -> LatticeSet:
    """Restriction of every point to the coordinates in ``a``."""
    if not a:
        raise EmptySet("projection onto the empty coordinate set")
    coords = [i - 1 for i in elements_of(a)]
    if coords[-1] >= s.n:
        raise InvalidInput(f"coordinates {elements_of(a)} not inside [{s.n}]")
    return LatticeSet(len(coords), frozenset(tuple(p[i] for i in coords) for p in s.points))


def projection_size(s: LatticeSet, a: SubsetMask) -> int:
    """``|S_A|``, with the empty projection of a non-empty set counting as one point."""
    if not a:
        return 1 if s.points else 0
    return len(project(s, a))


@dataclass(frozen=True)
class CoverReport:
    """``|S|^k`` against the product of projection sizes over a cover."""

    lhs: int
    rhs: int
    k: int
    sizes: tuple[int, ...]

    @property
    def holds(self) -> bool:
        return self.lhs <= self.rhs

    @property
    def ratio(self) -> Fraction:
        return Fraction(self.rhs, self.lhs)

    def as_dict(self) -> dict:
        return {
            "lhs": self.lhs,
            "rhs": self.rhs,
            "k": self.k,
            "ratio": str(self.ratio),
            "sizes": list(self.sizes),
            "verdict": "holds" if self.holds else "violated",
        }


def verify_uniform_cover(s: LatticeSet, fam: SetFamily, k: int) -> CoverReport:
    """``|S|^k <= prod_A |S_A|``; any k-cover is accepted, not only uniform ones."""
    if not s.points:
        raise EmptySet("cover inequality on an empty point set")
    if fam.n != s.n:
        raise InvalidInput(f"family lives on [{fam.n}] but points are in Z^{s.n}")
    require_k_cover(fam, k)
    sizes = tuple(projection_size(s, a) for a in fam.members)
    return CoverReport(len(s) ** k, prod(sizes), k, sizes)


def trim_to_uniform(fam: SetFamily, k: int) -> SetFamily:
    """Shrink members of a k-cover to a uniform k-cover with each new member inside its original.

    Elements are scanned in increasing order; surplus occurrences are removed
    from the last members containing them. Members emptied this way are dropped
    (they would contribute a factor of one).
    """
    require_k_cover(fam, k)
    members = list(fam.members)
    for i, count in enumerate(cover_profile(fam)):
        bit = 1 << i
        excess = count - k
        for idx in range(len(members) - 1, -1, -1):
            if excess == 0:
                break
            if members[idx] & bit:
                members[idx] &= ~bit
                excess -= 1
    return SetFamily(fam.n, tuple(m for m in members if m))


@dataclass(frozen=True)
class ProjectionCounterexample:
    points: LatticeSet
    fam_a: SetFamily
    fam_b: SetFamily
    sizes: dict
    lhs_product: int
    rhs_product: int


FIVE_POINTS = ((0, 0, 0), (0, 0, 1), (0, 1, 0), (0, 1, 1), (1, 0, 0))


def gen2_projection_counterexample() -> ProjectionCounterexample:
    """Five unit cubes whose projections break the projection analogue of the chain bound.

    With ``A = {{1,2},{1,3}}`` and its minimal compression ``{{1},{1,2,3}}``,
    the product over the compression (``5 * 2``) exceeds the product over
    ``A`` (``3 * 3``), although the entropy version of that inequality holds.
    """
    s = LatticeSet.of(FIVE_POINTS)
    fam_a = SetFamily.from_sets(3, [[1, 2], [1, 3]])
    fam_b = minimal_compression(fam_a)
    sizes = {
        name: projection_size(s, mask_of(c))
        for name, c in (("123", (1, 2, 3)), ("1", (1,)), ("12", (1, 2)), ("13", (1, 3)))
    }
    lhs = prod(projection_size(s, b) for b in fam_b.members)
    rhs = prod(projection_size(s, a) for a in fam_a.members)
    return ProjectionCounterexample(s, fam_a, fam_b, sizes, lhs, rhs)


def search_projection_pattern(
    size: int, side: int, targets: dict[SubsetMask, int], n: int = 3
) -> list[LatticeSet]:
    """All ``size``-point subsets of ``[0, side)^n`` with the given projection sizes."""
    grid = list(product(range(side), repeat=n))
    hits = []
    for pts in combinations(grid, size):
        s = LatticeSet(n, frozenset(pts))
        if all(projection_size(s, a) == v for a, v in targets.items()):
            hits.append(s)
    return hits


def box(sides: Iterable[int]) -> LatticeSet:
    sides = list(sides)
    return LatticeSet(len(sides), frozenset(product(*(range(c) for c in sides))))


def full_projection_sizes(s: LatticeSet) -> dict[SubsetMask, int]:
    return {a: projection_size(s, a) for a in range(1, full_mask(s.n) + 1)}
