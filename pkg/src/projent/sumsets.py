"""Sumsets and product sets of finite subsets of a group.

Covers the lexicographic embedding of a sumset into the product of its
summands, cover inequalities for sumsets, the inequality
``|A+C|^k <= |C|^(k-1) prod |A+B_i|``, the grid-marking construction behind the
additive cover bound in ordered groups, Cauchy-Davenport checks, and the
extremal product sizes ``N_A`` / ``n_A`` used by the conjecture search.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Iterable, Sequence

from . import certificates
from .errors import (
    CNotContained,
    InstanceTooLarge,
    InvalidInput,
    NonCommutative,
    NotInSumset,
    UnorderedContext,
)
from .families import (
    SetFamily,
    SubsetMask,
    elements_of,
    format_mask,
    full_mask,
    mask_of,
    prefix_mask,
    require_uniform_k_cover,
)
from .groups import FreeAbelian, Group, smallest_prime_factor
from .lattice import CoverReport, LatticeSet, projection_size, verify_uniform_cover

MAX_REPLACEMENTS = 100_000


@dataclass(frozen=True)
class SumsetInstance:
    """Sets ``S_1, ..., S_n`` in a group; each set is stored sorted and deduplicated."""

    group: Group
    sets: tuple[tuple, ...]

    def __post_init__(self):
        if not self.sets:
            raise InvalidInput("an instance needs at least one set")
        norm = []
        for i, s in enumerate(self.sets):
            vals = sorted({self.group.normalize(x) for x in s})
            if not vals:
                raise InvalidInput(f"S_{i + 1} is empty")
            norm.append(tuple(vals))
        object.__setattr__(self, "sets", tuple(norm))

    @property
    def n(self) -> int:
        return len(self.sets)

    def sizes(self) -> tuple[int, ...]:
        return tuple(len(s) for s in self.sets)


def product_set(group: Group, sets: Iterable[Sequence]) -> frozenset:
    """``X_1 * X_2 * ... * X_r`` in the given order; the empty product is ``{e}``."""
    acc = {group.identity}
    for s in sets:
        acc = {group.op(x, y) for x in acc for y in s}
    return frozenset(acc)


def sumset(inst: SumsetInstance, a: SubsetMask) -> frozenset:
    """``S_A``: the ordered product of ``S_i`` over ``i`` in ``A`` (increasing ``i``)."""
    return _sumset(inst, a)


@lru_cache(maxsize=4096)
def _sumset(inst: SumsetInstance, a: SubsetMask) -> frozenset:
    idx = elements_of(a)
    if idx and idx[-1] > inst.n:
        raise InvalidInput(f"subset {format_mask(a)} not inside [{inst.n}]")
    return product_set(inst.group, (inst.sets[i - 1] for i in idx))


def sumset_sizes(inst: SumsetInstance) -> dict[SubsetMask, int]:
    return {a: len(sumset(inst, a)) for a in range(1, full_mask(inst.n) + 1)}


def _require_commutative(inst: SumsetInstance):
    if not inst.group.abelian:
        raise NonCommutative(f"{inst.group.name} is not commutative")


@lru_cache(maxsize=1024)
def phi_table(inst: SumsetInstance, a: SubsetMask) -> dict:
    """Map each ``s`` in ``S_A`` to its lexicographically least decomposition."""
    _require_commutative(inst)
    idx = elements_of(a)
    table: dict = {}
    g = inst.group
    # product() over sorted sets walks tuples in lexicographic order
    for tup in product(*(inst.sets[i - 1] for i in idx)):
        s = g.identity
        for x in tup:
            s = g.op(s, x)
        table.setdefault(s, tup)
    return table


def phi_embed(inst: SumsetInstance, a: SubsetMask, s) -> tuple:
    try:
        return phi_table(inst, a)[inst.group.normalize(s)]
    except KeyError:
        raise NotInSumset(f"{s!r} is not in S_{format_mask(a)}") from None


def embed_image(inst: SumsetInstance) -> LatticeSet:
    """Image of the full sumset under the lexicographic embedding.

    Points are index tuples into the sorted ``S_i`` so that they live in
    ``Z^n`` and can be projected by the lattice module.
    """
    table = phi_table(inst, full_mask(inst.n))
    pos = [{x: j for j, x in enumerate(s)} for s in inst.sets]
    return LatticeSet(
        inst.n, frozenset(tuple(pos[i][x] for i, x in enumerate(tup)) for tup in table.values())
    )


@dataclass(frozen=True)
class SumsetCoverReport:
    lhs: int
    rhs: int
    k: int
    embedded: CoverReport
    containment: dict[SubsetMask, tuple[int, int]]
    box: certificates.LogFeasibility

    @property
    def holds(self) -> bool:
        return self.lhs <= self.rhs

    @property
    def containment_ok(self) -> bool:
        return all(p <= s for p, s in self.containment.values())

    def as_dict(self) -> dict:
        return {
            "lhs": self.lhs,
            "rhs": self.rhs,
            "k": self.k,
            "verdict": "holds" if self.holds else "violated",
            "embedded": self.embedded.as_dict(),
            "containment_ok": self.containment_ok,
            "box_feasible": self.box.feasible,
            "box_verified": self.box.verified,
            "box_lambda": list(self.box.witness) if self.box.witness else None,
        }


def verify_sumset_cover(inst: SumsetInstance, fam: SetFamily, k: int) -> SumsetCoverReport:
    """``|S|^k <= prod_A |S_A|`` for a uniform k-cover, checked directly and through the embedding."""
    _require_commutative(inst)
    if fam.n != inst.n:
        raise InvalidInput(f"family lives on [{fam.n}] but the instance has {inst.n} sets")
    require_uniform_k_cover(fam, k)
    sizes = sumset_sizes(inst)
    full = full_mask(inst.n)
    image = embed_image(inst)
    containment = {a: (projection_size(image, a), sizes[a]) for a in range(1, full + 1)}
    return SumsetCoverReport(
        lhs=sizes[full] ** k,
        rhs=math.prod(sizes[a] for a in fam.members),
        k=k,
        embedded=verify_uniform_cover(image, fam, k),
        containment=containment,
        box=certificates.box_feasibility(sizes, inst.n),
    )


# |A + C|^k <= |C|^(k-1) prod |A + B_i|


@dataclass(frozen=True)
class GymrReport:
    lhs: int
    rhs: int
    k: int
    sizes: dict
    embedded: CoverReport
    bridge: dict

    @property
    def holds(self) -> bool:
        return self.lhs <= self.rhs

    @property
    def equality(self) -> bool:
        return self.lhs == self.rhs

    def as_dict(self) -> dict:
        return {
            "lhs": self.lhs,
            "rhs": self.rhs,
            "k": self.k,
            "verdict": "holds" if self.holds else "violated",
            "equality": self.equality,
            "sizes": self.sizes,
            "embedded": self.embedded.as_dict(),
            "bridge": self.bridge,
        }


def gymr_cover(k: int) -> SetFamily:
    """The pairs ``{i, k+1}`` for ``i <= k`` plus ``[k]`` taken ``k - 1`` times."""
    n = k + 1
    pairs = [mask_of((i, n)) for i in range(1, k + 1)]
    return SetFamily(n, tuple(pairs + [prefix_mask(k)] * (k - 1)))


def verify_gymr(a: Iterable[int], bs: Sequence[Iterable[int]], c: Iterable[int]) -> GymrReport:
    """Check ``|A+C|^k <= |C|^(k-1) prod_i |A+B_i|`` for integer sets with ``C`` inside ``B_1+...+B_k``.

    Alongside the direct count, the lexicographic embedding ``S'`` of ``C + A``
    into ``B_1 x ... x B_k x A`` is built and run through the lattice cover
    inequality with the ``2k - 1`` member cover. ``bridge`` records how the
    projections of ``S'`` compare with ``|C|`` and ``|A + B_i|``; those
    comparisons are reported, not assumed.
    """
    group = FreeAbelian(1)
    k = len(bs)
    if k < 1:
        raise InvalidInput("need at least one B_i")
    inst = SumsetInstance(group, tuple(tuple(b) for b in bs) + (tuple(a),))
    c_set = frozenset(group.normalize(x) for x in c)
    if not c_set:
        raise InvalidInput("C must be non-empty")
    b_sum = sumset(inst, prefix_mask(k))
    if not c_set <= b_sum:
        missing = sorted(c_set - b_sum)
        raise CNotContained(f"C is not inside B_1+...+B_k; e.g. {missing[:5]}")
    a_set = inst.sets[k]
    n = k + 1
    a_plus_c = {x + y for x in a_set for y in c_set}
    a_plus_b = [len({x + y for x in a_set for y in inst.sets[i]}) for i in range(k)]

    table = phi_table(inst, full_mask(n))
    pos = [{x: j for j, x in enumerate(s)} for s in inst.sets]
    image = LatticeSet(
        n,
        frozenset(
            tuple(pos[i][x] for i, x in enumerate(table[s])) for s in a_plus_c
        ),
    )
    cover = gymr_cover(k)
    embedded = verify_uniform_cover(image, cover, k)
    head = projection_size(image, prefix_mask(k))
    pair_sizes = [projection_size(image, mask_of((i, n))) for i in range(1, k + 1)]
    bridge = {
        "embedded_size": len(image),
        "head_projection": head,
        "head_within_C": head <= len(c_set),
        "pair_projections": pair_sizes,
        "pairs_within_A_plus_B": all(p <= q for p, q in zip(pair_sizes, a_plus_b)),
    }
    return GymrReport(
        lhs=len(a_plus_c) ** k,
        rhs=len(c_set) ** (k - 1) * math.prod(a_plus_b),
        k=k,
        sizes={"A+C": len(a_plus_c), "C": len(c_set), "A+B": a_plus_b},
        embedded=embedded,
        bridge=bridge,
    )


# additive cover bound in ordered groups


@dataclass(frozen=True)
class AdditiveCoverReport:
    """``k (|S| - 1)`` against ``sum_A (|S_A| - 1)``."""

    lhs: int
    rhs: int
    k: int
    sizes: dict

    @property
    def holds(self) -> bool:
        return self.lhs >= self.rhs

    def as_dict(self) -> dict:
        return {
            "lhs": self.lhs,
            "rhs": self.rhs,
            "k": self.k,
            "relation": ">=" if self.holds else "<",
            "verdict": "holds" if self.holds else "violated",
            "sizes": {format_mask(a): v for a, v in self.sizes.items()},
        }


def verify_additive_cover(inst: SumsetInstance, fam: SetFamily, k: int) -> AdditiveCoverReport:
    """Additive cover bound; a theorem in torsion-free groups, false in general."""
    if fam.n != inst.n:
        raise InvalidInput(f"family lives on [{fam.n}] but the instance has {inst.n} sets")
    require_uniform_k_cover(fam, k)
    sizes = {a: len(sumset(inst, a)) for a in set(fam.members) | {full_mask(inst.n)}}
    return AdditiveCoverReport(
        lhs=k * (sizes[full_mask(inst.n)] - 1),
        rhs=sum(sizes[a] - 1 for a in fam.members),
        k=k,
        sizes=sizes,
    )


@dataclass
class MarkingWitness:
    """Record of the grid-marking construction.

    ``grid[(i, j)]`` is the index (into ``family``) of the member packed at row
    ``i`` and column ``j``; ``marks[(i, j)]`` are the elements marked while
    processing that cell, all inside copy ``i`` of ``S' - {0}``.
    """

    group: FreeAbelian
    shifts: tuple
    normalized: tuple[tuple, ...]
    maxima: tuple
    family: SetFamily
    k: int
    grid: dict[tuple[int, int], int]
    marks: dict[tuple[int, int], tuple]
    s_full: frozenset
    s_restricted: frozenset
    member_sizes: tuple[int, ...]
    expected_counts: dict[tuple[int, int], int] = field(default_factory=dict)

    @property
    def two_point_sets(self) -> tuple[tuple, ...]:
        """The chosen ``S'_i = {min S_i, max S_i}`` in the original coordinates."""
        g = self.group
        return tuple(
            tuple(sorted({sh, g.op(sh, a)})) for sh, a in zip(self.shifts, self.maxima)
        )

    @property
    def total_marks(self) -> int:
        return sum(len(v) for v in self.marks.values())

    def chain(self) -> tuple[int, int, int]:
        """``(k(|S|-1), k(|S'|-1), sum_A (|S_A|-1))``."""
        return (
            self.k * (len(self.s_full) - 1),
            self.k * (len(self.s_restricted) - 1),
            sum(s - 1 for s in self.member_sizes),
        )

    def audit(self) -> dict[str, bool]:
        n, k = self.family.n, self.k
        zero = self.group.identity
        cells = [(i, j) for i in range(1, k + 1) for j in range(1, n + 1)]
        members = self.family.members
        partition = set(self.grid) == set(cells) and all(
            {j for (i, j), m in self.grid.items() if m == idx} == set(elements_of(a))
            and len([1 for m in self.grid.values() if m == idx]) == len(elements_of(a))
            for idx, a in enumerate(members)
        )
        distinct = True
        inside = True
        for i in range(1, k + 1):
            seen: set = set()
            for j in range(1, n + 1):
                for x in self.marks[(i, j)]:
                    if x in seen:
                        distinct = False
                    seen.add(x)
                    if x == zero or x not in self.s_restricted:
                        inside = False
        counts_ok = all(len(self.marks[c]) == self.expected_counts[c] for c in cells)
        per_member = [0] * len(members)
        for c, m in self.grid.items():
            per_member[m] += len(self.marks[c])
        every_element = all(
            per_member[idx] == self.member_sizes[idx] - 1 for idx in range(len(members))
        )
        top, mid, bottom = self.chain()
        return {
            "grid_partition": partition,
            "marks_distinct_per_copy": distinct,
            "marks_inside_restricted_sumset": inside,
            "cell_counts_match": counts_ok,
            "every_element_marked": every_element,
            "restricted_within_full": self.s_restricted <= self.s_full,
            "chain_upper": top >= mid,
            "chain_lower": mid >= self.total_marks >= bottom,
        }

    def as_dict(self) -> dict:
        top, mid, bottom = self.chain()
        return {
            "k": self.k,
            "two_point_sets": [list(s) for s in self.two_point_sets],
            "size_S": len(self.s_full),
            "size_S_restricted": len(self.s_restricted),
            "total_marks": self.total_marks,
            "chain": [top, mid, bottom],
            "audit": self.audit(),
        }


def _in_interval(x, lo, hi) -> bool:
    return lo < x <= hi


def marking_algorithm(inst: SumsetInstance, fam: SetFamily, k: int) -> MarkingWitness:
    """Run the grid-marking construction for ``S_1, ..., S_n`` in ``Z^d`` under lexicographic order.

    Each ``S_i`` is shifted to have minimum 0 and ``S'_i = {0, a_i}`` with
    ``a_i = max S_i``. The cells of ``[k] x [n]`` are processed row by row;
    the cell ``(i, j)`` holding member ``A`` marks, in copy ``i``, the elements
    of ``a_{[j]-A} + S_A`` lying in ``(a_{[j-1]}, a_{[j]}]``.
    """
    g = inst.group
    if not isinstance(g, FreeAbelian):
        raise UnorderedContext(f"{g.name} has torsion and carries no compatible order")
    if fam.n != inst.n:
        raise InvalidInput(f"family lives on [{fam.n}] but the instance has {inst.n} sets")
    require_uniform_k_cover(fam, k)
    fam = fam.canonicalized()
    n = inst.n

    shifts = tuple(s[0] for s in inst.sets)
    normalized = tuple(
        tuple(sorted(g.op(x, g.neg(sh)) for x in s)) for s, sh in zip(inst.sets, shifts)
    )
    maxima = tuple(s[-1] for s in normalized)
    norm_inst = SumsetInstance(g, normalized)

    def a_of(mask: SubsetMask):
        acc = g.identity
        for i in elements_of(mask):
            acc = g.op(acc, maxima[i - 1])
        return acc

    s_full = sumset(norm_inst, full_mask(n))
    restricted: set = set()
    for a in set(fam.members):
        parts = [
            normalized[i] if (a >> i) & 1 else tuple(sorted({g.identity, maxima[i]}))
            for i in range(n)
        ]
        restricted |= product_set(g, parts)

    grid: dict[tuple[int, int], int] = {}
    for j in range(1, n + 1):
        holders = [idx for idx, a in enumerate(fam.members) if (a >> (j - 1)) & 1]
        for row, idx in enumerate(holders, start=1):
            grid[(row, j)] = idx

    marks: dict[tuple[int, int], tuple] = {}
    expected: dict[tuple[int, int], int] = {}
    member_sets = [sumset(norm_inst, a) for a in fam.members]
    for i in range(1, k + 1):
        for j in range(1, n + 1):
            idx = grid[(i, j)]
            a = fam.members[idx]
            s_a = member_sets[idx]
            lo, hi = a_of(prefix_mask(j - 1)), a_of(prefix_mask(j))
            offset = a_of(prefix_mask(j) & ~a)
            marks[(i, j)] = tuple(
                sorted(y for y in (g.op(offset, x) for x in s_a) if _in_interval(y, lo, hi))
            )
            lo_a, hi_a = a_of(prefix_mask(j - 1) & a), a_of(prefix_mask(j) & a)
            expected[(i, j)] = sum(1 for x in s_a if _in_interval(x, lo_a, hi_a))

    return MarkingWitness(
        group=g,
        shifts=shifts,
        normalized=normalized,
        maxima=maxima,
        family=fam,
        k=k,
        grid=grid,
        marks=marks,
        s_full=s_full,
        s_restricted=frozenset(restricted),
        member_sizes=tuple(len(s) for s in member_sets),
        expected_counts=expected,
    )


# Cauchy-Davenport


@dataclass(frozen=True)
class CauchyDavenportReport:
    size: int
    p: int | None
    excess: int

    @property
    def holds(self) -> bool:
        return (self.p is not None and self.size >= self.p) or self.size - 1 >= self.excess

    def as_dict(self) -> dict:
        return {
            "size": self.size,
            "p": self.p,
            "sum_excess": self.excess,
            "verdict": "holds" if self.holds else "violated",
        }


def verify_cauchy_davenport(inst: SumsetInstance) -> CauchyDavenportReport:
    """``|S| >= p`` or ``|S| - 1 >= sum (|S_i| - 1)``, ``p`` the least prime dividing the order."""
    order = inst.group.order
    if order is None:
        raise InvalidInput("Cauchy-Davenport needs a finite group")
    size = len(sumset(inst, full_mask(inst.n)))
    return CauchyDavenportReport(size, smallest_prime_factor(order), sum(len(s) - 1 for s in inst.sets))


# extremal product sizes and the conjectures


def extreme_products(inst: SumsetInstance, a: SubsetMask) -> tuple[int, int]:
    """``(N_A, n_A)``: max and min of ``|T_1 * ... * T_n|`` where ``T_i = S_i`` for ``i`` in ``A``
    and ``T_i`` is a single element of ``S_i`` otherwise."""
    n = inst.n
    frozen = [i for i in range(n) if not (a >> i) & 1]
    combos = math.prod(len(inst.sets[i]) for i in frozen)
    if combos > MAX_REPLACEMENTS:
        raise InstanceTooLarge(f"{combos} replacement choices exceed the cap of {MAX_REPLACEMENTS}")
    hi, lo = 0, None
    for choice in product(*(inst.sets[i] for i in frozen)):
        parts = list(inst.sets)
        for i, x in zip(frozen, choice):
            parts[i] = (x,)
        size = len(product_set(inst.group, parts))
        hi = max(hi, size)
        lo = size if lo is None else min(lo, size)
    return hi, lo


@dataclass(frozen=True)
class ConjectureReport:
    which: str
    n: int
    sizes: dict[SubsetMask, int]
    feasible: bool
    witness: tuple | None
    certificate: dict[int, Fraction] | None
    verified: bool
    violation: str | None

    def as_dict(self) -> dict:
        out = {
            "conjecture": self.which,
            "feasible": self.feasible,
            "verified": self.verified,
            "sizes": {format_mask(a): v for a, v in sorted(self.sizes.items())},
        }
        if self.feasible:
            out["witness"] = [str(w) if isinstance(w, Fraction) else w for w in self.witness]
        else:
            out["violation"] = self.violation
            out["certificate"] = {str(r): str(y) for r, y in sorted(self.certificate.items())}
        return out


def conjecture_feasibility(inst: SumsetInstance, which: str) -> ConjectureReport:
    """Feasibility of the multiplicative (``"6.1"``) or additive (``"6.2"``) box system.

    ``"6.1"`` asks for ``lambda_i > 0`` with ``prod lambda = |S|`` and
    ``prod_{i in A} lambda_i <= N_A``; ``"6.2"`` asks for ``sigma_i`` with
    ``sum sigma = |S| - 1`` and ``sum_{i in A} sigma_i >= n_A - 1``.
    """
    n = inst.n
    full = full_mask(n)
    size = len(sumset(inst, full))
    if which == "6.1":
        sizes = {a: extreme_products(inst, a)[0] for a in range(1, full)}
        sizes[full] = size
        res = certificates.box_feasibility(sizes, n)
        violation = None if res.feasible else res.violated_constraint()
        return ConjectureReport(
            which, n, sizes, res.feasible, res.witness, res.certificate, res.verified, violation
        )
    if which == "6.2":
        sizes = {a: extreme_products(inst, a)[1] for a in range(1, full)}
        sizes[full] = size
        system = certificates.additive_box_system(sizes, n)
        res = certificates.feasible(system)
        if res.feasible:
            return ConjectureReport(
                which, n, sizes, True, res.witness, None, certificates.check_witness(system, res.witness), None
            )
        return ConjectureReport(
            which,
            n,
            sizes,
            False,
            None,
            res.certificate,
            certificates.check_certificate(system, res.certificate),
            _describe_additive_violation(system, res.certificate),
        )
    raise InvalidInput(f"unknown conjecture {which!r}; expected '6.1' or '6.2'")


def _describe_additive_violation(system: certificates.LinearSystem, y: dict) -> str:
    bound = sum((m * system.rows[r].bound for r, m in y.items()), Fraction(0))
    terms = " + ".join(f"{m}*row{r}" for r, m in sorted(y.items()))
    return f"{terms} gives 0 <= {bound}"


def random_integer_instance(
    rng: random.Random, n: int, max_size: int = 4, lo: int = 0, hi: int = 20, d: int = 1
) -> SumsetInstance:
    group = FreeAbelian(d)

    def element():
        return rng.randint(lo, hi) if d == 1 else tuple(rng.randint(lo, hi) for _ in range(d))

    return SumsetInstance(
        group, tuple(tuple(element() for _ in range(rng.randint(1, max_size))) for _ in range(n))
    )
