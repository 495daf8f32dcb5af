"""Exact finite joint distributions and verifiers for entropy inequalities.

Probabilities are :class:`fractions.Fraction`; entropies are floats in bits,
compared against an explicit tolerance.
"""

from __future__ import annotations

import math
import random
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Mapping, Sequence

from .errors import EmptySet, InvalidInput, NotComparable
from .families import (
    SetFamily,
    SubsetMask,
    compresses_to,
    elements_of,
    full_mask,
    minimal_compression,
    prefix_mask,
    require_k_cover,
    require_uniform_k_cover,
)

DEFAULT_TOL = 1e-9

HOLDS = "holds"
VIOLATED_WITHIN_TOL = "violated-within-tolerance"
VIOLATED = "violated"


@dataclass(frozen=True, eq=False)
class JointDistribution:
    """pmf of ``X = (X_1, ..., X_n)`` over tuples, with exact probabilities.

    Zero-probability tuples are dropped on construction. Subset entropies
    are memoized per instance.
    """

    n: int
    supports: tuple[tuple, ...]
    pmf: Mapping[tuple, Fraction]
    _entropy_cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        if len(self.supports) != self.n:
            raise InvalidInput(f"expected {self.n} supports, got {len(self.supports)}")
        supports = tuple(tuple(s) for s in self.supports)
        object.__setattr__(self, "supports", supports)
        support_sets = [set(s) for s in supports]
        pmf: dict[tuple, Fraction] = {}
        total = Fraction(0)
        for x, p in self.pmf.items():
            x = tuple(x)
            p = Fraction(p)
            if len(x) != self.n:
                raise InvalidInput(f"tuple {x} has length {len(x)}, expected {self.n}")
            if p < 0:
                raise InvalidInput(f"negative probability {p} at {x}")
            for i, v in enumerate(x):
                if v not in support_sets[i]:
                    raise InvalidInput(f"value {v!r} of X_{i + 1} not in its support")
            total += p
            if p:
                pmf[x] = pmf.get(x, Fraction(0)) + p
        if total != 1:
            raise InvalidInput(f"probabilities sum to {total}, not 1")
        object.__setattr__(self, "pmf", pmf)

    @classmethod
    def uniform(cls, points: Sequence[Sequence], n: int | None = None) -> JointDistribution:
        points = sorted({tuple(x) for x in points})
        if not points:
            raise InvalidInput("uniform distribution over an empty set")
        n = len(points[0]) if n is None else n
        supports = tuple(tuple(sorted({x[i] for x in points})) for i in range(n))
        p = Fraction(1, len(points))
        return cls(n, supports, {x: p for x in points})

    @classmethod
    def independent(cls, marginals: Sequence[Mapping]) -> JointDistribution:
        supports = tuple(tuple(sorted(m)) for m in marginals)
        pmf = {}
        for combo in product(*(sorted(m.items()) for m in marginals)):
            p = Fraction(1)
            for _, q in combo:
                p *= Fraction(q)
            pmf[tuple(v for v, _ in combo)] = p
        return cls(len(marginals), supports, pmf)

    def entropy_of(self, mask: SubsetMask) -> float:
        """``H(X_A)`` for the coordinates in ``mask``, memoized."""
        cached = self._entropy_cache.get(mask)
        if cached is None:
            cached = _entropy_of_pmf(_marginal_pmf(self.pmf, elements_of(mask)))
            self._entropy_cache[mask] = cached
        return cached


def _marginal_pmf(pmf: Mapping[tuple, Fraction], coords: Sequence[int]) -> dict:
    out: dict[tuple, Fraction] = defaultdict(Fraction)
    for x, p in pmf.items():
        out[tuple(x[i - 1] for i in coords)] += p
    return dict(out)


def _entropy_of_pmf(pmf: Mapping[tuple, Fraction]) -> float:
    # log2 of numerator and denominator separately keeps tiny p accurate
    h = math.fsum(
        float(p) * (math.log2(p.denominator) - math.log2(p.numerator)) for p in pmf.values() if p
    )
    return max(h, 0.0)


def marginal(d: JointDistribution, mask: SubsetMask) -> JointDistribution:
    """Distribution of ``X_A``; the empty set gives the point mass on ``()``."""
    coords = elements_of(mask)
    if coords and coords[-1] > d.n:
        raise InvalidInput(f"subset {coords} not inside [{d.n}]")
    supports = tuple(d.supports[i - 1] for i in coords)
    return JointDistribution(len(coords), supports, _marginal_pmf(d.pmf, coords))


def entropy(d: JointDistribution) -> float:
    return d.entropy_of(full_mask(d.n))


def conditional_entropy(d: JointDistribution, a: SubsetMask, b: SubsetMask) -> float:
    """``H(X_A | X_B) = H(X_{A u B}) - H(X_B)``."""
    return d.entropy_of(a | b) - d.entropy_of(b)


@dataclass(frozen=True)
class EntropyReport:
    """Outcome of checking ``lhs <= rhs``, in bits."""

    lhs: float
    rhs: float
    tol: float = DEFAULT_TOL
    label: str = ""

    @property
    def slack(self) -> float:
        return self.rhs - self.lhs

    @property
    def verdict(self) -> str:
        if self.slack >= -self.tol:
            return HOLDS
        scale = max(1.0, abs(self.lhs), abs(self.rhs))
        if -self.slack <= self.tol * scale:
            return VIOLATED_WITHIN_TOL
        return VIOLATED

    @property
    def holds(self) -> bool:
        return self.verdict == HOLDS

    def as_dict(self) -> dict:
        return {
            "label": self.label,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "slack": self.slack,
            "tol": self.tol,
            "verdict": self.verdict,
        }


def _sum_entropies(d: JointDistribution, fam: SetFamily) -> float:
    return math.fsum(d.entropy_of(a) for a in fam.members)


def check_submodularity(
    d: JointDistribution, a: SubsetMask, b: SubsetMask, tol: float = DEFAULT_TOL
) -> EntropyReport:
    lhs = d.entropy_of(a | b) + d.entropy_of(a & b)
    rhs = d.entropy_of(a) + d.entropy_of(b)
    return EntropyReport(lhs, rhs, tol, "submodularity")


def verify_shearer(
    d: JointDistribution, fam: SetFamily, k: int, tol: float = DEFAULT_TOL
) -> EntropyReport:
    """``k H(X) <= sum over A of H(X_A)`` for a k-cover."""
    _check_ground(d, fam)
    require_k_cover(fam, k)
    return EntropyReport(k * entropy(d), _sum_entropies(d, fam), tol, "shearer")


def star_sets(a: SubsetMask) -> tuple[SubsetMask, SubsetMask]:
    """``(A_*, A^*)``: ``{1..a-1}`` and the gaps of ``A`` inside ``{1..b-1}``."""
    if not a:
        raise EmptySet("star sets need a non-empty subset")
    elems = elements_of(a)
    lo, hi = elems[0], elems[-1]
    return prefix_mask(lo - 1), prefix_mask(hi - 1) & ~a


def verify_madiman_tetali(
    d: JointDistribution, fam: SetFamily, k: int, tol: float = DEFAULT_TOL
) -> tuple[EntropyReport, EntropyReport]:
    """Two-sided bound on ``k H(X)`` by conditional entropies over a uniform k-cover.

    Returns ``(lower, upper)`` where ``lower`` checks
    ``sum H(X_A | X_{A^*}) <= k H(X)`` and ``upper`` checks
    ``k H(X) <= sum H(X_A | X_{A_*})``.
    """
    _check_ground(d, fam)
    require_uniform_k_cover(fam, k)
    kh = k * entropy(d)
    low_terms, up_terms = [], []
    for a in fam.members:
        lower_star, upper_star = star_sets(a)
        low_terms.append(conditional_entropy(d, a, upper_star))
        up_terms.append(conditional_entropy(d, a, lower_star))
    lower = EntropyReport(math.fsum(low_terms), kh, tol, "madiman-tetali lower")
    upper = EntropyReport(kh, math.fsum(up_terms), tol, "madiman-tetali upper")
    return lower, upper


@dataclass(frozen=True)
class BoxCertificate:
    """Per-coordinate entropies ``h_i = H(X_i | X_1, ..., X_{i-1})``."""

    h: tuple[float, ...]

    def total(self, mask: SubsetMask) -> float:
        return math.fsum(self.h[i - 1] for i in elements_of(mask))


def box_certificate(d: JointDistribution) -> BoxCertificate:
    return BoxCertificate(
        tuple(max(conditional_entropy(d, 1 << i, prefix_mask(i)), 0.0) for i in range(d.n))
    )


def check_box_certificate(
    d: JointDistribution, cert: BoxCertificate, tol: float = DEFAULT_TOL
) -> list[tuple[SubsetMask, EntropyReport, EntropyReport]]:
    """Sandwich checks for every non-empty ``A``.

    Each entry is ``(A, lower, upper)`` with ``lower`` checking
    ``H(X_A | X_{A^*}) <= sum_{i in A} h_i`` and ``upper`` checking
    ``sum_{i in A} h_i <= H(X_A | X_{A_*})``. The empty set slot is replaced
    by the total ``sum h_i = H(X)`` check, reported as ``A = 0`` with both
    directions.
    """
    total = math.fsum(cert.h)
    h = entropy(d)
    out = [
        (
            0,
            EntropyReport(h, total, tol, "sum h <= H"),
            EntropyReport(total, h, tol, "H <= sum h"),
        )
    ]
    for a in range(1, 1 << d.n):
        lower_star, upper_star = star_sets(a)
        s = cert.total(a)
        out.append(
            (
                a,
                EntropyReport(conditional_entropy(d, a, upper_star), s, tol, "box lower"),
                EntropyReport(s, conditional_entropy(d, a, lower_star), tol, "box upper"),
            )
        )
    return out


def verify_gen1(
    d: JointDistribution, fam_a: SetFamily, fam_b: SetFamily, tol: float = DEFAULT_TOL
) -> EntropyReport:
    """``sum_B H(X_B) <= sum_A H(X_A)`` when ``fam_b`` is a compression of ``fam_a``."""
    _check_ground(d, fam_a)
    _check_ground(d, fam_b)
    if not compresses_to(fam_a, fam_b):
        raise NotComparable(f"{fam_b!r} is not a compression of {fam_a!r}")
    return EntropyReport(_sum_entropies(d, fam_b), _sum_entropies(d, fam_a), tol, "gen1")


def verify_gen2(d: JointDistribution, fam: SetFamily, tol: float = DEFAULT_TOL) -> EntropyReport:
    """Compare against the minimal compression directly, without a reachability search."""
    _check_ground(d, fam)
    sharp = minimal_compression(fam)
    return EntropyReport(_sum_entropies(d, sharp), _sum_entropies(d, fam), tol, "gen2")


def _check_ground(d: JointDistribution, fam: SetFamily):
    if fam.n != d.n:
        raise InvalidInput(f"family lives on [{fam.n}] but distribution has {d.n} variables")


def random_distribution(
    rng: random.Random, n: int, max_support: int = 4, max_denominator: int = 64
) -> JointDistribution:
    """Random rational pmf with denominator at most ``max_denominator``.

    ``D`` unit weights are spread over a handful of random atoms; few atoms
    give strongly dependent coordinates, many give nearly independent ones.
    """
    supports = tuple(tuple(range(rng.randint(1, max_support))) for _ in range(n))
    denom = rng.randint(1, max_denominator)
    atoms = [tuple(rng.choice(s) for s in supports) for _ in range(rng.randint(1, 16))]
    weights: dict[tuple, int] = defaultdict(int)
    for _ in range(denom):
        weights[rng.choice(atoms)] += 1
    return JointDistribution(n, supports, {x: Fraction(w, denom) for x, w in weights.items()})
