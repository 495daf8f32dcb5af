"""Counterexample search for the two box-type conjectures over small groups.

Finite groups are enumerated exhaustively (every ``n``-tuple of non-empty
subsets of size at most ``set_size_max``) unless a seed is given, in which case
``samples`` random tuples are drawn per group. Free abelian groups are always
sampled. Instances are visited in a fixed order, so the stream is
reproducible.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import combinations, islice, product
from typing import Iterator, Sequence

from .errors import ProjentError
from .groups import FreeAbelian, Group
from .sumsets import SumsetInstance, conjecture_feasibility, random_integer_instance


@dataclass
class SearchConfig:
    conjecture: str
    groups: Sequence[Group]
    n: int = 2
    set_size_max: int = 3
    seed: int | None = None
    samples: int = 100
    budget: int | None = None
    value_max: int = 10


@dataclass
class SearchSummary:
    instances: int = 0
    feasible: int = 0
    infeasible: int = 0
    errors: int = 0
    unverified: int = 0
    by_group: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {
            "summary": True,
            "instances": self.instances,
            "feasible": self.feasible,
            "infeasible": self.infeasible,
            "errors": self.errors,
            "unverified_certificates": self.unverified,
            "by_group": self.by_group,
        }


def _subsets(elements: Sequence, max_size: int) -> list[tuple]:
    out = []
    for r in range(1, min(max_size, len(elements)) + 1):
        out.extend(combinations(elements, r))
    return out


def iter_instances(cfg: SearchConfig) -> Iterator[SumsetInstance]:
    rng = random.Random(cfg.seed if cfg.seed is not None else 0)
    for g in cfg.groups:
        if isinstance(g, FreeAbelian):
            for _ in range(cfg.samples):
                yield random_integer_instance(
                    rng, cfg.n, cfg.set_size_max, 0, cfg.value_max, g.d
                )
            continue
        subsets = _subsets(g.elements(), cfg.set_size_max)
        if cfg.seed is None:
            for combo in product(subsets, repeat=cfg.n):
                yield SumsetInstance(g, combo)
        else:
            for _ in range(cfg.samples):
                yield SumsetInstance(g, tuple(rng.choice(subsets) for _ in range(cfg.n)))


def _instance_json(inst: SumsetInstance, full: bool) -> dict:
    out = {
        "group": inst.group.name,
        "sets": [[list(x) if isinstance(x, tuple) else x for x in s] for s in inst.sets],
    }
    if full:
        out["group_spec"] = inst.group.describe()
    return out


def run_search(cfg: SearchConfig) -> Iterator[dict]:
    """Yield one verdict per instance, then a summary record."""
    summary = SearchSummary()
    instances = iter_instances(cfg)
    if cfg.budget is not None:
        instances = islice(instances, cfg.budget)
    for inst in instances:
        summary.instances += 1
        counts = summary.by_group.setdefault(inst.group.name, {"feasible": 0, "infeasible": 0})
        try:
            report = conjecture_feasibility(inst, cfg.conjecture)
        except ProjentError as exc:
            summary.errors += 1
            yield {
                "instance": _instance_json(inst, False),
                "conjecture": cfg.conjecture,
                "error": f"{type(exc).__name__}: {exc}",
            }
            continue
        record = {
            "instance": _instance_json(inst, not report.feasible),
            **report.as_dict(),
        }
        if report.feasible:
            summary.feasible += 1
            counts["feasible"] += 1
        else:
            summary.infeasible += 1
            counts["infeasible"] += 1
            if not report.verified:
                summary.unverified += 1
        yield record
    yield summary.as_dict()
