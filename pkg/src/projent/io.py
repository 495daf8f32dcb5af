"""JSON readers and writers for families, distributions, point sets, groups and instances.

Indices in family files are 1-based. Rational probabilities are strings such
as ``"1/3"``.
"""

from __future__ import annotations

import json
import os
from fractions import Fraction
from typing import Any

from .entropy import JointDistribution
from .errors import InvalidInput
from .families import SetFamily
from .groups import Group, group_from_json
from .lattice import LatticeSet
from .sumsets import SumsetInstance


class ParseError(InvalidInput):
    def __init__(self, path, message, line=None, col=None):
        where = f"{path}:{line}:{col}" if line is not None else str(path)
        super().__init__(f"{where}: {message}")
        self.path, self.line, self.col = path, line, col


def read_json(path) -> Any:
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise ParseError(path, exc.strerror or str(exc)) from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(path, exc.msg, exc.lineno, exc.colno) from None


def _field(data, key, path):
    if not isinstance(data, dict) or key not in data:
        raise ParseError(path, f"missing field {key!r}")
    return data[key]


def family_from_json(data, path="<family>") -> SetFamily:
    try:
        return SetFamily.from_sets(int(_field(data, "n", path)), _field(data, "sets", path))
    except (TypeError, ValueError) as exc:
        raise ParseError(path, str(exc)) from None


def family_to_json(fam: SetFamily) -> dict:
    return {"n": fam.n, "sets": fam.sets()}


def load_family(path) -> SetFamily:
    return family_from_json(read_json(path), path)


def distribution_from_json(data, path="<distribution>") -> JointDistribution:
    try:
        n = int(_field(data, "n", path))
        supports = tuple(tuple(s) for s in _field(data, "supports", path))
        pmf: dict = {}
        for entry in _field(data, "pmf", path):
            x = tuple(entry["x"])
            pmf[x] = pmf.get(x, Fraction(0)) + Fraction(str(entry["p"]))
        return JointDistribution(n, supports, pmf)
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        raise ParseError(path, f"bad distribution: {exc}") from None


def distribution_to_json(d: JointDistribution) -> dict:
    return {
        "n": d.n,
        "supports": [list(s) for s in d.supports],
        "pmf": [{"x": list(x), "p": str(p)} for x, p in sorted(d.pmf.items())],
    }


def load_distribution(path) -> JointDistribution:
    return distribution_from_json(read_json(path), path)


def lattice_from_json(data, path="<lattice>") -> LatticeSet:
    try:
        return LatticeSet(int(_field(data, "n", path)), frozenset(map(tuple, _field(data, "points", path))))
    except (TypeError, ValueError) as exc:
        raise ParseError(path, str(exc)) from None


def lattice_to_json(s: LatticeSet) -> dict:
    return {"n": s.n, "points": [list(p) for p in s.sorted_points()]}


def load_lattice(path) -> LatticeSet:
    return lattice_from_json(read_json(path), path)


def load_group(path) -> Group:
    data = read_json(path)
    try:
        return group_from_json(data)
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(path, f"bad group: {exc}") from None


def instance_from_json(data, path="<instance>", group: Group | None = None) -> SumsetInstance:
    """Instance file: ``{"group": <group spec or path>, "sets": [[...], ...]}``.

    ``group`` overrides whatever the file names.
    """
    try:
        if group is None:
            ref = _field(data, "group", path)
            if isinstance(ref, str):
                base = os.path.dirname(os.fspath(path)) if isinstance(path, (str, os.PathLike)) else ""
                group = load_group(os.path.join(base, ref))
            else:
                group = group_from_json(ref)
        return SumsetInstance(group, tuple(tuple(s) for s in _field(data, "sets", path)))
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(path, f"bad instance: {exc}") from None


def instance_to_json(inst: SumsetInstance) -> dict:
    return {
        "group": inst.group.describe(),
        "sets": [[list(x) if isinstance(x, tuple) else x for x in s] for s in inst.sets],
    }


def load_instance(path, group: Group | None = None) -> SumsetInstance:
    return instance_from_json(read_json(path), path, group)


def load_gymr(path) -> tuple[list[int], list[list[int]], list[int]]:
    """``{"A": [...], "B": [[...], ...], "C": [...]}``"""
    data = read_json(path)
    try:
        return (
            [int(x) for x in _field(data, "A", path)],
            [[int(x) for x in b] for b in _field(data, "B", path)],
            [int(x) for x in _field(data, "C", path)],
        )
    except (TypeError, ValueError) as exc:
        raise ParseError(path, str(exc)) from None
