"""Ambient groups for sumsets: Z^d, Z_m, and finite groups given by a Cayley table.

Elements are plain Python values: ints for Z (d = 1), Z_m and Cayley groups
(table indices), tuples of ints for Z^d with d > 1. Python's ordering on these
values is the order used wherever an order is needed (lexicographic on Z^d).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property
from importlib import resources
from itertools import permutations, product
from typing import Any, Hashable, Sequence

from .errors import InvalidInput

Element = Hashable


@dataclass(frozen=True)
class FreeAbelian:
    """Z^d with the lexicographic order, which is translation invariant."""

    d: int = 1
    kind = "free-abelian"
    abelian = True
    ordered = True
    order = None

    def __post_init__(self):
        if self.d < 1:
            raise InvalidInput("free abelian rank must be positive")

    @property
    def identity(self):
        return 0 if self.d == 1 else (0,) * self.d

    def op(self, x, y):
        if self.d == 1:
            return x + y
        return tuple(a + b for a, b in zip(x, y))

    def neg(self, x):
        return -x if self.d == 1 else tuple(-a for a in x)

    def normalize(self, x):
        if self.d == 1:
            if isinstance(x, (list, tuple)):
                if len(x) != 1:
                    raise InvalidInput(f"{x!r} is not an element of Z")
                x = x[0]
            return int(x)
        if not isinstance(x, (list, tuple)) or len(x) != self.d:
            raise InvalidInput(f"{x!r} is not an element of Z^{self.d}")
        return tuple(int(a) for a in x)

    def describe(self) -> dict:
        return {"kind": self.kind, "d": self.d}

    @property
    def name(self) -> str:
        return "Z" if self.d == 1 else f"Z^{self.d}"


@dataclass(frozen=True)
class Cyclic:
    m: int
    kind = "cyclic"
    abelian = True
    ordered = False
    identity = 0

    def __post_init__(self):
        if self.m < 1:
            raise InvalidInput("cyclic group order must be at least 1")

    @property
    def order(self) -> int:
        return self.m

    def op(self, x, y):
        return (x + y) % self.m

    def neg(self, x):
        return (-x) % self.m

    def normalize(self, x):
        return int(x) % self.m

    def elements(self) -> list[int]:
        return list(range(self.m))

    def describe(self) -> dict:
        return {"kind": self.kind, "m": self.m}

    @property
    def name(self) -> str:
        return f"Z{self.m}"


@dataclass(frozen=True, eq=False)
class CayleyGroup:
    """Finite group on ``{0, ..., order-1}`` with ``table[x][y] = x * y``.

    The group axioms are checked on construction.
    """

    table: tuple[tuple[int, ...], ...]
    identity: int = 0
    label: str = ""
    kind = "cayley"
    ordered = False

    def __post_init__(self):
        table = tuple(tuple(int(v) for v in row) for row in self.table)
        object.__setattr__(self, "table", table)
        _validate_table(table, self.identity)

    def __eq__(self, other):
        return isinstance(other, CayleyGroup) and (self.table, self.identity) == (
            other.table,
            other.identity,
        )

    def __hash__(self):
        return hash((self.table, self.identity))

    @property
    def order(self) -> int:
        return len(self.table)

    @cached_property
    def abelian(self) -> bool:
        t = self.table
        return all(t[x][y] == t[y][x] for x in range(len(t)) for y in range(x))

    def op(self, x, y):
        return self.table[x][y]

    def neg(self, x):
        return self.table[x].index(self.identity)

    def normalize(self, x):
        x = int(x)
        if not 0 <= x < self.order:
            raise InvalidInput(f"{x} is not an element of a group of order {self.order}")
        return x

    def elements(self) -> list[int]:
        return list(range(self.order))

    def element_orders(self) -> list[int]:
        out = []
        for x in range(self.order):
            y, k = x, 1
            while y != self.identity:
                y, k = self.table[y][x], k + 1
            out.append(k)
        return out

    def describe(self) -> dict:
        return {
            "kind": self.kind,
            "order": self.order,
            "identity": self.identity,
            "table": [list(r) for r in self.table],
        }

    @property
    def name(self) -> str:
        return self.label or f"G{self.order}"


Group = FreeAbelian | Cyclic | CayleyGroup

MAX_CAYLEY_ORDER = 64


def _validate_table(table: Sequence[Sequence[int]], e: int):
    n = len(table)
    if n == 0 or n > MAX_CAYLEY_ORDER:
        raise InvalidInput(f"Cayley table order must lie in [1, {MAX_CAYLEY_ORDER}]")
    full = set(range(n))
    for row in table:
        if len(row) != n or set(row) != full:
            raise InvalidInput("Cayley table is not a Latin square")
    for c in range(n):
        if {table[r][c] for r in range(n)} != full:
            raise InvalidInput("Cayley table is not a Latin square")
    if not 0 <= e < n or any(table[e][x] != x or table[x][e] != x for x in range(n)):
        raise InvalidInput(f"{e} is not a two-sided identity")
    for x in range(n):
        tx = table[x]
        for y in range(n):
            txy = table[tx[y]]
            ty = table[y]
            for z in range(n):
                if txy[z] != tx[ty[z]]:
                    raise InvalidInput(f"table is not associative at ({x}, {y}, {z})")


def smallest_prime_factor(m: int) -> int | None:
    if m < 2:
        return None
    p = 2
    while p * p <= m:
        if m % p == 0:
            return p
        p += 1
    return m


def is_prime(m: int) -> bool:
    return m >= 2 and smallest_prime_factor(m) == m


def group_from_json(spec: dict[str, Any]) -> Group:
    kind = spec.get("kind")
    if kind == "cyclic":
        return Cyclic(int(spec["m"]))
    if kind == "free-abelian":
        return FreeAbelian(int(spec.get("d", 1)))
    if kind == "cayley":
        table = spec["table"]
        if "order" in spec and int(spec["order"]) != len(table):
            raise InvalidInput("declared order does not match the table")
        return CayleyGroup(table, int(spec.get("identity", 0)), spec.get("name", ""))
    if kind == "catalog":
        return catalog_group(spec["name"])
    raise InvalidInput(f"unknown group kind {kind!r}")


# small-group catalog


def _from_elements(elements: list, mul, label: str) -> CayleyGroup:
    index = {x: i for i, x in enumerate(elements)}
    table = [[index[mul(x, y)] for y in elements] for x in elements]
    return CayleyGroup(table, 0, label)


def _cyclic_product(*ms: int) -> CayleyGroup:
    elements = list(product(*(range(m) for m in ms)))
    label = "x".join(f"Z{m}" for m in ms)
    return _from_elements(
        elements, lambda x, y: tuple((a + b) % m for a, b, m in zip(x, y, ms)), label
    )


def _perm_group(gens: list[tuple[int, ...]], label: str) -> CayleyGroup:
    ident = tuple(range(len(gens[0])))
    compose = lambda p, q: tuple(p[q[i]] for i in range(len(q)))  # noqa: E731
    elements = [ident]
    frontier = [ident]
    while frontier:
        nxt = []
        for p in frontier:
            for g in gens:
                q = compose(p, g)
                if q not in elements:
                    elements.append(q)
                    nxt.append(q)
        frontier = nxt
    return _from_elements(elements, compose, label)


def _quaternion() -> CayleyGroup:
    # elements (sign, unit) with unit in 1, i, j, k
    units = {
        ("1", "1"): (1, "1"), ("1", "i"): (1, "i"), ("1", "j"): (1, "j"), ("1", "k"): (1, "k"),
        ("i", "1"): (1, "i"), ("i", "i"): (-1, "1"), ("i", "j"): (1, "k"), ("i", "k"): (-1, "j"),
        ("j", "1"): (1, "j"), ("j", "i"): (-1, "k"), ("j", "j"): (-1, "1"), ("j", "k"): (1, "i"),
        ("k", "1"): (1, "k"), ("k", "i"): (1, "j"), ("k", "j"): (-1, "i"), ("k", "k"): (-1, "1"),
    }  # fmt: skip
    elements = [(s, u) for s in (1, -1) for u in "1ijk"]

    def mul(x, y):
        s, u = units[(x[1], y[1])]
        return (x[0] * y[0] * s, u)

    return _from_elements(elements, mul, "Q8")


def build_catalog() -> list[CayleyGroup]:
    """One representative of every isomorphism class of groups of order at most 8."""
    return [
        _cyclic_product(1),
        _cyclic_product(2),
        _cyclic_product(3),
        _cyclic_product(4),
        _cyclic_product(2, 2),
        _cyclic_product(5),
        _cyclic_product(6),
        _perm_group([(1, 0, 2), (1, 2, 0)], "S3"),
        _cyclic_product(7),
        _cyclic_product(8),
        _cyclic_product(4, 2),
        _cyclic_product(2, 2, 2),
        _perm_group([(1, 2, 3, 0), (0, 3, 2, 1)], "D4"),
        _quaternion(),
    ]


def load_catalog(path=None) -> list[CayleyGroup]:
    """Groups from a catalog JSON file (a list of group specs); the bundled one by default."""
    if path is None:
        text = resources.files("projent").joinpath("data/groups_le8.json").read_text()
    else:
        with open(path) as fh:
            text = fh.read()
    data = json.loads(text)
    groups = data["groups"] if isinstance(data, dict) else data
    return [group_from_json(g) for g in groups]


def catalog_group(name: str) -> CayleyGroup:
    for g in load_catalog():
        if g.name == name:
            return g
    raise InvalidInput(f"no group named {name!r} in the catalog")


def catalog_json(groups: Sequence[CayleyGroup]) -> str:
    lines = [json.dumps(dict(g.describe(), name=g.name), sort_keys=True) for g in groups]
    return '{"groups": [\n' + ",\n".join(lines) + "\n]}\n"


def are_isomorphic(g: CayleyGroup, h: CayleyGroup) -> bool:
    """Brute-force isomorphism test; fine for order <= 8."""
    if g.order != h.order:
        return False
    if sorted(g.element_orders()) != sorted(h.element_orders()):
        return False
    n = g.order
    others = [x for x in range(n) if x != g.identity]
    targets = [x for x in range(n) if x != h.identity]
    for perm in permutations(targets):
        f = {g.identity: h.identity, **dict(zip(others, perm))}
        if all(f[g.op(x, y)] == h.op(f[x], f[y]) for x in range(n) for y in range(n)):
            return True
    return False
