import random
from fractions import Fraction
from itertools import combinations, combinations_with_replacement, product
from math import ceil, floor

import pytest

from projent.certificates import LinearSystem
from projent.families import SetFamily, elementary_compression, legal_pairs, popcount


@pytest.fixture
def rng():
    return random.Random(20240607)


def all_families(n, max_m):
    """Every multiset of non-empty subsets of [n] with total size at most max_m."""
    masks = list(range(1, 1 << n))
    out = []
    for length in range(1, max_m + 1):
        for combo in combinations_with_replacement(masks, length):
            if sum(popcount(a) for a in combo) <= max_m:
                out.append(SetFamily(n, combo))
    return out


def closure(fam):
    """All canonical forms reachable by elementary compressions, with no pruning."""
    seen = {fam.canonical}
    stack = [fam]
    while stack:
        f = stack.pop()
        for i, j in legal_pairs(f):
            g = elementary_compression(f, i, j)
            if g.canonical not in seen:
                seen.add(g.canonical)
                stack.append(g)
    return seen


# random linear systems whose feasibility an integer grid decides exactly

GRID_SCALE = 24  # 1/(2 det) with |det| <= 4 for 3x3 {-1,0,1} matrices and half-integer bounds
BOX = 5


def random_system(rng, n=None):
    """Coefficients in {-1,0,1}, bounds in [-5,5] with denominator 2, plus the box |x_i| <= 5."""
    n = n or rng.randint(1, 3)
    rows = []
    for _ in range(rng.randint(1, 6)):
        coeffs = [rng.choice((-1, 0, 1)) for _ in range(n)]
        if not any(coeffs):
            coeffs[rng.randrange(n)] = 1
        rel = "=" if rng.random() < 0.2 else "<="
        rows.append((coeffs, rel, Fraction(rng.randint(-10, 10), 2)))
    for i in range(n):
        e = [0] * n
        e[i] = 1
        rows.append((list(e), "<=", BOX))
        e[i] = -1
        rows.append((list(e), "<=", BOX))
    rng.shuffle(rows)
    return LinearSystem.build(n, rows)


def grid_feasible(system):
    """Search the grid (1/24)Z^n inside the box; the last coordinate is scanned as an interval."""
    s = GRID_SCALE
    n = system.n
    rows = [([int(c) for c in r.coeffs], r.rel, r.bound * s) for r in system.rows]
    span = range(-BOX * s, BOX * s + 1)
    for head in product(span, repeat=n - 1):
        lo, hi = -BOX * s, BOX * s
        ok = True
        for coeffs, rel, b in rows:
            rest = b - sum(c * y for c, y in zip(coeffs, head))
            c = coeffs[-1]
            if c == 0:
                if rest < 0 or (rel == "=" and rest != 0):
                    ok = False
                    break
                continue
            t = rest / c
            if rel == "=":
                lo, hi = max(lo, ceil(t)), min(hi, floor(t))
            elif c > 0:
                hi = min(hi, floor(t))
            else:
                lo = max(lo, ceil(t))
            if lo > hi:
                ok = False
                break
        if ok and lo <= hi:
            return True
    return False


def vertex_feasible(system):
    """Exact oracle: a bounded non-empty polyhedron has a vertex among the n-row intersections."""
    n = system.n
    rows = list(system.rows)
    for chosen in combinations(range(len(rows)), n):
        mat = [list(rows[i].coeffs) + [rows[i].bound] for i in chosen]
        x = _solve(mat, n)
        if x is not None and all(r.satisfied_by(x) for r in rows):
            return True
    return False if rows else True


def _solve(mat, n):
    m = [[Fraction(v) for v in row] for row in mat]
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col]), None)
        if piv is None:
            return None
        m[col], m[piv] = m[piv], m[col]
        for r in range(n):
            if r != col and m[r][col]:
                f = m[r][col] / m[col][col]
                m[r] = [a - f * b for a, b in zip(m[r], m[col])]
    return tuple(m[i][n] / m[i][i] for i in range(n))
