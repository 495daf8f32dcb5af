"""Exact linear feasibility by Fourier-Motzkin elimination.

A system is a list of rows ``c . x (<= | =) b`` over the rationals. The solver
returns either a rational witness or a Farkas-style certificate: multipliers
``y`` (non-negative on ``<=`` rows, any sign on ``=`` rows) with
``sum y_r c_r = 0`` and ``sum y_r b_r < 0``. Both are checkable by direct
substitution.

Log-space systems (``c . x <= log2 v`` with integer ``v``) are solved the same
way after rounding the logs to rationals with a small slack; their witnesses are
re-checked multiplicatively and their certificates by exact integer powers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .errors import InstanceTooLarge, InvalidInput
from .families import SubsetMask, elements_of, full_mask

MAX_VARS = 8
MAX_ROWS = 300
MAX_DERIVED_ROWS = 20_000

LE = "<="
EQ = "="


@dataclass(frozen=True)
class Row:
    coeffs: tuple[Fraction, ...]
    rel: str
    bound: Fraction

    def __post_init__(self):
        if self.rel not in (LE, EQ):
            raise InvalidInput(f"unknown relation {self.rel!r}")
        object.__setattr__(self, "coeffs", tuple(Fraction(c) for c in self.coeffs))
        object.__setattr__(self, "bound", Fraction(self.bound))

    def value(self, x: Sequence[Fraction]) -> Fraction:
        return sum((c * v for c, v in zip(self.coeffs, x)), Fraction(0))

    def satisfied_by(self, x: Sequence[Fraction]) -> bool:
        lhs = self.value(x)
        return lhs == self.bound if self.rel == EQ else lhs <= self.bound


@dataclass(frozen=True)
class LinearSystem:
    n: int
    rows: tuple[Row, ...]

    def __post_init__(self):
        object.__setattr__(self, "rows", tuple(self.rows))
        for r in self.rows:
            if len(r.coeffs) != self.n:
                raise InvalidInput(f"row has {len(r.coeffs)} coefficients, expected {self.n}")

    @classmethod
    def build(cls, n: int, rows: Sequence[tuple[Sequence, str, object]]) -> LinearSystem:
        return cls(n, tuple(Row(tuple(c), rel, b) for c, rel, b in rows))


@dataclass(frozen=True)
class Feasibility:
    feasible: bool
    witness: tuple[Fraction, ...] | None = None
    certificate: dict[int, Fraction] | None = None


@dataclass
class _Derived:
    coeffs: list[Fraction]
    bound: Fraction
    mult: dict[int, Fraction] = field(default_factory=dict)


def _normal_key(coeffs: Sequence[Fraction]) -> tuple | None:
    for c in coeffs:
        if c:
            s = abs(c)
            return tuple(x / s for x in coeffs)
    return None


def _prune(rows: list[_Derived]) -> list[_Derived]:
    """Keep, for each direction, only the row with the tightest bound."""
    best: dict[tuple, tuple[Fraction, _Derived]] = {}
    order = []
    for r in rows:
        key = _normal_key(r.coeffs)
        if key is None:
            continue
        scale = next(abs(c) for c in r.coeffs if c)
        b = r.bound / scale
        if key not in best:
            order.append(key)
            best[key] = (b, r)
        elif b < best[key][0]:
            best[key] = (b, r)
    return [best[k][1] for k in order]


def _combine(p: _Derived, q: _Derived, v: int) -> _Derived:
    sp = 1 / p.coeffs[v]
    sq = 1 / -q.coeffs[v]
    coeffs = [a * sp + b * sq for a, b in zip(p.coeffs, q.coeffs)]
    coeffs[v] = Fraction(0)
    mult = {r: y * sp for r, y in p.mult.items()}
    for r, y in q.mult.items():
        mult[r] = mult.get(r, Fraction(0)) + y * sq
    return _Derived(coeffs, p.bound * sp + q.bound * sq, {r: y for r, y in mult.items() if y})


def _contradiction(rows: list[_Derived]) -> dict[int, Fraction] | None:
    for r in rows:
        if not any(r.coeffs) and r.bound < 0:
            return dict(r.mult)
    return None


def feasible(system: LinearSystem) -> Feasibility:
    """Decide feasibility, eliminating variables in index order."""
    if system.n > MAX_VARS or len(system.rows) > MAX_ROWS:
        raise InstanceTooLarge(
            f"system of {system.n} variables and {len(system.rows)} rows exceeds "
            f"the caps ({MAX_VARS} variables, {MAX_ROWS} rows)"
        )
    n = system.n
    current: list[_Derived] = []
    for idx, row in enumerate(system.rows):
        current.append(_Derived(list(row.coeffs), row.bound, {idx: Fraction(1)}))
        if row.rel == EQ:
            current.append(
                _Derived([-c for c in row.coeffs], -row.bound, {idx: Fraction(-1)})
            )

    cert = _contradiction(current)
    if cert is not None:
        return Feasibility(False, certificate=cert)

    stages: list[list[_Derived]] = []
    current = _prune(current)
    for v in range(n):
        stages.append(current)
        pos = [r for r in current if r.coeffs[v] > 0]
        neg = [r for r in current if r.coeffs[v] < 0]
        nxt = [r for r in current if r.coeffs[v] == 0]
        if len(pos) * len(neg) + len(nxt) > MAX_DERIVED_ROWS:
            raise InstanceTooLarge("Fourier-Motzkin elimination blew past its row budget")
        nxt.extend(_combine(p, q, v) for p in pos for q in neg)
        cert = _contradiction(nxt)
        if cert is not None:
            return Feasibility(False, certificate=cert)
        current = _prune(nxt)

    x: list[Fraction] = [Fraction(0)] * n
    for v in range(n - 1, -1, -1):
        lo, hi = None, None
        for r in stages[v]:
            c = r.coeffs[v]
            if not c:
                continue
            rest = sum((r.coeffs[t] * x[t] for t in range(v + 1, n)), Fraction(0))
            bound = (r.bound - rest) / c
            if c > 0:
                hi = bound if hi is None else min(hi, bound)
            else:
                lo = bound if lo is None else max(lo, bound)
        val = Fraction(0)
        if lo is not None and val < lo:
            val = lo
        if hi is not None and val > hi:
            val = hi
        x[v] = val
    witness = tuple(x)
    if not all(r.satisfied_by(witness) for r in system.rows):
        raise AssertionError("back-substitution produced a point violating the system")
    return Feasibility(True, witness=witness)


def check_witness(system: LinearSystem, x: Sequence[Fraction]) -> bool:
    return len(x) == system.n and all(r.satisfied_by(x) for r in system.rows)


def check_certificate(system: LinearSystem, y: Mapping[int, Fraction]) -> bool:
    """Whether ``y`` proves infeasibility: the combined row reads ``0 <= negative``."""
    total = [Fraction(0)] * system.n
    bound = Fraction(0)
    for r, m in y.items():
        row = system.rows[r]
        if row.rel == LE and m < 0:
            return False
        for i, c in enumerate(row.coeffs):
            total[i] += m * c
        bound += m * row.bound
    return not any(total) and bound < 0


# log-space systems


def _log_fraction(v: int) -> Fraction:
    return Fraction(math.log2(v)).limit_denominator(10**12)


@dataclass(frozen=True)
class LogFeasibility:
    """Feasibility of ``c . x (<= | =) log2 v`` rows over the reals.

    ``witness`` holds the exponentiated values ``2**x_i``. ``verified`` records
    the independent re-check: multiplicative for a witness, exact integer
    powers for a certificate.
    """

    feasible: bool
    witness: tuple[float, ...] | None
    certificate: dict[int, Fraction] | None
    verified: bool
    rows: tuple[tuple[tuple[int, ...], str, int], ...]

    def violated_constraint(self) -> str | None:
        """Human-readable form of the aggregated violated inequality."""
        if self.certificate is None:
            return None
        num, den = [], []
        for r, y in sorted(self.certificate.items()):
            _, rel, v = self.rows[r]
            (num if y > 0 else den).append(f"{v}^{abs(y)}")
        return f"{' * '.join(num) or '1'} < {' * '.join(den) or '1'}"


def solve_log_system(
    n: int,
    rows: Sequence[tuple[Sequence[int], str, int]],
    slack: float = 1e-9,
    rel_tol: float = 1e-9,
) -> LogFeasibility:
    rows = tuple((tuple(int(c) for c in coeffs), rel, int(v)) for coeffs, rel, v in rows)
    for _, _, v in rows:
        if v <= 0:
            raise InvalidInput("log-space bounds must be positive integers")
    slack_q = Fraction(slack)
    system = LinearSystem.build(
        n,
        [
            (coeffs, rel, _log_fraction(v) + (slack_q if rel == LE else 0))
            for coeffs, rel, v in rows
        ],
    )
    result = feasible(system)
    if result.feasible:
        lam = tuple(2.0 ** float(x) for x in result.witness)
        ok = True
        for coeffs, rel, v in rows:
            got = math.prod(l**c for l, c in zip(lam, coeffs))
            if rel == LE:
                ok &= got <= v * (1 + rel_tol)
            else:
                ok &= abs(got - v) <= rel_tol * v
        return LogFeasibility(True, lam, None, ok, rows)
    return LogFeasibility(
        False, None, result.certificate, _verify_log_certificate(rows, result.certificate), rows
    )


def _verify_log_certificate(rows, y: Mapping[int, Fraction]) -> bool:
    """Exact check that ``sum y_r log2 v_r < 0`` with the coefficients cancelling."""
    total = [Fraction(0)] * (len(rows[0][0]) if rows else 0)
    scale = 1
    for r, m in y.items():
        coeffs, rel, _ = rows[r]
        if rel == LE and m < 0:
            return False
        for i, c in enumerate(coeffs):
            total[i] += m * c
        scale = math.lcm(scale, m.denominator)
    if any(total):
        return False
    num, den = 1, 1
    for r, m in y.items():
        e = int(m * scale)
        v = rows[r][2]
        if e > 0:
            num *= v**e
        elif e < 0:
            den *= v ** (-e)
    return num < den


def box_feasibility(sizes: Mapping[SubsetMask, int], n: int, slack: float = 1e-9) -> LogFeasibility:
    """Constants ``lambda_i`` with ``prod lambda = sizes[[n]]`` and ``prod_{A} lambda <= sizes[A]``.

    Solved in ``x_i = log2 lambda_i``.
    """
    full = full_mask(n)
    if full not in sizes:
        raise InvalidInput("sizes must include the full set")
    rows = []
    for a in range(1, full + 1):
        if a == full or a not in sizes:
            continue
        rows.append((_indicator(a, n), LE, sizes[a]))
    rows.append((_indicator(full, n), EQ, sizes[full]))
    return solve_log_system(n, rows, slack)


def additive_box_system(sizes: Mapping[SubsetMask, int], n: int) -> LinearSystem:
    """``sum sigma = sizes[[n]] - 1`` and ``sum_{i in A} sigma_i >= sizes[A] - 1``."""
    full = full_mask(n)
    rows = []
    for a in range(1, full):
        if a in sizes:
            rows.append(([-c for c in _indicator(a, n)], LE, -(sizes[a] - 1)))
    rows.append((_indicator(full, n), EQ, sizes[full] - 1))
    return LinearSystem.build(n, rows)


def _indicator(a: SubsetMask, n: int) -> tuple[int, ...]:
    members = set(elements_of(a))
    return tuple(1 if i in members else 0 for i in range(1, n + 1))
