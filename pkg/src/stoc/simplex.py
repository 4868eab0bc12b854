"""Exact two-phase simplex over Fractions with Bland's anti-cycling rule."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import Infeasible, InputError

F0 = Fraction(0)
F1 = Fraction(1)


@dataclass
class LinearProgram:
    """minimize c.x  s.t. rows (coeffs, sense, rhs) and lo <= x <= hi, lo = 0."""

    names: list[str]
    objective: list[Fraction]
    rows: list[tuple[dict[int, Fraction], str, Fraction]] = field(default_factory=list)
    upper: list[Fraction | None] = field(default_factory=list)
    row_names: list[str] = field(default_factory=list)

    def __post_init__(self):
        if not self.upper:
            self.upper = [None] * len(self.names)
        if not self.row_names:
            self.row_names = [f"r{i}" for i in range(len(self.rows))]

    @property
    def nvars(self) -> int:
        return len(self.names)

    def add_row(self, coeffs: dict[int, Fraction], sense: str, rhs, name: str | None = None) -> None:
        if sense not in (">=", "<=", "="):
            raise InputError(f"bad constraint sense {sense!r}")
        for j in coeffs:
            if not 0 <= j < self.nvars:
                raise InputError(f"constraint references unknown variable {j}")
        self.rows.append(({j: Fraction(a) for j, a in coeffs.items() if a}, sense, Fraction(rhs)))
        self.row_names.append(name or f"r{len(self.rows) - 1}")

    def value(self, x: Sequence[Fraction]) -> Fraction:
        return sum((c * v for c, v in zip(self.objective, x)), F0)

    def feasible(self, x: Sequence[Fraction]) -> bool:
        if any(v < 0 for v in x):
            return False
        if any(u is not None and v > u for v, u in zip(x, self.upper)):
            return False
        for coeffs, sense, rhs in self.rows:
            lhs = sum((a * x[j] for j, a in coeffs.items()), F0)
            if (sense == ">=" and lhs < rhs) or (sense == "<=" and lhs > rhs) or (sense == "=" and lhs != rhs):
                return False
        return True


@dataclass(frozen=True)
class Solution:
    value: Fraction
    x: tuple[Fraction, ...]
    pivots: int
    presolve: tuple[str, ...]


def _simplex(a: list[list[Fraction]], b: list[Fraction], c: list[Fraction]) -> tuple[list[Fraction], int]:
    """min c.x, a x = b, x >= 0, b >= 0. Returns (x, pivots)."""
    m, n = len(a), len(c)
    cols = n + m
    t = [row[:] + [F1 if k == i else F0 for k in range(m)] + [b[i]] for i, row in enumerate(a)]
    basis = list(range(n, n + m))
    pivots = 0

    def pivot(r: int, j: int) -> None:
        nonlocal pivots
        pivots += 1
        pr = t[r]
        inv = 1 / pr[j]
        if inv != 1:
            t[r] = pr = [v * inv for v in pr]
        nz = [k for k, v in enumerate(pr) if v]
        for i in range(m):
            f = t[i][j]
            if i != r and f:
                row = t[i]
                for k in nz:
                    row[k] -= f * pr[k]
        basis[r] = j

    def run(cost: list[Fraction], allowed: int) -> None:
        while True:
            z = [cost[j] - sum((cost[basis[i]] * t[i][j] for i in range(m) if t[i][j]), F0)
                 for j in range(allowed)]
            enter = next((j for j in range(allowed) if z[j] < 0 and j not in basis), None)
            if enter is None:
                return
            best = None
            for i in range(m):
                if t[i][enter] > 0:
                    ratio = t[i][-1] / t[i][enter]
                    if best is None or ratio < best[0] or (ratio == best[0] and basis[i] < basis[best[1]]):
                        best = (ratio, i)
            if best is None:
                raise InputError("linear program is unbounded")
            pivot(best[1], enter)

    phase1 = [F0] * n + [F1] * m
    run(phase1, cols)
    if sum((t[i][-1] for i in range(m) if basis[i] >= n), F0) > 0:
        raise Infeasible("no feasible point")
    # drive remaining artificials out of the basis; rows with no original entry are redundant
    for i in range(m):
        if basis[i] >= n:
            j = next((j for j in range(n) if t[i][j]), None)
            if j is not None:
                pivot(i, j)
    keep = [i for i in range(m) if basis[i] < n]
    t[:] = [t[i] for i in keep]
    basis[:] = [basis[i] for i in keep]
    m = len(t)
    run(list(c) + [F0] * (cols - n), n)
    x = [F0] * n
    for i in range(m):
        x[basis[i]] = t[i][-1]
    return x, pivots


class _Union:
    def __init__(self, n: int):
        self.p = list(range(n))

    def find(self, i: int) -> int:
        while self.p[i] != i:
            self.p[i] = self.p[self.p[i]]
            i = self.p[i]
        return i

    def union(self, i: int, j: int) -> None:
        a, b = self.find(i), self.find(j)
        if a != b:
            self.p[max(a, b)] = min(a, b)


def solve_lp(lp: LinearProgram) -> Solution:
    """Presolve (merge x_i = x_j ties, drop box bounds of pure covering programs), then simplex."""
    notes = []
    uf = _Union(lp.nvars)
    rows = []
    for coeffs, sense, rhs in lp.rows:
        if sense == "=" and rhs == 0 and len(coeffs) == 2 and sorted(coeffs.values()) == [-1, 1]:
            i, j = coeffs
            uf.union(i, j)
        else:
            rows.append((coeffs, sense, rhs))
    reps = sorted({uf.find(i) for i in range(lp.nvars)})
    if len(reps) < lp.nvars:
        notes.append("merged-ties")
    col = {r: k for k, r in enumerate(reps)}
    cost = [F0] * len(reps)
    upper: list[Fraction | None] = [None] * len(reps)
    for i in range(lp.nvars):
        k = col[uf.find(i)]
        cost[k] += lp.objective[i]
        u = lp.upper[i]
        if u is not None:
            upper[k] = u if upper[k] is None else min(upper[k], u)
    merged = []
    for coeffs, sense, rhs in rows:
        d: dict[int, Fraction] = {}
        for i, a in coeffs.items():
            k = col[uf.find(i)]
            d[k] = d.get(k, F0) + a
        merged.append(({k: a for k, a in d.items() if a}, sense, rhs))

    covering = (all(cst >= 0 for cst in cost) and all(u is None or u >= 1 for u in upper)
                and all(sense == ">=" and all(a >= rhs for a in cf.values()) for cf, sense, rhs in merged))
    if covering and any(u is not None for u in upper):
        notes.append("covering-bounds-dropped")
        upper_rows: list[Fraction | None] = [None] * len(reps)
    else:
        upper_rows = upper

    # standard form
    nv = len(reps)
    a_rows, b = [], []
    extra = 0
    shaped = []
    for cf, sense, rhs in merged:
        shaped.append((cf, sense, rhs))
    for k, u in enumerate(upper_rows):
        if u is not None:
            shaped.append(({k: F1}, "<=", u))
    slack_count = sum(1 for _, s, _ in shaped if s != "=")
    width = nv + slack_count
    for cf, sense, rhs in shaped:
        row = [F0] * width
        for k, a in cf.items():
            row[k] = a
        if sense != "=":
            row[nv + extra] = F1 if sense == "<=" else -F1
            extra += 1
        if rhs < 0:
            row = [-v for v in row]
            rhs = -rhs
        a_rows.append(row)
        b.append(rhs)
    xs, piv = _simplex(a_rows, b, cost + [F0] * slack_count) if a_rows else ([F0] * width, 0)
    y = xs[:nv]
    if covering:
        y = [min(v, u) if u is not None else v for v, u in zip(y, upper)]
    x = tuple(y[col[uf.find(i)]] for i in range(lp.nvars))
    if not lp.feasible(x):
        raise Infeasible("solution failed the feasibility re-check")
    return Solution(lp.value(x), x, piv, tuple(notes))


def format_fraction(f: Fraction) -> str:
    return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"


def dump_lp(lp: LinearProgram) -> str:
    """Plain-text dump: objective, one constraint per line, then bounds."""

    def expr(coeffs) -> str:
        parts = []
        for j, a in sorted(coeffs.items()):
            sign = "-" if a < 0 else "+"
            mag = abs(a)
            term = lp.names[j] if mag == 1 else f"{format_fraction(mag)} {lp.names[j]}"
            parts.append(f"{sign} {term}")
        s = " ".join(parts) or "0"
        return s[2:] if s.startswith("+ ") else s

    lines = ["minimize", "  obj: " + expr(dict(enumerate(lp.objective))), "subject to"]
    for name, (coeffs, sense, rhs) in zip(lp.row_names, lp.rows):
        lines.append(f"  {name}: {expr(coeffs)} {sense} {format_fraction(rhs)}")
    lines.append("bounds")
    for name, u in zip(lp.names, lp.upper):
        lines.append(f"  0 <= {name}" + ("" if u is None else f" <= {format_fraction(u)}"))
    lines.append("end")
    return "\n".join(lines) + "\n"
