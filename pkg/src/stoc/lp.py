"""Gadget tau-cover linear-programming upper bound on capacity.

A gadget (S1, S2, c1, c2) comes from vertex sets A, B through closures:
S1 = cl(A) | cl(B), S2 = cl(A) & cl(B), weight |A| + |B|.  Every gadget owns
two tied variables, one per part, each priced w / (2 n tau).  For every edge
and colour, the parts of that colour touching the edge must carry total
weight at least 1.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import CapExceeded, InputError
from .graphs import Graph
from .interleave import InterleavedGraph
from .simplex import LinearProgram, Solution, dump_lp, solve_lp

GADGET_BUDGET = 200_000


def closure(g: Graph, A: Iterable[int], mode: str = "formula") -> frozenset[int]:
    """{v : N(v) within A}; mode 'union' also adds A itself."""
    a = frozenset(A)
    mask = sum(1 << v for v in a)
    cl = frozenset(v for v in range(g.n) if g.out_masks[v] & ~mask == 0)
    if mode == "formula":
        return cl
    if mode == "union":
        return cl | a
    raise InputError(f"unknown closure mode {mode!r}")


@dataclass(frozen=True)
class Gadget:
    S1: frozenset[int]
    S2: frozenset[int]
    c1: int
    c2: int
    weight: int
    A: frozenset[int] = field(default=frozenset(), compare=False)
    B: frozenset[int] = field(default=frozenset(), compare=False)

    @property
    def trivial(self) -> bool:
        return len(self.S1) == 1 and not self.S2 and self.weight == 1

    @property
    def key(self) -> tuple:
        return (tuple(sorted(self.S1)), tuple(sorted(self.S2)), self.c1, self.c2)


def trivial_gadget(v: int, c: int) -> Gadget:
    return Gadget(frozenset([v]), frozenset(), c, c, 1, frozenset([v]), frozenset())


def _subsets(n: int, k: int) -> list[frozenset[int]]:
    return [frozenset(c) for size in range(k + 1) for c in itertools.combinations(range(n), size)]


def enumerate_gadgets(g: Graph, max_support: int, tau: int, mode: str = "formula",
                      budget: int = GADGET_BUDGET) -> list[Gadget]:
    """Trivial gadgets plus closures of all |A|, |B| <= max_support.

    Gadgets with an empty inside take c2 = c1 (that part constrains nothing).
    Duplicates by (S1, S2, c1, c2) keep the smallest weight.
    """
    if max_support < 0 or tau < 1:
        raise InputError("need max_support >= 0 and tau >= 1")
    n_sets = sum(math.comb(g.n, k) for k in range(min(max_support, g.n) + 1))
    estimate = n_sets * (n_sets + 1) // 2 * tau * tau
    if estimate > budget:
        raise CapExceeded(f"about {estimate} gadget candidates exceed budget {budget}")
    best: dict[tuple, Gadget] = {}

    def offer(gd: Gadget) -> None:
        cur = best.get(gd.key)
        if cur is None or gd.weight < cur.weight:
            best[gd.key] = gd

    for v in range(g.n):
        for c in range(tau):
            offer(trivial_gadget(v, c))
    if max_support >= 1:
        subsets = _subsets(g.n, max_support)
        cls = [closure(g, s, mode) for s in subsets]
        for i, j in itertools.combinations_with_replacement(range(len(subsets)), 2):
            s1, s2 = cls[i] | cls[j], cls[i] & cls[j]
            w = len(subsets[i]) + len(subsets[j])
            if not s1 or w == 0:
                continue
            for c1 in range(tau):
                for c2 in (range(tau) if s2 else (c1,)):
                    offer(Gadget(s1, s2, c1, c2, w, subsets[i], subsets[j]))
    return sorted(best.values(), key=lambda gd: (gd.weight, gd.key))


@dataclass
class LPInstance:
    graph: Graph
    tau: int
    gadgets: list[Gadget]
    program: LinearProgram

    def dump(self) -> str:
        return dump_lp(self.program)


def _edges(g: Graph) -> list[tuple[int, int]]:
    return sorted({(min(u, v), max(u, v)) for u, v in g.arcs()})


def build_lp(g: Graph, gadgets: Sequence[Gadget], tau: int) -> LPInstance:
    for gd in gadgets:
        if not (0 <= gd.c1 < tau and 0 <= gd.c2 < tau):
            raise InputError(f"gadget colour outside [0,{tau}): {gd.key}")
    names, cost = [], []
    scale = Fraction(1, 2 * g.n * tau)
    parts = []  # (variable index, vertex set, colour)
    for i, gd in enumerate(gadgets):
        for tag, S, c in (("o", gd.S1, gd.c1), ("i", gd.S2, gd.c2)):
            parts.append((len(names), S, c))
            names.append(f"x{i}{tag}")
            cost.append(gd.weight * scale)
    lp = LinearProgram(names, cost, upper=[Fraction(1)] * len(names))
    for u, v in _edges(g):
        for c in range(tau):
            coeffs = {j: Fraction(1) for j, S, col in parts if col == c and (u in S or v in S)}
            lp.add_row(coeffs, ">=", 1, name=f"cover_{u}_{v}_c{c}")
    for i in range(len(gadgets)):
        lp.add_row({2 * i: Fraction(1), 2 * i + 1: Fraction(-1)}, "=", 0, name=f"tie_{i}")
    return LPInstance(g, tau, list(gadgets), lp)


@dataclass(frozen=True)
class LPBound:
    relaxed: Fraction
    grid_rounded: Fraction
    tau_grid_rounded: Fraction
    flags: dict
    solution: Solution
    gadgets: tuple[Gadget, ...]

    @property
    def chi(self) -> tuple[Fraction, ...]:
        """One value per gadget (the two tied variables agree)."""
        return self.solution.x[0::2]


def lp_capacity_bound(g: Graph, tau: int, max_support: int, mode: str = "formula",
                      budget: int = GADGET_BUDGET) -> LPBound:
    gadgets = enumerate_gadgets(g, max_support, tau, mode, budget)
    inst = build_lp(g, gadgets, tau)
    sol = solve_lp(inst.program)
    grid = g.n * tau
    # total weight W = value * n * tau; round W up to an integer, and separately to a multiple of tau
    rounded = Fraction(math.ceil(sol.value * grid), grid)
    coarse = Fraction(math.ceil(sol.value * g.n), g.n)
    flags = {
        "restricted_gadgets": True,
        "relaxed_integrality": True,
        "closure_mode": mode,
        "tau": tau,
        "max_support": max_support,
        "gadgets": len(gadgets),
    }
    return LPBound(sol.value, rounded, coarse, flags, sol, tuple(gadgets))


def lift_gadget(gd: Gadget, ig: InterleavedGraph) -> Gadget:
    lift = lambda S: frozenset(v for t in S for v in ig.fiber(t))  # noqa: E731
    return Gadget(lift(gd.S1), lift(gd.S2), gd.c1, gd.c2, ig.s * gd.weight, lift(gd.A), lift(gd.B))


@dataclass(frozen=True)
class CoverCheck:
    ok: bool
    objective: Fraction
    violated: tuple | None = None


def check_cover(g: Graph, gadgets: Sequence[Gadget], chi: Sequence[Fraction], tau: int) -> CoverCheck:
    """Re-check every (edge, colour) constraint for per-gadget values chi."""
    if len(chi) != len(gadgets):
        raise InputError("one value per gadget required")
    if any(not 0 <= x <= 1 for x in chi):
        return CoverCheck(False, Fraction(0), ("box",))
    obj = sum((Fraction(x) * gd.weight for x, gd in zip(chi, gadgets)), Fraction(0)) / (g.n * tau)
    for u, v in _edges(g):
        for c in range(tau):
            total = Fraction(0)
            for x, gd in zip(chi, gadgets):
                if gd.c1 == c and (u in gd.S1 or v in gd.S1):
                    total += x
                if gd.c2 == c and (u in gd.S2 or v in gd.S2):
                    total += x
            if total < 1:
                return CoverCheck(False, obj, (u, v, c))
    return CoverCheck(True, obj)
