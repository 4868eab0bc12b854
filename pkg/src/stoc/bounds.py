"""Capacity certificates: combinatorial bounds with re-checkable witnesses."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Sequence

import numpy as np

from .codes import Code, rate
from .errors import CapExceeded, InconsistentBounds, InputError
from .graphs import Graph, RecoverySet, is_dag, recovery_set, window_graph
from .search import (COVER_CAP, MAIS_CAP, MIS_CAP, clique_cover_number, independence_number, mais, max_b_avoiding,
                     max_independent_set, max_matching)

UPPER = "upper"
LOWER = "lower"
ORACLE_CAP = 2 ** 16


@dataclass(frozen=True)
class BoundCertificate:
    """`value` is the raw combinatorial quantity, `capacity` the implied bound."""

    kind: str
    value: Fraction
    capacity: Fraction
    direction: str
    witness: Any = None
    notes: dict = field(default_factory=dict, compare=False)

    def validate(self, g: Graph | None = None) -> bool:
        return validate_certificate(self, g)


def validate_certificate(c: BoundCertificate, g: Graph | None) -> bool:
    kind, w = c.kind, c.witness
    if kind == "independence":
        return g.is_independent(w) and len(set(w)) == c.value
    if kind == "mais":
        return bool(is_dag(g, w)) and len(set(w)) == c.value
    if kind == "clique_cover":
        flat = sorted(v for p in w for v in p)
        return flat == list(range(g.n)) and all(g.is_clique(p) is None for p in w) and len(w) == c.value
    if kind == "matching":
        used = [v for e in w for v in e]
        return (len(used) == len(set(used)) and len(w) == c.value
                and all(g.has_arc(u, v) and g.has_arc(v, u) for u, v in w))
    if kind == "anticode":
        clique, parts = w
        if g.is_clique(clique) is not None or len(clique) != c.value:
            return False
        if max_clique_size(g) != len(clique):
            return False
        return parts is None or sorted(v for p in parts for v in p) == list(range(g.n)) and all(
            g.is_clique(p) is None and len(p) == len(clique) for p in parts)
    if kind == "oracle":
        from .codes import verify_storage_code
        return bool(verify_storage_code(w, g)) and w.size == c.value
    if kind in ("lp", "diff_avoiding"):
        return c.witness is not None
    raise InputError(f"unknown certificate kind {kind!r}")


def _n(g: Graph) -> int:
    if g.n == 0:
        raise InputError("empty graph")
    return g.n


def independence_certificate(g: Graph, cap: int = MIS_CAP) -> BoundCertificate:
    gamma, ws = independence_number(g, cap)
    return BoundCertificate("independence", Fraction(gamma), 1 - Fraction(gamma, _n(g)), UPPER, ws)


def mais_certificate(g: Graph, cap: int = MAIS_CAP) -> BoundCertificate:
    delta, ws = mais(g, cap)
    return BoundCertificate("mais", Fraction(delta), 1 - Fraction(delta, _n(g)), UPPER, ws)


def clique_cover_certificate(g: Graph, cap: int = COVER_CAP) -> BoundCertificate:
    alpha, parts = clique_cover_number(g, cap)
    return BoundCertificate("clique_cover", Fraction(alpha), 1 - Fraction(alpha, _n(g)), LOWER, parts)


def matching_certificate(g: Graph) -> BoundCertificate:
    m, pairs = max_matching(g)
    return BoundCertificate("matching", Fraction(m), Fraction(m, _n(g)), LOWER, pairs)


# ------------------------------------------------------------------ anticodes

def max_clique_size(g: Graph) -> int:
    mutual = tuple(o & i for o, i in zip(g.out_masks, g.in_masks))
    full = (1 << g.n) - 1
    comp = tuple(full & ~m & ~(1 << v) for v, m in enumerate(mutual))
    return len(max_independent_set(comp))


def anticode_certificate(g: Graph, clique: Sequence[int], tiling: Sequence[Sequence[int]] | None,
                         transitive: bool = True) -> BoundCertificate:
    """Code-anticode bound on a vertex-transitive graph: cap <= 1 - 1/|D|.

    The anticode is a clique of the distance graph and must be maximum; the
    optional tiling by copies of it shows the bound is met.
    """
    if not transitive:
        raise InputError("the code-anticode capacity bound is used on vertex-transitive graphs only")
    d = len(clique)
    cert = BoundCertificate("anticode", Fraction(d), 1 - Fraction(1, d), UPPER,
                            (tuple(sorted(clique)), None if tiling is None else tuple(map(tuple, tiling))))
    if not cert.validate(g):
        raise InputError("anticode witness does not validate")
    return cert


@dataclass(frozen=True)
class AnticodeSize:
    size: int
    closed_form: bool


def anticode_max(metric: str, D: int) -> AnticodeSize:
    if D < 1:
        raise InputError("diameter must be >= 1")
    if metric == "linf":
        return AnticodeSize((D + 1) ** 2, True)
    if metric == "l1":
        return AnticodeSize((D + 1) ** 2 // 2 if D % 2 else D * D // 2 + D + 1, True)
    raise InputError(f"unknown metric {metric!r}")


def _dist(metric: str, a, b) -> int:
    dx, dy = abs(a[0] - b[0]), abs(a[1] - b[1])
    return dx + dy if metric == "l1" else max(dx, dy)


def brute_anticode(metric: str, D: int, box: int | None = None) -> int:
    """Largest cell set of a box x box grid with pairwise distance <= D.

    Plain Bron-Kerbosch with pivoting on the 'distance <= D' relation,
    independent of the bitset search used elsewhere.
    """
    box = D + 1 if box is None else box
    cells = [(x, y) for x in range(box) for y in range(box)]
    nbr = {c: {d for d in cells if d != c and _dist(metric, c, d) <= D} for c in cells}
    best = 0

    def bk(r: int, p: set, x: set) -> None:
        nonlocal best
        if not p and not x:
            best = max(best, r)
            return
        if r + len(p) <= best:
            return
        pivot = max(p | x, key=lambda c: len(nbr[c] & p))
        for c in list(p - nbr[pivot]):
            bk(r + 1, p & nbr[c], x & nbr[c])
            p = p - {c}
            x = x | {c}

    bk(0, set(cells), set())
    return best


@dataclass(frozen=True)
class CodeAnticodeBound:
    max_code_size: int
    capacity: Fraction | None


def code_anticode_bound(n_vertices: int, anticode_size: int, tiling_exists: bool = True) -> CodeAnticodeBound:
    if n_vertices < 1 or anticode_size < 1:
        raise InputError("sizes must be positive")
    cap = 1 - Fraction(1, anticode_size) if tiling_exists else None
    return CodeAnticodeBound(n_vertices // anticode_size, cap)


# ------------------------------------------------------------------ 1-d and axial

def diff_avoiding_bound(rs: RecoverySet, n_list: Sequence[int]) -> list[dict]:
    offs = rs.scalar_offsets()
    left = sorted(-o for o in offs if o < 0)
    right = sorted(o for o in offs if o > 0)
    rows = []
    for n in n_list:
        a_left = max_b_avoiding(left, n)[0] if left else 0
        a_right = max_b_avoiding(right, n)[0] if right else 0
        best = max(a_left, a_right)
        rows.append({"n": n, "a_left": a_left, "a_right": a_right, "bound": 1 - Fraction(best, n)})
    return rows


@dataclass(frozen=True)
class AxialDagSet:
    t: int
    n: int
    cells: tuple[tuple[int, int], ...]
    acyclic: bool

    @property
    def size(self) -> int:
        return len(self.cells)

    @property
    def density(self) -> Fraction:
        return Fraction(self.size, self.n * self.n)


def axial_dag_set(t: int, n: int, recovery: RecoverySet | None = None) -> AxialDagSet:
    """Diagonal stripes {(x, y) : (t+1) | x - y}, checked acyclic on the window."""
    if t < 1 or n % (t + 1):
        raise InputError(f"need t >= 1 and (t+1) | n, got t={t}, n={n}")
    cells = tuple((x, y) for x in range(n) for y in range(n) if (x - y) % (t + 1) == 0)
    rs = recovery or recovery_set("axial", t, t, t, t)
    w = window_graph(rs, n)
    acyclic = bool(is_dag(w.graph, [w.vid(*c) for c in cells]))
    return AxialDagSet(t, n, cells, acyclic)


# ------------------------------------------------------------------ oracle

def oracle_max_code(g: Graph, q: int, cap: int = ORACLE_CAP) -> tuple[int, Code]:
    """Largest storage code over alphabet [q] via the conflict graph on all q^n words."""
    total = q ** g.n
    if total > cap:
        raise CapExceeded(f"{q}^{g.n} words exceed oracle cap {cap}")
    words = np.indices((q,) * g.n).reshape(g.n, -1).T
    adj = [0] * total
    for v in range(g.n):
        nb = list(g.out[v])
        key = np.zeros(total, dtype=np.int64)
        for u in nb:
            key = key * q + words[:, u]
        groups: dict[int, list[int]] = {}
        for i, kk in enumerate(key.tolist()):
            groups.setdefault(kk, []).append(i)
        vals = words[:, v]
        for members in groups.values():
            for i, j in itertools.combinations(members, 2):
                if vals[i] != vals[j]:
                    adj[i] |= 1 << j
                    adj[j] |= 1 << i
    best = max_independent_set(tuple(adj))
    return len(best), Code(q, 1, g.n, words[list(best)])


def log_rate_at_least(size: int, q: int, n: int, rate: Fraction) -> bool:
    """log_q(size)/n >= rate, decided in integers."""
    return size ** rate.denominator >= q ** (n * rate.numerator)


def log_rate_at_most(size: int, q: int, n: int, rate: Fraction) -> bool:
    return size ** rate.denominator <= q ** (n * rate.numerator)


def oracle_certificate(g: Graph, q: int) -> BoundCertificate:
    """Fixed-alphabet optimum. `capacity` holds a float approximation of the rate
    unless the size is an exact power of q; comparisons should use the
    integer helpers above."""
    size, code = oracle_max_code(g, q)
    exact = rate(code).exact
    approx = Fraction(math.log(size, q) / g.n) if exact is None else exact
    return BoundCertificate("oracle", Fraction(size), approx, "fixed-q", code,
                            {"q": q, "rate_exact": exact is not None})


# ------------------------------------------------------------------ reports

@dataclass(frozen=True)
class LowerBound:
    construction: str
    rate: Fraction
    verified: bool


@dataclass(frozen=True)
class CapacityReport:
    graph_id: str
    lower: tuple[LowerBound, ...]
    upper: tuple[BoundCertificate, ...]
    best_lower: Fraction
    best_upper: Fraction
    verdict: str
    gap: Fraction


def capacity_certificate(graph_id: str, lowers: Sequence[LowerBound],
                         uppers: Sequence[BoundCertificate]) -> CapacityReport:
    if not lowers or not uppers:
        raise InputError("need at least one lower and one upper bound")
    for lo in lowers:
        if not lo.verified:
            raise InputError(f"construction {lo.construction} is not verified")
    for up in uppers:
        if up.direction != UPPER:
            raise InputError(f"certificate {up.kind} is not an upper bound")
    for lo in lowers:
        for up in uppers:
            if lo.rate > up.capacity:
                raise InconsistentBounds(f"{lo.construction}={lo.rate}", f"{up.kind}={up.capacity}")
    best_lo = max(lo.rate for lo in lowers)
    best_up = min(up.capacity for up in uppers)
    gap = best_up - best_lo
    return CapacityReport(graph_id, tuple(lowers), tuple(uppers), best_lo, best_up,
                          "tight" if gap == 0 else "gap", gap)


@dataclass(frozen=True)
class WindowSeries:
    points: tuple[tuple[int, Fraction, Fraction], ...]  # (n, c_n, boundary slack)
    limsup_estimate: Fraction
    estimate: bool = True


def window_series(rs: RecoverySet, n_list: Sequence[int], kind: str = "mais") -> WindowSeries:
    """c_n = 1 - (bound quantity)/|window|, with slack |A_n|/|window|."""
    if kind not in ("mais", "independence"):
        raise InputError(f"unsupported window bound {kind!r}")
    pts = []
    for n in n_list:
        w = window_graph(rs, n)
        size = w.graph.n
        val = mais(w.graph)[0] if kind == "mais" else independence_number(w.graph)[0]
        pts.append((n, 1 - Fraction(val, size), Fraction(len(w.boundary), size)))
    tail = pts[len(pts) // 2:]
    return WindowSeries(tuple(pts), max(p[1] for p in tail))
