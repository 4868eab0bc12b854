"""Finite graphs stored as directed adjacency, plus lattice windows, tori and products."""
from __future__ import annotations

import heapq
import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

from .errors import CapExceeded, InputError

MAX_SIDE_1D = 4096
MAX_SIDE_2D = 64


def _bits(mask: int) -> Iterable[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


@dataclass(frozen=True)
class Graph:
    n: int
    directed: bool
    out: tuple[tuple[int, ...], ...]
    labels: tuple[tuple[int, ...], ...] | None = None

    def __post_init__(self):
        if len(self.out) != self.n:
            raise InputError(f"adjacency has {len(self.out)} rows for n={self.n}")
        if self.labels is not None and len(self.labels) != self.n:
            raise InputError("one label per vertex required")

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self.out[v]

    @cached_property
    def out_masks(self) -> tuple[int, ...]:
        return tuple(sum(1 << u for u in nb) for nb in self.out)

    @cached_property
    def in_masks(self) -> tuple[int, ...]:
        masks = [0] * self.n
        for v, nb in enumerate(self.out):
            for u in nb:
                masks[u] |= 1 << v
        return tuple(masks)

    @cached_property
    def adj_masks(self) -> tuple[int, ...]:
        """Adjacency ignoring direction."""
        return tuple(o | i for o, i in zip(self.out_masks, self.in_masks))

    def arcs(self) -> list[tuple[int, int]]:
        return [(v, u) for v, nb in enumerate(self.out) for u in nb]

    def edges(self) -> list[tuple[int, int]]:
        """Arcs for directed graphs, unordered pairs u<v otherwise."""
        if self.directed:
            return self.arcs()
        return [(v, u) for v, nb in enumerate(self.out) for u in nb if v < u]

    def edge_count(self) -> int:
        return len(self.edges())

    def is_symmetric(self) -> bool:
        return self.out_masks == self.in_masks

    def has_arc(self, v: int, u: int) -> bool:
        return bool(self.out_masks[v] >> u & 1)

    def adjacent(self, v: int, u: int) -> bool:
        return bool(self.adj_masks[v] >> u & 1)

    def degree(self, v: int) -> int:
        return len(self.out[v])

    def is_clique(self, vertices: Iterable[int]) -> tuple[int, int] | None:
        """None if every pair is mutually adjacent, else the first failing pair."""
        vs = sorted(vertices)
        for a, b in itertools.combinations(vs, 2):
            if not (self.has_arc(a, b) and self.has_arc(b, a)):
                return (a, b)
        return None

    def is_independent(self, vertices: Iterable[int]) -> bool:
        mask = sum(1 << v for v in vertices)
        return all(not (self.adj_masks[v] & mask) for v in _bits(mask))

    def index_of(self, label: Sequence[int]) -> int:
        if self.labels is None:
            raise InputError("graph has no labels")
        try:
            return self._label_index[tuple(label)]
        except KeyError:
            raise InputError(f"no vertex labelled {tuple(label)}") from None

    @cached_property
    def _label_index(self) -> dict[tuple[int, ...], int]:
        return {lab: i for i, lab in enumerate(self.labels or ())}


def build_graph(
    n: int,
    edges: Iterable[Sequence[int]],
    directed: bool = False,
    labels: Sequence[Sequence[int]] | None = None,
) -> Graph:
    if n < 0:
        raise InputError(f"vertex count {n} is negative")
    adj: list[set[int]] = [set() for _ in range(n)]
    for e in edges:
        if len(e) != 2:
            raise InputError(f"edge {list(e)} is not a pair")
        u, v = int(e[0]), int(e[1])
        if not (0 <= u < n and 0 <= v < n):
            raise InputError(f"edge ({u},{v}) has an endpoint outside [0,{n})")
        if u == v:
            raise InputError(f"edge ({u},{v}) is a self-loop")
        adj[u].add(v)
        if not directed:
            adj[v].add(u)
    labs = None if labels is None else tuple(tuple(int(x) for x in lab) for lab in labels)
    return Graph(n, directed, tuple(tuple(sorted(s)) for s in adj), labs)


def complete_graph(n: int) -> Graph:
    return build_graph(n, itertools.combinations(range(n), 2))


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise InputError("a cycle needs at least 3 vertices")
    return build_graph(n, [(i, (i + 1) % n) for i in range(n)])


def path_graph(n: int) -> Graph:
    return build_graph(n, [(i, i + 1) for i in range(n - 1)])


def induced_subgraph(g: Graph, subset: Iterable[int]) -> Graph:
    vs = sorted(set(subset))
    for v in vs:
        if not 0 <= v < g.n:
            raise InputError(f"vertex {v} not in graph")
    pos = {v: i for i, v in enumerate(vs)}
    out = tuple(tuple(pos[u] for u in g.out[v] if u in pos) for v in vs)
    labels = None if g.labels is None else tuple(g.labels[v] for v in vs)
    return Graph(len(vs), g.directed, out, labels)


@dataclass(frozen=True)
class DagVerdict:
    ok: bool
    order: tuple[int, ...] = ()
    cycle: tuple[int, ...] = ()

    def __bool__(self) -> bool:
        return self.ok


def is_dag(g: Graph, subset: Iterable[int] | None = None) -> DagVerdict:
    """Kahn's algorithm on the induced subgraph, smallest id first.

    On failure the cycle is found by walking backwards through remaining
    vertices (each has an in-neighbour among them) and is rotated to start
    at its smallest vertex.
    """
    vs = set(range(g.n)) if subset is None else set(subset)
    mask = sum(1 << v for v in vs)
    indeg = {v: bin(g.in_masks[v] & mask).count("1") for v in vs}
    heap = [v for v in vs if indeg[v] == 0]
    heapq.heapify(heap)
    order = []
    while heap:
        v = heapq.heappop(heap)
        order.append(v)
        for u in _bits(g.out_masks[v] & mask):
            indeg[u] -= 1
            if indeg[u] == 0:
                heapq.heappush(heap, u)
    if len(order) == len(vs):
        return DagVerdict(True, order=tuple(order))
    rest = mask & ~sum(1 << v for v in order)
    v = (rest & -rest).bit_length() - 1
    seen: dict[int, int] = {}
    walk = []
    while v not in seen:
        seen[v] = len(walk)
        walk.append(v)
        preds = g.in_masks[v] & rest
        v = (preds & -preds).bit_length() - 1
    cyc = walk[seen[v]:][::-1]
    k = cyc.index(min(cyc))
    return DagVerdict(False, cycle=tuple(cyc[k:] + cyc[:k]))


def is_triangle_free(g: Graph) -> bool:
    adj = g.adj_masks
    for u in range(g.n):
        higher = adj[u] >> (u + 1) << (u + 1)
        for v in _bits(higher):
            if adj[u] & adj[v] & ~((1 << (v + 1)) - 1):
                return False
    return True


def cartesian_product(g1: Graph, g2: Graph) -> Graph:
    if g1.directed or g2.directed:
        raise InputError("cartesian product is defined here for undirected graphs")
    n1, n2 = g1.n, g2.n
    edges = []
    for u in range(n1):
        for a, b in g2.edges():
            edges.append((u * n2 + a, u * n2 + b))
    for a, b in g1.edges():
        for w in range(n2):
            edges.append((a * n2 + w, b * n2 + w))
    labels = [(u, w) for u in range(n1) for w in range(n2)]
    return build_graph(n1 * n2, edges, labels=labels)


def torus_rowcol_graph(n: int) -> Graph:
    """Rook's graph on Z_n x Z_n: vertex (i, j) has id i*n + j."""
    if n < 3:
        raise InputError(f"torus side {n} < 3")
    if n > MAX_SIDE_2D:
        raise CapExceeded(f"torus side {n} exceeds {MAX_SIDE_2D}")
    edges = []
    for i in range(n):
        for j in range(n):
            v = i * n + j
            edges += [(v, i * n + jj) for jj in range(j + 1, n)]
            edges += [(v, ii * n + j) for ii in range(i + 1, n)]
    return build_graph(n * n, edges, labels=[(i, j) for i in range(n) for j in range(n)])


# ---------------------------------------------------------------- recovery sets

@dataclass(frozen=True)
class RecoverySet:
    dim: int
    offsets: tuple[tuple[int, ...], ...]
    kind: str = "custom"
    params: tuple = ()

    def __post_init__(self):
        if self.dim not in (1, 2):
            raise InputError(f"dimension {self.dim} not supported")
        if not self.offsets:
            raise InputError("recovery set is empty")
        for o in self.offsets:
            if len(o) != self.dim:
                raise InputError(f"offset {o} has wrong dimension")
            if not any(o):
                raise InputError("recovery set must not contain 0")
        if len(set(self.offsets)) != len(self.offsets):
            raise InputError("duplicate offsets")

    @classmethod
    def custom(cls, offsets: Iterable) -> RecoverySet:
        offs = [tuple(o) if isinstance(o, (tuple, list)) else (int(o),) for o in offsets]
        dims = {len(o) for o in offs}
        if len(dims) != 1:
            raise InputError("offsets of mixed dimension")
        return cls(dims.pop(), tuple(sorted(set(offs))))

    @property
    def reach(self) -> int:
        return max(abs(x) for o in self.offsets for x in o)

    def scalar_offsets(self) -> list[int]:
        if self.dim != 1:
            raise InputError("scalar offsets only exist in dimension 1")
        return [o[0] for o in self.offsets]

    def is_symmetric(self) -> bool:
        s = set(self.offsets)
        return all(tuple(-x for x in o) in s for o in s)


def _positive(*vals: int) -> None:
    for v in vals:
        if int(v) < 1:
            raise InputError(f"parameter {v} must be >= 1")


def recovery_set(kind: str, *params, dim: int = 2) -> RecoverySet:
    """interval(l,r), pair(l,r), ball(metric, radius), rect(l,r,b,a), axial(l,r,b,a)."""
    if kind == "interval":
        l, r = map(int, params)
        _positive(l, r)
        offs = [(x,) for x in range(-l, 0)] + [(x,) for x in range(1, r + 1)]
        return RecoverySet(1, tuple(offs), kind, (l, r))
    if kind == "pair":
        l, r = map(int, params)
        _positive(l, r)
        return RecoverySet(1, ((-l,), (r,)), kind, (l, r))
    if kind == "ball":
        metric, radius = params[0], int(params[1])
        _positive(radius)
        if metric not in ("l1", "linf"):
            raise InputError(f"unknown metric {metric!r}")
        rng = range(-radius, radius + 1)
        pts = itertools.product(rng, repeat=dim)
        norm = (lambda p: sum(map(abs, p))) if metric == "l1" else (lambda p: max(map(abs, p)))
        offs = sorted(p for p in pts if any(p) and norm(p) <= radius)
        return RecoverySet(dim, tuple(offs), kind, (metric, radius))
    if kind == "rect":
        l, r, b, a = map(int, params)
        if not (l >= 1 and a >= 1 and 0 <= r < l and 0 <= b < a):
            raise InputError(f"rect({l},{r},{b},{a}) needs 0<=r<l and 0<=b<a")
        offs = sorted(
            (x, y) for x in range(-l, r + 1) for y in range(-b, a + 1) if (x, y) != (0, 0)
        )
        return RecoverySet(2, tuple(offs), kind, (l, r, b, a))
    if kind == "axial":
        l, r, b, a = map(int, params)
        _positive(l, r, b, a)
        horiz = [(x, 0) for x in range(-l, r + 1) if x]
        vert = [(0, y) for y in range(-b, a + 1) if y]
        return RecoverySet(2, tuple(sorted(horiz + vert)), kind, (l, r, b, a))
    raise InputError(f"unknown recovery set kind {kind!r}")


@dataclass(frozen=True)
class WindowGraph:
    graph: Graph
    n: int
    recovery: RecoverySet
    boundary: frozenset[int]
    interior: frozenset[int] = field(default=frozenset())

    @property
    def dim(self) -> int:
        return self.recovery.dim

    def vid(self, *coords: int) -> int:
        if self.dim == 1:
            return coords[0]
        return coords[0] * self.n + coords[1]


def window_graph(rs: RecoverySet, n: int) -> WindowGraph:
    """Graph on [n]^dim with arc v -> v+o for each offset o landing inside.

    Vertex ids: i in dimension 1, i*n + j for cell (i, j) in dimension 2.
    """
    cap = MAX_SIDE_1D if rs.dim == 1 else MAX_SIDE_2D
    if n > cap:
        raise CapExceeded(f"window side {n} exceeds cap {cap}")
    if n <= rs.reach:
        raise InputError(f"window side {n} must exceed the largest offset magnitude {rs.reach}")
    cells = list(itertools.product(range(n), repeat=rs.dim))
    index = {c: i for i, c in enumerate(cells)}
    arcs = []
    boundary = set()
    for c in cells:
        v = index[c]
        for o in rs.offsets:
            t = tuple(x + d for x, d in zip(c, o))
            u = index.get(t)
            if u is None:
                boundary.add(v)
            else:
                arcs.append((v, u))
    g = build_graph(len(cells), arcs, directed=True, labels=cells)
    interior = frozenset(range(len(cells))) - boundary
    return WindowGraph(g, n, rs, frozenset(boundary), interior)
