"""Interleaving a storage code along a family of orthogonal partitions."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .codes import WORD_CAP, AnyCode, Code
from .designs import OrthogonalPartitionFamily
from .errors import CapExceeded, InputError
from .graphs import Graph, build_graph


@dataclass(frozen=True)
class Coloring:
    colors: tuple[int, ...]
    c: int

    def is_proper(self, g: Graph) -> bool:
        return all(self.colors[u] != self.colors[v] for u, v in g.arcs())


def greedy_coloring(g: Graph, mode: str = "dsatur", modulus: int | None = None) -> Coloring:
    """DSATUR with ties broken by degree, then smallest id; or t mod `modulus`."""
    if mode == "mod":
        if not modulus or modulus < 1:
            raise InputError("mod coloring needs a positive modulus")
        col = Coloring(tuple(v % modulus for v in range(g.n)), min(modulus, g.n) if g.n else 0)
        if not col.is_proper(g):
            raise InputError(f"coloring by residues mod {modulus} is not proper")
        return col
    if mode != "dsatur":
        raise InputError(f"unknown coloring mode {mode!r}")
    adj = [[u for u in range(g.n) if g.adjacent(v, u)] for v in range(g.n)]
    colors = [-1] * g.n
    sat: list[set[int]] = [set() for _ in range(g.n)]
    for _ in range(g.n):
        v = max((u for u in range(g.n) if colors[u] < 0), key=lambda u: (len(sat[u]), len(adj[u]), -u))
        c = next(c for c in range(g.n) if c not in sat[v])
        colors[v] = c
        for u in adj[v]:
            sat[u].add(c)
    return Coloring(tuple(colors), max(colors, default=-1) + 1)


@dataclass(frozen=True)
class InterleavedGraph:
    base: Graph
    family: OrthogonalPartitionFamily
    coloring: Coloring
    graph: Graph
    color_to_matrix: tuple[int, ...]

    @property
    def k(self) -> int:
        return self.family.k

    @property
    def s(self) -> int:
        return self.family.s

    def vid(self, t: int, mu: int) -> int:
        """Vertex id of (t, mu); t is 0-based, mu is 1-based."""
        return t * self.s + mu - 1

    def label(self, v: int) -> tuple[int, int]:
        return (v // self.s, v % self.s + 1)

    def matrix(self, t: int) -> tuple[tuple[int, ...], ...]:
        return self.family.matrices[self.color_to_matrix[self.coloring.colors[t]]]

    def column(self, t: int, mu: int) -> tuple[int, ...]:
        return tuple(row[mu - 1] for row in self.matrix(t))

    def fiber(self, t: int) -> list[int]:
        return [self.vid(t, mu) for mu in range(1, self.s + 1)]


def build_interleaved_graph(g: Graph, col: Coloring, fam: OrthogonalPartitionFamily) -> InterleavedGraph:
    if len(col.colors) != g.n or not col.is_proper(g):
        raise InputError("coloring is not a proper coloring of the base graph")
    if col.c > len(fam.matrices):
        raise InputError(f"coloring uses c={col.c} colors but the family has only {len(fam.matrices)} matrices")
    assign = tuple(range(col.c))
    s = fam.s
    colsets = [[set(fam.column(m, j)) for j in range(s)] for m in range(len(fam.matrices))]
    arcs = []
    for t, t2 in g.arcs():
        a = colsets[assign[col.colors[t]]]
        b = colsets[assign[col.colors[t2]]]
        for mu in range(s):
            for mu2 in range(s):
                if a[mu] & b[mu2]:
                    arcs.append((t * s + mu, t2 * s + mu2))
    labels = [(t, mu) for t in range(g.n) for mu in range(1, s + 1)]
    gbar = build_graph(g.n * s, arcs, directed=g.directed, labels=labels)
    return InterleavedGraph(g, fam, col, gbar, assign)


def _seed_matrix(seeds: Sequence[Sequence[int]], n: int, ks: int) -> np.ndarray:
    arr = np.asarray(seeds, dtype=np.int64)
    if arr.shape != (ks, n):
        raise InputError(f"expected {ks} seed words of length {n}, got shape {arr.shape}")
    return arr


def interleave_tuple(seeds: Sequence[Sequence[int]], ig: InterleavedGraph) -> np.ndarray:
    """k x (n s) array: column (t, mu) holds column mu of X_t.

    X_t has entry (i, j) equal to symbol t of seed word M_{c(t)}(i, j).
    """
    k, s, n = ig.k, ig.s, ig.base.n
    x = _seed_matrix(seeds, n, k * s)
    out = np.zeros((k, n * s), dtype=np.int64)
    for t in range(n):
        m = ig.matrix(t)
        for i in range(k):
            for mu in range(s):
                out[i, t * s + mu] = x[m[i][mu] - 1, t]
    return out


def pack_columns(array: np.ndarray, seed_alphabet: int) -> np.ndarray:
    """Merge the k entries of each column into one symbol (first row most significant)."""
    sym = np.zeros(array.shape[1:], dtype=np.int64)
    for row in array:
        sym = sym * seed_alphabet + row
    return sym


def interleaved_code(seed: AnyCode, ig: InterleavedGraph, mode: str = "full",
                     sample_seed: int = 0, count: int = 0, cap: int = WORD_CAP) -> Code:
    """All (or a reproducible random sample of) interleavings of ks seed words."""
    seed = seed.to_code(cap)
    if seed.n != ig.base.n:
        raise InputError("seed code length differs from the base graph")
    k, s, n = ig.k, ig.s, ig.base.n
    ks = k * s
    if mode == "full":
        if seed.size ** ks > cap:
            raise CapExceeded(f"{seed.size}^{ks} interleaved words exceed cap {cap}; use sample mode")
        idx = np.indices((seed.size,) * ks).reshape(ks, -1).T
    elif mode == "sample":
        if count < 1:
            raise InputError("sample mode needs a positive count")
        idx = np.random.default_rng(sample_seed).integers(0, seed.size, size=(count, ks))
    else:
        raise InputError(f"unknown mode {mode!r}")
    words = np.zeros((len(idx), n * s), dtype=np.int64)
    a = seed.alphabet
    for t in range(n):
        m = ig.matrix(t)
        for mu in range(s):
            sym = np.zeros(len(idx), dtype=np.int64)
            for i in range(k):
                sym = sym * a + seed.words[idx[:, m[i][mu] - 1], t]
            words[:, t * s + mu] = sym
    return Code(seed.q, seed.level * k, n * s, words)


def lift_set(S, ig: InterleavedGraph) -> frozenset[int]:
    return frozenset(v for t in S for v in ig.fiber(t))


def partial_recovery_neighbors(ig: InterleavedGraph, t: int, mu: int, j: int) -> frozenset[int]:
    """Vertices of the interleaved graph holding symbol t' of seed word lambda,
    for t' ranging over the neighbours of t, where lambda = M_{c(t)}(j, mu)."""
    if not (0 <= t < ig.base.n and 1 <= mu <= ig.s and 1 <= j <= ig.k):
        raise InputError(f"no vertex ({t},{mu}) or level {j}")
    lam = ig.matrix(t)[j - 1][mu - 1]
    out = set()
    for t2 in ig.base.out[t]:
        m = ig.matrix(t2)
        mu2 = next(c for c in range(ig.s) if any(row[c] == lam for row in m))
        out.add(ig.vid(t2, mu2 + 1))
    return frozenset(out)
