"""Exact combinatorial search on bitset graphs.

All searches branch include-first on the lowest remaining vertex, so the first
optimum reached is the lexicographically smallest optimal witness.
"""
from __future__ import annotations

import sys
from typing import Iterable

import networkx as nx
import numpy as np

from .errors import CapExceeded, InputError
from .graphs import Graph, build_graph

MIS_CAP = 64
MAIS_CAP = 24
COVER_CAP = 24
B_AVOID_CAP = 40
B_AVOID_DP_SPAN = 18


def _low(mask: int) -> int:
    return (mask & -mask).bit_length() - 1


def _members(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def _popcount(mask: int) -> int:
    return bin(mask).count("1")


def _cap(g: Graph, cap: int, what: str) -> None:
    if g.n > cap:
        raise CapExceeded(f"{what} search limited to {cap} vertices, graph has {g.n}")


def _clique_cover_bound(pool: int, adj: tuple[int, ...]) -> int:
    """Greedy clique cover size of `pool`: an upper bound on any independent subset."""
    count = 0
    while pool:
        v = _low(pool)
        clique_cand = pool & adj[v]
        pool &= ~(1 << v)
        while clique_cand:
            u = _low(clique_cand)
            pool &= ~(1 << u)
            clique_cand &= adj[u]
        count += 1
    return count


def max_independent_set(adj: tuple[int, ...], pool: int | None = None) -> tuple[int, ...]:
    n = len(adj)
    full = (1 << n) - 1 if pool is None else pool
    best = [0, 0]
    sys.setrecursionlimit(max(1000, 4 * n + 100))

    def expand(cur: int, size: int, cand: int) -> None:
        if size > best[0]:
            best[0], best[1] = size, cur
        if not cand or size + _clique_cover_bound(cand, adj) <= best[0]:
            return
        v = _low(cand)
        bit = 1 << v
        expand(cur | bit, size + 1, cand & ~adj[v] & ~bit)
        expand(cur, size, cand & ~bit)

    expand(0, 0, full)
    return tuple(_members(best[1]))


def independence_number(g: Graph, cap: int = MIS_CAP) -> tuple[int, tuple[int, ...]]:
    """Edges in either direction count."""
    _cap(g, cap, "independence")
    ws = max_independent_set(g.adj_masks)
    return len(ws), ws


def _closes_cycle(g: Graph, chosen: int, v: int) -> bool:
    """Does chosen + v contain a directed cycle through v?"""
    seen = 0
    frontier = g.out_masks[v] & chosen
    target = g.in_masks[v]
    while frontier:
        if frontier & target:
            return True
        seen |= frontier
        nxt = 0
        for u in _members(frontier):
            nxt |= g.out_masks[u]
        frontier = nxt & chosen & ~seen
    return False


def mais(g: Graph, cap: int = MAIS_CAP) -> tuple[int, tuple[int, ...]]:
    """Maximum induced acyclic subgraph; symmetric adjacency reduces to independence."""
    if g.is_symmetric():
        return independence_number(g, max(cap, MIS_CAP))
    _cap(g, cap, "acyclic-set")
    mutual = tuple(o & i for o, i in zip(g.out_masks, g.in_masks))
    best = [0, 0]

    def bound(cand: int) -> int:
        # a 2-cycle keeps at most one endpoint: cover candidates by mutual cliques
        return _clique_cover_bound(cand, mutual)

    def expand(cur: int, size: int, cand: int) -> None:
        if size > best[0]:
            best[0], best[1] = size, cur
        if not cand or size + bound(cand) <= best[0]:
            return
        v = _low(cand)
        bit = 1 << v
        nxt = cur | bit
        rest = cand & ~bit & ~mutual[v]
        keep = 0
        for u in _members(rest):
            if not _closes_cycle(g, nxt, u):
                keep |= 1 << u
        expand(nxt, size + 1, keep)
        expand(cur, size, cand & ~bit)

    pool = 0
    for v in range(g.n):
        pool |= 1 << v
    expand(0, 0, pool)
    return best[0], tuple(_members(best[1]))


def _maximal_cliques_with(v: int, pool: int, mutual: tuple[int, ...]) -> list[int]:
    """Maximal cliques (bitmasks) of the pool containing v, in a fixed order."""
    out: list[int] = []

    def bk(r: int, p: int, x: int) -> None:
        if not p and not x:
            out.append(r)
            return
        for u in _members(p):
            bk(r | 1 << u, p & mutual[u], x & mutual[u])
            p &= ~(1 << u)
            x |= 1 << u

    bk(1 << v, pool & mutual[v], 0)
    return out


def clique_cover_number(g: Graph, cap: int = COVER_CAP) -> tuple[int, tuple[tuple[int, ...], ...]]:
    """Minimum partition into cliques (mutual adjacency)."""
    _cap(g, cap, "clique-cover")
    mutual = tuple(o & i for o, i in zip(g.out_masks, g.in_masks))
    best: list = [g.n + 1, None]

    def lower(pool: int) -> int:
        # greedy independent set in the mutual graph
        count = 0
        while pool:
            v = _low(pool)
            pool &= ~mutual[v] & ~(1 << v)
            count += 1
        return count

    def expand(pool: int, parts: list[int]) -> None:
        if not pool:
            if len(parts) < best[0]:
                best[0], best[1] = len(parts), list(parts)
            return
        if len(parts) + lower(pool) >= best[0]:
            return
        v = _low(pool)
        for clique in _maximal_cliques_with(v, pool, mutual):
            parts.append(clique)
            expand(pool & ~clique, parts)
            parts.pop()

    expand((1 << g.n) - 1, [])
    parts = tuple(tuple(_members(p)) for p in best[1])
    return best[0], parts


def max_matching(g: Graph) -> tuple[int, tuple[tuple[int, int], ...]]:
    if g.directed and not g.is_symmetric():
        raise InputError("matching needs an undirected graph")
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from((u, v) for u, v in g.arcs() if u < v)
    m = nx.max_weight_matching(h, maxcardinality=True)
    pairs = tuple(sorted(tuple(sorted(e)) for e in m))
    return len(pairs), pairs


# ------------------------------------------------------------------ B-avoiding sets

def difference_graph(B: Iterable[int], n: int) -> Graph:
    bs = sorted(set(int(b) for b in B))
    return build_graph(n, [(i, i + b) for b in bs for i in range(n - b)])


def _b_avoiding_dp(bs: list[int], n: int) -> tuple[int, ...]:
    span = max(bs)
    states = 1 << span
    mask = states - 1
    h = np.arange(states, dtype=np.int64)
    forbid = np.zeros(states, dtype=bool)
    for b in bs:
        forbid |= (h >> (b - 1)) & 1 == 1
    skip = (h << 1) & mask
    take = skip | 1
    table = np.zeros((n + 1, states), dtype=np.int64)
    for i in range(n - 1, -1, -1):
        nxt = table[i + 1]
        with_take = np.where(forbid, -1, nxt[take] + 1)
        table[i] = np.maximum(nxt[skip], with_take)
    chosen, state = [], 0
    for i in range(n):
        if not forbid[state] and table[i + 1][take[state]] + 1 == table[i][state]:
            chosen.append(i)
            state = int(take[state])
        else:
            state = int(skip[state])
    return tuple(chosen)


def max_b_avoiding(B: Iterable[int], n: int, cap: int = B_AVOID_CAP) -> tuple[int, tuple[int, ...]]:
    """Largest subset of [n] with no pairwise difference in B; lexicographically first witness."""
    bs = sorted(set(int(b) for b in B))
    if not bs or bs[0] < 1:
        raise InputError("B must be a nonempty set of positive integers")
    if n <= cap:
        ws = max_independent_set(difference_graph(bs, n).adj_masks) if n else ()
        return len(ws), ws
    if bs[-1] <= B_AVOID_DP_SPAN:
        ws = _b_avoiding_dp(bs, n)
        return len(ws), ws
    raise CapExceeded(f"n={n} exceeds {cap} and max(B)={bs[-1]} is too large for the windowed DP")
