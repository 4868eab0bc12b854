"""Code constructions on graphs and lattice windows."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from . import gf
from .codes import WORD_CAP, Code, LinearCode, AnyCode
from .errors import CapExceeded, InputError
from .graphs import Graph, RecoverySet, torus_rowcol_graph

Cell = tuple[int, int]


def _check_partition(g: Graph, parts: Sequence[Iterable[int]]) -> list[list[int]]:
    parts = [sorted(int(v) for v in p) for p in parts]
    seen = sorted(v for p in parts for v in p)
    if seen != list(range(g.n)):
        raise InputError("parts must cover every vertex exactly once")
    for p in parts:
        bad = g.is_clique(p)
        if bad is not None:
            raise InputError(f"part {p} is not a clique: {bad[0]} and {bad[1]} not mutually adjacent")
    return parts


def clique_partition_code(g: Graph, partition: Sequence[Iterable[int]], q: int) -> LinearCode:
    """One zero-sum parity per part; a singleton part pins its vertex to 0."""
    gf.require_prime(q)
    parts = _check_partition(g, partition)
    rows = []
    for p in parts:
        last = p[-1]
        for v in p[:-1]:
            row = np.zeros(g.n, dtype=np.int64)
            row[v], row[last] = 1, q - 1
            rows.append(row)
    return LinearCode(q, g.n, np.array(rows).reshape(-1, g.n))


def row_parity_code(n: int, q: int) -> LinearCode:
    g = torus_rowcol_graph(n)
    return clique_partition_code(g, [[i * n + j for j in range(n)] for i in range(n)], q)


def edge_to_vertex_code(g: Graph, q: int, cap: int = WORD_CAP) -> Code:
    """A free symbol per edge; vertex v stores its incident edge symbols.

    The tuple at v lists incident edges in global edge order and is padded
    with zero digits up to the maximum degree.
    """
    if g.directed:
        raise InputError("edge-to-vertex construction needs an undirected graph")
    iso = [v for v in range(g.n) if not g.out[v]]
    if iso:
        raise InputError(f"isolated vertex {iso[0]}")
    edges = g.edges()
    if q ** len(edges) > cap:
        raise CapExceeded(f"{q}^{len(edges)} words exceed cap {cap}")
    level = max(len(nb) for nb in g.out)
    incident = [[i for i, e in enumerate(edges) if v in e] for v in range(g.n)]
    assign = np.indices((q,) * len(edges)).reshape(len(edges), -1).T
    words = np.zeros((len(assign), g.n), dtype=np.int64)
    for v, inc in enumerate(incident):
        sym = np.zeros(len(assign), dtype=np.int64)
        for e in inc:
            sym = sym * q + assign[:, e]
        words[:, v] = sym * q ** (level - len(inc))
    return Code(q, level, g.n, words)


def matching_code(g: Graph, matching: Sequence[Sequence[int]], q: int, cap: int = WORD_CAP) -> Code:
    used: set[int] = set()
    for u, v in matching:
        if u in used or v in used:
            raise InputError(f"matching edges overlap at ({u},{v})")
        if not (g.has_arc(u, v) and g.has_arc(v, u)):
            raise InputError(f"({u},{v}) is not an edge")
        used |= {u, v}
    if q ** len(matching) > cap:
        raise CapExceeded(f"{q}^{len(matching)} words exceed cap {cap}")
    assign = np.indices((q,) * len(matching)).reshape(len(matching), -1).T
    words = np.zeros((len(assign), g.n), dtype=np.int64)
    for i, (u, v) in enumerate(matching):
        words[:, u] = words[:, v] = assign[:, i]
    return Code(q, 1, g.n, words)


# ------------------------------------------------------------------ gcd scheme

@dataclass(frozen=True)
class GcdScheme:
    code: LinearCode
    rate: Fraction
    info_positions: tuple[int, ...]


def gcd_scheme_encode(l: int, r: int, n: int, info: Sequence[int], q: int) -> np.ndarray:
    """Place information on positions km+[d]; fill each block in wave order.

    Inside a block of m = l+r positions the wave steps p -> (p+l) mod m.  The
    new position sees its predecessor at offset -l (no wrap) or +r (wrap), so
    copying the predecessor keeps every symbol recoverable from its pair.
    """
    m, d = l + r, math.gcd(l, r)
    if n % m:
        raise InputError(f"window length {n} not divisible by l+r={m}")
    blocks = n // m
    info = list(info)
    if len(info) != blocks * d:
        raise InputError(f"expected {blocks * d} information symbols")
    x = np.full(n, -1, dtype=np.int64)
    for k in range(blocks):
        base = k * m
        for j in range(d):
            x[base + j] = info[k * d + j] % q
            p = j
            for _ in range(m // d - 1):
                nxt = (p + l) % m
                x[base + nxt] = x[base + p]
                p = nxt
    assert (x >= 0).all(), "wave order left a position unfilled"
    return x


def gcd_scheme_code(l: int, r: int, n: int, q: int) -> GcdScheme:
    gf.require_prime(q)
    if l < 1 or r < 1:
        raise InputError("l and r must be positive")
    m, d = l + r, math.gcd(l, r)
    if n % m:
        raise InputError(f"window length {n} not divisible by l+r={m}")
    k = n // m * d
    gen = np.array([gcd_scheme_encode(l, r, n, np.eye(k, dtype=np.int64)[i], q) for i in range(k)])
    info = tuple(b * m + j for b in range(n // m) for j in range(d))
    return GcdScheme(LinearCode(q, n, gen), Fraction(d, m), info)


# ------------------------------------------------------------------ tilings

def anticode_tile(metric: str, r: int, dims: tuple[int, int] | None = None) -> tuple[Cell, ...]:
    """Maximum anticode prototype, normalized to nonnegative coordinates."""
    if r < 1:
        raise InputError("radius must be >= 1")
    if metric == "linf":
        cells = [(x, y) for x in range(r + 1) for y in range(r + 1)]
    elif metric == "l1":
        k = r // 2
        ball = [(x, y) for x in range(-k, k + 1) for y in range(-k, k + 1) if abs(x) + abs(y) <= k]
        cells = ball if r % 2 == 0 else sorted(set(ball) | {(x + 1, y) for x, y in ball})
    elif metric == "rect":
        if dims is None:
            raise InputError("rect tiles need (r, b)")
        rr, bb = dims
        cells = [(x, y) for x in range(rr + 1) for y in range(bb + 1)]
    else:
        raise InputError(f"unknown metric {metric!r}")
    mx = min(c[0] for c in cells)
    my = min(c[1] for c in cells)
    return tuple(sorted((x - mx, y - my) for x, y in cells))


def _documented_lattice(metric: str, r: int, dims=None) -> tuple[Cell, Cell]:
    if metric == "linf":
        return ((r + 1, 0), (0, r + 1))
    if metric == "rect":
        return ((dims[0] + 1, 0), (0, dims[1] + 1))
    k = r // 2
    if r % 2 == 0:
        return ((k, k + 1), (k + 1, -k))
    return ((k + 1, k + 1), (k + 1, -(k + 1)))


class _Lattice:
    """2-d integer lattice with a canonical reduction through its Hermite form."""

    def __init__(self, basis: tuple[Cell, Cell]):
        (a1, b1), (a2, b2) = basis
        det = a1 * b2 - a2 * b1
        if det == 0:
            raise InputError("degenerate lattice basis")
        self.basis = basis
        self.index = abs(det)
        # Hermite form: (a, 0), (b, c) spanning the same lattice
        g2 = math.gcd(b1, b2)
        c = g2
        # combination with second coordinate c
        _, u, v = _ext_gcd(b1, b2)
        x0 = u * a1 + v * a2
        # vectors with zero second coordinate: multiples of (det/c, 0)
        a = self.index // c
        self.hnf = (a, x0 % a, c)

    def reduce(self, p: Cell) -> Cell:
        a, b, c = self.hnf
        x, y = p
        j = y // c
        return ((x - j * b) % a, y - j * c)

    def __eq__(self, other) -> bool:
        return self.hnf == other.hnf

    def __hash__(self):
        return hash(self.hnf)


def _ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    if b == 0:
        return (abs(a), 1 if a >= 0 else -1, 0)
    g, x, y = _ext_gcd(b, a % b)
    return g, y, x - (a // b) * y


def hnf_lattices(index: int) -> list[_Lattice]:
    out = []
    for a in range(1, index + 1):
        if index % a:
            continue
        c = index // a
        for b in range(a):
            out.append(_Lattice(((a, 0), (b, c))))
    return out


def tiles_by_lattice(tile: Sequence[Cell], lat: _Lattice) -> bool:
    return len(tile) == lat.index and len({lat.reduce(c) for c in tile}) == len(tile)


def exact_cover_tiling(tile: Sequence[Cell], period: int) -> list[Cell] | None:
    """Translations covering the torus Z_period^2 exactly once (Algorithm X)."""
    cells = [(i, j) for i in range(period) for j in range(period)]
    if len(cells) % len(tile):
        return None
    options: dict[Cell, frozenset[Cell]] = {}
    for p in cells:
        shape = frozenset(((x + p[0]) % period, (y + p[1]) % period) for x, y in tile)
        if len(shape) == len(tile):
            options[p] = shape
    by_cell: dict[Cell, list[Cell]] = {c: [] for c in cells}
    for p, shape in options.items():
        for c in shape:
            by_cell[c].append(p)

    chosen: list[Cell] = []
    covered: set[Cell] = set()

    def search() -> bool:
        free = [c for c in cells if c not in covered]
        if not free:
            return True
        best = min(free, key=lambda c: sum(1 for p in by_cell[c] if not (options[p] & covered)))
        for p in by_cell[best]:
            if options[p] & covered:
                continue
            chosen.append(p)
            covered.update(options[p])
            if search():
                return True
            covered.difference_update(options[p])
            chosen.pop()
        return False

    return sorted(chosen) if search() else None


@dataclass(frozen=True)
class Tiling:
    n: int
    tiles: tuple[tuple[Cell, ...], ...]
    region: frozenset[Cell]
    metric: str
    radius: int
    tile_size: int
    lattice: tuple[Cell, Cell] | None = None

    @property
    def interior_rate(self) -> Fraction:
        return 1 - Fraction(len(self.tiles), len(self.region))

    def check(self, g: Graph) -> None:
        seen: set[Cell] = set()
        for t in self.tiles:
            if seen & set(t):
                raise InputError("tiles overlap")
            seen |= set(t)
            bad = g.is_clique(g.index_of(c) for c in t)
            if bad is not None:
                raise InputError(f"tile {t} is not a clique: {g.labels[bad[0]]}, {g.labels[bad[1]]}")
        if seen != set(self.region):
            raise InputError("tiles do not cover the declared region exactly")


def _place(tile: Sequence[Cell], lat: _Lattice, n: int) -> tuple[Cell, list[tuple[Cell, ...]]]:
    """Best coset of the lattice: the one whose fully-inside tiles cover most cells."""
    w = max(x for x, _ in tile)
    h = max(y for _, y in tile)
    groups: dict[Cell, list[tuple[Cell, ...]]] = {}
    for px in range(-w, n):
        for py in range(-h, n):
            t = tuple((x + px, y + py) for x, y in tile)
            if all(0 <= x < n and 0 <= y < n for x, y in t):
                groups.setdefault(lat.reduce((px, py)), []).append(t)
    if not groups:
        return (0, 0), []
    shift = max(sorted(groups), key=lambda s: len(groups[s]))
    return shift, groups[shift]


def tiling_for_shape(tile: Sequence[Cell], n: int, preferred: tuple[Cell, Cell] | None = None,
                     metric: str = "custom", radius: int = 0) -> Tiling:
    tile = tuple(sorted(tile))
    cands: list[_Lattice] = []
    if preferred is not None:
        lat = _Lattice(preferred)
        if not tiles_by_lattice(tile, lat):
            raise InputError(f"lattice {preferred} does not tile {tile}")
        cands.append(lat)
    cands += [lat for lat in hnf_lattices(len(tile)) if lat not in cands and tiles_by_lattice(tile, lat)]
    best = None
    for lat in cands:
        _, tiles = _place(tile, lat, n)
        if best is None or len(tiles) > len(best[1]):
            best = (lat, tiles)
    if best is None:
        period = next((p for p in range(1, 3 * len(tile) + 1) if exact_cover_tiling(tile, p)), None)
        if period is None:
            raise InputError(f"no periodic tiling found for tile {tile}")
        trans = exact_cover_tiling(tile, period)
        tiles = []
        for px in range(-period, n + period):
            for py in range(-period, n + period):
                if (px % period, py % period) in trans:
                    t = tuple((x + px, y + py) for x, y in tile)
                    if all(0 <= x < n and 0 <= y < n for x, y in t):
                        tiles.append(t)
        lattice = None
    else:
        lattice, tiles = best[0].basis, best[1]
    if not tiles:
        raise InputError(f"no tile fits in a window of side {n}")
    region = frozenset(c for t in tiles for c in t)
    return Tiling(n, tuple(sorted(tiles)), region, metric, radius, len(tile), lattice)


def lattice_tiling(metric: str, r, n: int) -> Tiling:
    """linf / l1 anticode tilings of radius r, or rect boxes with r=(r, b)."""
    if metric == "rect":
        rr, bb = r
        if n % (rr + 1) or n % (bb + 1):
            raise InputError(f"window side {n} must be divisible by {rr + 1} and {bb + 1}")
        tile = anticode_tile("rect", 1, (rr, bb))
        return tiling_for_shape(tile, n, _documented_lattice("rect", 0, (rr, bb)), "rect", rr)
    r = int(r)
    tile = anticode_tile(metric, r)
    if metric == "linf" and n % (r + 1):
        raise InputError(f"window side {n} must be divisible by {r + 1}")
    span = max(max(c) for c in tile) + 1
    if n < span:
        raise InputError(f"window side {n} smaller than the tile span {span}")
    return tiling_for_shape(tile, n, _documented_lattice(metric, r), metric, r)


def tiling_code(t: Tiling, g: Graph, q: int) -> tuple[LinearCode, Fraction]:
    t.check(g)
    parts = [[g.index_of(c) for c in tile] for tile in t.tiles]
    covered = {v for p in parts for v in p}
    parts += [[v] for v in range(g.n) if v not in covered]
    return clique_partition_code(g, parts, q), t.interior_rate


def stacked_code(c1d: AnyCode, rows: int, cap: int = WORD_CAP) -> AnyCode:
    """Independent 1-d words on each row; cell (i, j) has id i*rows + j."""
    n = c1d.n
    if rows < 1:
        raise InputError("need at least one row")
    if isinstance(c1d, LinearCode):
        gen = np.zeros((c1d.dim * rows, n * rows), dtype=np.int64)
        for j in range(rows):
            gen[j * c1d.dim:(j + 1) * c1d.dim, j::rows] = c1d.generator
        return LinearCode(c1d.q, n * rows, gen)
    if c1d.size ** rows > cap:
        raise CapExceeded(f"{c1d.size}^{rows} words exceed cap {cap}")
    idx = np.indices((c1d.size,) * rows).reshape(rows, -1).T
    words = np.zeros((len(idx), n * rows), dtype=np.int64)
    for j in range(rows):
        words[:, j::rows] = c1d.words[idx[:, j]]
    return Code(c1d.q, c1d.level, n * rows, words)
