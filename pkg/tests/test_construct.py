import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from stoc.codes import Code, rate, verify_storage_code
from stoc.construct import (anticode_tile, clique_partition_code, edge_to_vertex_code, exact_cover_tiling,
                            gcd_scheme_code, lattice_tiling, matching_code, row_parity_code, stacked_code,
                            tiling_code)
from stoc.errors import InputError
from stoc.graphs import build_graph, complete_graph, cycle_graph, recovery_set, torus_rowcol_graph, window_graph
from stoc.search import clique_cover_number, max_matching

from oracles import recoverable


@pytest.mark.parametrize("g,parts,expected", [
    (complete_graph(3), [[0, 1, 2]], Fraction(2, 3)),
    (cycle_graph(6), [[0, 1], [2, 3], [4, 5]], Fraction(1, 2)),
    (torus_rowcol_graph(3), [[0, 1, 2], [3, 4, 5], [6, 7, 8]], Fraction(2, 3)),
])
def test_clique_partition_rates(g, parts, expected):
    c = clique_partition_code(g, parts, 2)
    assert rate(c).exact == expected
    assert verify_storage_code(c, g).ok


def test_non_clique_part_names_pair():
    with pytest.raises(InputError, match="0 and 2"):
        clique_partition_code(cycle_graph(5), [[0, 1, 2], [3, 4]], 2)


@pytest.mark.parametrize("n", [3, 4, 5])
def test_row_parity(n):
    c = row_parity_code(n, 2)
    assert rate(c).exact == 1 - Fraction(1, n)
    assert verify_storage_code(c, torus_rowcol_graph(n)).ok


def test_edge_to_vertex_examples():
    c5 = edge_to_vertex_code(cycle_graph(5), 2)
    assert (c5.size, rate(c5).exact) == (32, Fraction(1, 2))
    assert verify_storage_code(c5, cycle_graph(5)).ok
    k2 = edge_to_vertex_code(complete_graph(2), 3)
    assert (k2.size, rate(k2).exact) == (3, Fraction(1, 2))
    assert rate(edge_to_vertex_code(cycle_graph(4), 2)).exact == Fraction(1, 2)


def test_edge_to_vertex_vertex_stores_its_edges():
    # vertex 1 of the pentagon sees edges (0,1) and (1,2): two digits, one per edge
    c = edge_to_vertex_code(cycle_graph(5), 2)
    d = c.digit_rows().reshape(c.size, 5, 2)
    assert all(d[i, 1, 0] == d[i, 0, 0] and d[i, 1, 1] == d[i, 2, 0] for i in range(c.size))


def test_matching_examples():
    assert rate(matching_code(cycle_graph(5), [(0, 1), (2, 3)], 2)).exact == Fraction(2, 5)
    assert set(matching_code(complete_graph(2), [(0, 1)], 2).as_tuples()) == {(0, 0), (1, 1)}
    assert rate(matching_code(cycle_graph(6), [(0, 1), (2, 3), (4, 5)], 2)).exact == Fraction(1, 2)
    with pytest.raises(InputError):
        matching_code(cycle_graph(5), [(0, 1), (1, 2)], 2)


@pytest.mark.parametrize("l,r,n,q,expected", [
    (6, 4, 20, 3, Fraction(1, 5)),
    (1, 1, 10, 2, Fraction(1, 2)),
    (2, 4, 12, 2, Fraction(1, 3)),
])
def test_gcd_scheme_examples(l, r, n, q, expected):
    sch = gcd_scheme_code(l, r, n, q)
    w = window_graph(recovery_set("pair", l, r), n)
    assert sch.rate == expected == rate(sch.code).exact
    assert verify_storage_code(sch.code, w.graph, w.interior).ok


@given(st.integers(1, 6), st.integers(1, 6), st.integers(1, 3))
def test_gcd_scheme_property(l, r, blocks):
    m = l + r
    n = m * max(blocks, 2)
    sch = gcd_scheme_code(l, r, n, 2)
    w = window_graph(recovery_set("pair", l, r), n)
    assert sch.rate == Fraction(math.gcd(l, r), m)
    assert verify_storage_code(sch.code, w.graph).ok


@pytest.mark.parametrize("metric,r,n,size,ntiles", [
    ("linf", 1, 4, 4, 4),
    ("l1", 2, 10, 5, None),
    ("l1", 1, 8, 2, None),
])
def test_lattice_tilings(metric, r, n, size, ntiles):
    t = lattice_tiling(metric, r, n)
    assert t.tile_size == size and all(len(tile) == size for tile in t.tiles)
    if ntiles is not None:
        assert len(t.tiles) == ntiles


def test_rect_tiling_is_boxes():
    t = lattice_tiling("rect", (1, 1), 4)
    assert len(t.tiles) == 4
    for tile in t.tiles:
        xs, ys = {c[0] for c in tile}, {c[1] for c in tile}
        assert len(xs) == len(ys) == 2 and len(tile) == 4


@pytest.mark.parametrize("metric,r,n,rs,expected", [
    ("linf", 1, 4, recovery_set("ball", "linf", 1), Fraction(3, 4)),
    ("l1", 2, 10, recovery_set("ball", "l1", 2), Fraction(4, 5)),
    ("rect", (1, 1), 4, recovery_set("rect", 2, 1, 1, 2), Fraction(3, 4)),
])
def test_tiling_codes(metric, r, n, rs, expected):
    w = window_graph(rs, n)
    t = lattice_tiling(metric, r, n)
    t.check(w.graph)
    code, interior = tiling_code(t, w.graph, 2)
    assert interior == expected
    assert verify_storage_code(code, w.graph).ok


def test_exact_cover_fallback_tiles_a_torus():
    tile = anticode_tile("l1", 1)
    placements = exact_cover_tiling(tile, 4)
    assert placements is not None
    cells = [((x + dx) % 4, (y + dy) % 4) for dx, dy in placements for x, y in tile]
    assert sorted(cells) == sorted((i, j) for i in range(4) for j in range(4))


def test_stacked_codes():
    one = gcd_scheme_code(1, 1, 6, 2).code
    st_ = stacked_code(one, 6)
    assert rate(st_).exact == Fraction(1, 2)
    assert verify_storage_code(st_, window_graph(recovery_set("axial", 1, 1, 1, 1), 6).graph).ok
    single = stacked_code(Code.from_strings(["0101"]), 4)
    assert single.size == 1


@st.composite
def undirected(draw, max_n=7):
    n = draw(st.integers(2, max_n))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    edges = draw(st.lists(st.sampled_from(pairs), unique=True, min_size=1))
    return build_graph(n, edges)


@given(undirected(), st.sampled_from([2, 3]))
def test_constructions_always_recoverable(g, q):
    _, parts = clique_cover_number(g)
    cc = clique_partition_code(g, parts, q)
    assert recoverable(cc.to_code().as_tuples(), g)
    _, pairs = max_matching(g)
    mc = matching_code(g, pairs, q)
    assert recoverable(mc.as_tuples(), g) and verify_storage_code(mc, g).ok
    if all(g.out[v] for v in range(g.n)) and len(g.edges()) <= 8:
        e2v = edge_to_vertex_code(g, q)
        assert verify_storage_code(e2v, g).ok
        assert rate(e2v).exact == Fraction(len(g.edges()), g.n * e2v.level)
