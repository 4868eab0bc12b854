from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from stoc import bounds as bd
from stoc.codes import Code, rate, verify_storage_code
from stoc.construct import clique_partition_code, edge_to_vertex_code, row_parity_code
from stoc.errors import CapExceeded, InconsistentBounds, InputError
from stoc.graphs import (RecoverySet, build_graph, complete_graph, cycle_graph, path_graph, recovery_set,
                         torus_rowcol_graph)

from oracles import max_code_size


@pytest.mark.parametrize("metric,D,expected", [("l1", 2, 5), ("l1", 3, 8), ("linf", 1, 4)])
def test_anticode_sizes(metric, D, expected):
    assert bd.anticode_max(metric, D).size == expected


@pytest.mark.parametrize("D", [1, 2, 3, 4])
def test_brute_anticode_l1(D):
    assert bd.brute_anticode("l1", D, box=D + 2) == bd.anticode_max("l1", D).size


@pytest.mark.parametrize("D", [1, 2])
def test_brute_anticode_linf(D):
    assert bd.brute_anticode("linf", D, box=D + 2) == bd.anticode_max("linf", D).size


@pytest.mark.parametrize("nv,size,cap", [(9, 3, Fraction(2, 3)), (64, 4, Fraction(3, 4)), (100, 5, Fraction(4, 5))])
def test_code_anticode_bound(nv, size, cap):
    b = bd.code_anticode_bound(nv, size)
    assert b.capacity == cap and b.max_code_size == nv // size


@pytest.mark.parametrize("rs,target", [
    (recovery_set("interval", 2, 2), Fraction(2, 3)),
    (RecoverySet.custom([-4, -2, -1, 1, 2, 4]), Fraction(2, 3)),
    (recovery_set("interval", 1, 1), Fraction(1, 2)),
])
def test_diff_avoiding(rs, target):
    rows = bd.diff_avoiding_bound(rs, [12, 24, 60])
    assert rows[-1]["bound"] == target
    assert all(r["bound"] >= target for r in rows)


def test_axial_dag_sets():
    s = bd.axial_dag_set(1, 8)
    assert s.acyclic and s.density == Fraction(1, 2)
    assert bd.axial_dag_set(1, 2).cells == ((0, 0), (1, 1))
    assert bd.axial_dag_set(2, 9).density == Fraction(1, 3)
    with pytest.raises(InputError):
        bd.axial_dag_set(2, 8)


@pytest.mark.parametrize("g,expected", [
    (complete_graph(2), 2), (complete_graph(3), 4), (path_graph(3), 2), (cycle_graph(4), 4), (cycle_graph(5), 5),
])
def test_oracle_matches_independent_search(g, expected):
    size, code = bd.oracle_max_code(g, 2)
    assert size == expected == max_code_size(g, 2)
    assert verify_storage_code(code, g).ok


def test_oracle_cap():
    with pytest.raises(CapExceeded):
        bd.oracle_max_code(cycle_graph(20), 2)


def test_log_rate_helpers():
    assert bd.log_rate_at_most(5, 2, 5, Fraction(1, 2))
    assert not bd.log_rate_at_most(6, 2, 5, Fraction(1, 2))
    assert bd.log_rate_at_least(4, 2, 5, Fraction(2, 5))


def test_certificates_k3_tight():
    k3 = complete_graph(3)
    par = clique_partition_code(k3, [[0, 1, 2]], 2)
    rep = bd.capacity_certificate("K3", [bd.LowerBound("parity", rate(par).exact, True)],
                                  [bd.independence_certificate(k3)])
    assert (rep.verdict, rep.best_lower, rep.gap) == ("tight", Fraction(2, 3), 0)


def test_certificates_torus_tight():
    g = torus_rowcol_graph(3)
    rows = [[3 * i + j for j in range(3)] for i in range(3)]
    anti = bd.anticode_certificate(g, rows[0], rows)
    rep = bd.capacity_certificate("torus", [bd.LowerBound("rows", rate(row_parity_code(3, 2)).exact, True)], [anti])
    assert rep.verdict == "tight" and rep.best_upper == Fraction(2, 3)


def test_certificates_c5_gap():
    c5 = cycle_graph(5)
    low = bd.LowerBound("edges", rate(edge_to_vertex_code(c5, 2)).exact, True)
    rep = bd.capacity_certificate("C5", [low], [bd.independence_certificate(c5)])
    assert rep.verdict == "gap" and rep.gap == Fraction(1, 10)


def test_inconsistent_bounds_detected():
    with pytest.raises(InconsistentBounds):
        bd.capacity_certificate("K3", [bd.LowerBound("bogus", Fraction(9, 10), True)],
                                [bd.independence_certificate(complete_graph(3))])


def test_unverified_construction_rejected():
    with pytest.raises(InputError):
        bd.capacity_certificate("K3", [bd.LowerBound("x", Fraction(1, 2), False)],
                                [bd.independence_certificate(complete_graph(3))])


def test_anticode_certificate_needs_maximum_clique():
    g = torus_rowcol_graph(3)
    with pytest.raises(InputError):
        bd.anticode_certificate(g, [0, 1], None)


@pytest.mark.parametrize("rs,ns,target", [
    (recovery_set("interval", 1, 1), [4, 6, 8], Fraction(1, 2)),
    (recovery_set("interval", 2, 2), [6, 9, 12], Fraction(2, 3)),
    (recovery_set("pair", 6, 4), [10, 20], Fraction(1, 5)),
])
def test_window_series(rs, ns, target):
    ser = bd.window_series(rs, ns)
    assert ser.points[-1][1] == target and ser.estimate
    assert all(c >= target for _, c, _ in ser.points)


@st.composite
def small_graphs(draw):
    n = draw(st.integers(1, 6))
    pairs = [(u, v) for u in range(n) for v in range(n) if u != v]
    arcs = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    return build_graph(n, arcs, directed=draw(st.booleans()) or not arcs)


@given(small_graphs())
def test_certificate_witnesses_revalidate(g):
    certs = [bd.independence_certificate(g), bd.mais_certificate(g)]
    if g.is_symmetric():
        certs += [bd.clique_cover_certificate(g), bd.matching_certificate(g)]
    for c in certs:
        assert c.validate(g), c.kind


@given(small_graphs())
def test_sandwich_on_random_graphs(g):
    if g.n > 4:
        return
    size, code = bd.oracle_max_code(g, 2)
    assert verify_storage_code(code, g).ok
    assert size == max_code_size(g, 2)
    for up in (bd.independence_certificate(g), bd.mais_certificate(g)):
        assert bd.log_rate_at_most(size, 2, g.n, up.capacity)
    if g.is_symmetric():
        cc = bd.clique_cover_certificate(g)
        assert bd.log_rate_at_least(size, 2, g.n, cc.capacity)
