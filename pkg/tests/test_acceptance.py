"""Acceptance criteria 1-11. The terminal summary prints one PASS/FAIL line per criterion."""
import itertools
import time
from fractions import Fraction

import pytest

from stoc import bounds as bd
from stoc.codes import rate, verify_storage_code
from stoc.construct import (clique_partition_code, edge_to_vertex_code, gcd_scheme_code, lattice_tiling,
                            matching_code, row_parity_code, stacked_code, tiling_code)
from stoc.designs import (EXAMPLE_TRIANGLE_FAMILY, affine_design, builtin_family_3x5, family_from_design,
                          verify_family)
from stoc.experiments import REFERENCE_TRIANGLE_ARRAY, TRIANGLE_SEEDS, run_experiment, sandwich
from stoc.graphs import (build_graph, cartesian_product, complete_graph, cycle_graph, is_dag, is_triangle_free,
                         path_graph, recovery_set, torus_rowcol_graph, window_graph)
from stoc.interleave import build_interleaved_graph, greedy_coloring, interleave_tuple, interleaved_code, lift_set
from stoc.lp import build_lp, check_cover, enumerate_gadgets, lift_gadget, lp_capacity_bound
from stoc.search import clique_cover_number, mais, max_matching
from stoc.simplex import solve_lp

from lp_oracle import vertex_optimum

pytestmark = pytest.mark.acceptance


class Timer:
    def __init__(self, limit: float):
        self.limit = limit

    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.t0
        if exc[0] is None:
            assert self.elapsed < self.limit, f"took {self.elapsed:.2f}s, limit {self.limit}s"


def test_criterion_01_interleaving_worked_example():
    with Timer(1.0):
        g = complete_graph(3)
        ig = build_interleaved_graph(g, greedy_coloring(g), EXAMPLE_TRIANGLE_FAMILY)
        arr = interleave_tuple(TRIANGLE_SEEDS, ig)
        rep = run_experiment("interleave-triangle")
    assert tuple(map(tuple, arr.tolist())) == REFERENCE_TRIANGLE_ARRAY
    assert rep.passed


def test_criterion_02_kirkman_family():
    with Timer(1.0):
        assert verify_family(builtin_family_3x5()).ok
        for q in (2, 3, 5, 7):
            assert verify_family(family_from_design(affine_design(q))).ok


def test_criterion_03_rate_preservation():
    with Timer(10.0):
        g = complete_graph(3)
        seed = clique_partition_code(g, [[0, 1, 2]], 3)
        ig = build_interleaved_graph(g, greedy_coloring(g), EXAMPLE_TRIANGLE_FAMILY)
        cbar = interleaved_code(seed, ig, "full")
        assert cbar.size == 9 ** 6 and cbar.alphabet == 9
        assert rate(cbar).exact == Fraction(2, 3)
        assert verify_storage_code(cbar, ig.graph).ok


def test_criterion_04_mais_lifting():
    with Timer(30.0):
        k3 = complete_graph(3)
        ig = build_interleaved_graph(k3, greedy_coloring(k3), EXAMPLE_TRIANGLE_FAMILY)
        assert mais(k3)[0] == 1 and mais(ig.graph)[0] == 3
        w = window_graph(recovery_set("interval", 2, 2), 6).graph
        fam = family_from_design(affine_design(3))
        ig2 = build_interleaved_graph(w, greedy_coloring(w), fam)
        delta, ws = mais(w)
        assert delta == 2 and fam.s == 3
        assert mais(ig2.graph)[0] == 6
        assert is_dag(ig2.graph, lift_set(ws, ig2)).ok


@pytest.mark.parametrize("n", [3, 4, 5])
def test_criterion_05_torus(n):
    with Timer(5.0):
        g = torus_rowcol_graph(n)
        code = row_parity_code(n, 2)
        assert verify_storage_code(code, g).ok and rate(code).exact == 1 - Fraction(1, n)
        rows = [[i * n + j for j in range(n)] for i in range(n)]
        anti = bd.anticode_certificate(g, rows[0], rows)
        assert anti.capacity == 1 - Fraction(1, n)
        rep = bd.capacity_certificate(f"torus-{n}", [bd.LowerBound("rows", rate(code).exact, True)], [anti])
        assert rep.verdict == "tight"


def test_criterion_06_l1_linf_windows():
    cases = [("linf", 1, 8, Fraction(3, 4)), ("linf", 2, 9, Fraction(8, 9)),
             ("l1", 1, 8, Fraction(1, 2)), ("l1", 2, 10, Fraction(4, 5))]
    with Timer(60.0):
        for metric, r, n, target in cases:
            w = window_graph(recovery_set("ball", metric, r), n)
            code, interior = tiling_code(lattice_tiling(metric, r, n), w.graph, 2)
            assert interior == target == 1 - Fraction(1, bd.anticode_max(metric, r).size)
            assert verify_storage_code(code, w.graph).ok
        for D in range(1, 5):
            assert bd.brute_anticode("l1", D) == bd.anticode_max("l1", D).size
        for metric, r, ns, target in [("linf", 1, (4, 6, 8), Fraction(3, 4)), ("linf", 2, (6, 8), Fraction(8, 9)),
                                      ("l1", 1, (4, 6, 8), Fraction(1, 2)), ("l1", 2, (6, 8), Fraction(4, 5))]:
            ser = bd.window_series(recovery_set("ball", metric, r), ns, "independence")
            for _, c, slack in ser.points:
                assert abs(c - target) <= slack


def test_criterion_07_one_dimensional():
    with Timer(60.0):
        for m in (1, 2, 3):
            ser = bd.window_series(recovery_set("interval", m, m), [4 * (m + 1), 8 * (m + 1), 16 * (m + 1)], "mais")
            vals = [c for _, c, _ in ser.points]
            assert vals == [Fraction(m, m + 1)] * 3
            assert all(a >= b for a, b in zip(vals, vals[1:]))
        sch = gcd_scheme_code(6, 4, 20, 3)
        w = window_graph(recovery_set("pair", 6, 4), 20)
        assert sch.rate == Fraction(1, 5)
        assert verify_storage_code(sch.code, w.graph, w.interior).ok


def test_criterion_08_oracle_sandwich():
    graphs = [complete_graph(2), complete_graph(3), path_graph(3), cycle_graph(4), cycle_graph(5)]
    with Timer(120.0):
        for g in graphs:
            s = sandwich(g)
            lo = max(r for r, ok in s["lower"].values() if ok)
            up = min(s["upper"].values())
            assert bd.log_rate_at_least(s["oracle"], 2, g.n, lo)
            assert bd.log_rate_at_most(s["oracle"], 2, g.n, up)
        c5 = sandwich(cycle_graph(5))
        assert c5["oracle"] ** 2 <= 2 ** 5


def test_criterion_09_lp_bound():
    with Timer(60.0):
        for n in (5, 7):
            b = lp_capacity_bound(cycle_graph(n), tau=2, max_support=2)
            assert b.relaxed == Fraction(1, 2)
            assert b.flags["restricted_gadgets"] and b.flags["relaxed_integrality"]
        checked = 0
        for g in (complete_graph(2), path_graph(3), complete_graph(3), cycle_graph(4), cycle_graph(5)):
            for tau, support in itertools.product((1, 2), (0, 1, 2)):
                prog = build_lp(g, enumerate_gadgets(g, support, tau), tau).program
                if prog.nvars <= 12:
                    assert solve_lp(prog).value == vertex_optimum(prog)
                    checked += 1
        assert checked >= 5
        c5 = cycle_graph(5)
        triv = lp_capacity_bound(c5, tau=1, max_support=0)
        ig = build_interleaved_graph(c5, greedy_coloring(c5), family_from_design(affine_design(3)))
        chk = check_cover(ig.graph, [lift_gadget(gd, ig) for gd in triv.gadgets], triv.chi, 1)
        assert chk.ok and chk.objective == triv.relaxed


def test_criterion_10_rectangle_and_axial():
    with Timer(30.0):
        w = window_graph(recovery_set("rect", 2, 1, 1, 2), 4)
        code, interior = tiling_code(lattice_tiling("rect", (1, 1), 4), w.graph, 2)
        assert interior == Fraction(3, 4) and verify_storage_code(code, w.graph).ok
        st_ = stacked_code(gcd_scheme_code(1, 1, 6, 2).code, 6)
        assert rate(st_).exact == Fraction(1, 2)
        assert verify_storage_code(st_, window_graph(recovery_set("axial", 1, 1, 1, 1), 6).graph).ok
        s = bd.axial_dag_set(1, 16)
        assert abs(s.density - Fraction(1, 2)) <= Fraction(1, 20)
        assert s.acyclic


def all_small_graphs(max_n=5):
    for n in range(2, max_n + 1):
        pairs = list(itertools.combinations(range(n), 2))
        for mask in range(1, 1 << len(pairs)):
            yield build_graph(n, [p for i, p in enumerate(pairs) if mask >> i & 1])


def test_criterion_11_property_suites():
    with Timer(600.0):
        count = 0
        for g in all_small_graphs(5):
            _, parts = clique_cover_number(g)
            codes = [clique_partition_code(g, parts, 2), matching_code(g, max_matching(g)[1], 2)]
            if all(g.out[v] for v in range(g.n)) and len(g.edges()) <= 8:
                codes.append(edge_to_vertex_code(g, 2))
            for c in codes:
                assert verify_storage_code(c, g).ok
                count += 1
            for cert in (bd.independence_certificate(g), bd.mais_certificate(g), bd.clique_cover_certificate(g),
                         bd.matching_certificate(g)):
                assert cert.validate(g)
        assert count > 1000
        fam = family_from_design(affine_design(3))
        for g in (cycle_graph(5), cartesian_product(cycle_graph(4), complete_graph(2))):
            ig = build_interleaved_graph(g, greedy_coloring(g), fam)
            assert is_triangle_free(ig.graph)


if __name__ == "__main__":
    import sys

    sys.exit(pytest.main([__file__, "-q"]))
