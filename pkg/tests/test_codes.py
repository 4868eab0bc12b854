from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from stoc.codes import (Code, LinearCode, code_from_parity, puncture_fix, rate, symbol_to_digits,
                        digits_to_symbol, verify_storage_code)
from stoc.construct import edge_to_vertex_code, gcd_scheme_code
from stoc.errors import CapExceeded, EmptySubcode, InputError
from stoc.graphs import build_graph, complete_graph, cycle_graph, path_graph, recovery_set, window_graph

from oracles import enumerate_linear, recoverable


def test_parity_on_triangle_passes():
    assert verify_storage_code(Code.from_strings(["000", "011", "101", "110"]), complete_graph(3)).ok


def test_k2_failure_witness():
    v = verify_storage_code(Code.from_strings(["00", "01"]), complete_graph(2))
    assert not v.ok
    assert (v.witness.vertex, v.witness.x, v.witness.y) == (1, (0, 0), (0, 1))


def test_repetition_on_path():
    assert verify_storage_code(Code.from_strings(["000", "111"]), path_graph(3)).ok


def test_gcd_interior_scope():
    w = window_graph(recovery_set("pair", 6, 4), 20)
    assert verify_storage_code(gcd_scheme_code(6, 4, 20, 3).code, w.graph, w.interior).ok


@pytest.mark.parametrize("code,expected", [
    (Code.from_strings(["000", "011", "101", "110"]), Fraction(2, 3)),
    (Code.from_strings(["0101"]), Fraction(0)),
])
def test_rates(code, expected):
    assert rate(code).exact == expected


def test_pentagon_edge_code_rate():
    c = edge_to_vertex_code(cycle_graph(5), 2)
    assert (c.size, c.level, rate(c).exact) == (32, 2, Fraction(1, 2))


def test_rate_of_non_power_size_is_approximate():
    r = rate(Code.from_strings(["000", "011", "101"]))
    assert r.exact is None and abs(r.approx - np.log2(3) / 3) < 1e-12


def test_rate_over_power_alphabet():
    c = Code(9, 1, 2, [[a, b] for a in range(3) for b in range(3)])
    assert rate(c).exact == Fraction(1, 2)


@pytest.mark.parametrize("q,n,rows,expected", [
    (2, 3, [(1, 1, 1)], {(0, 0, 0), (0, 1, 1), (1, 0, 1), (1, 1, 0)}),
    (2, 2, [(1, 0), (0, 1)], {(0, 0)}),
])
def test_code_from_parity(q, n, rows, expected):
    assert set(code_from_parity(q, n, rows).as_tuples()) == expected


def test_ternary_parity_contains_example_words():
    c = code_from_parity(3, 3, [(1, 1, 1)])
    assert c.size == 9 and {(0, 0, 0), (0, 1, 2), (1, 2, 0)} <= set(c.as_tuples())


def test_code_from_parity_cap():
    with pytest.raises(CapExceeded):
        code_from_parity(2, 30, [[1] * 30])


def test_puncture_fix():
    par = Code.from_strings(["000", "011", "101", "110"])
    assert set(puncture_fix(par, [0], [0]).as_tuples()) == {(0, 0, 0), (0, 1, 1)}
    with pytest.raises(EmptySubcode):
        puncture_fix(Code.from_strings(["000"]), [1], [1])
    e2v = edge_to_vertex_code(cycle_graph(5), 2)
    assert puncture_fix(e2v, [0], [e2v.words[0, 0]]).size == 8


def test_bad_symbols_rejected():
    with pytest.raises(InputError):
        Code(2, 1, 2, [[0, 2]])
    with pytest.raises(EmptySubcode):
        Code(2, 1, 2, [])


@given(st.integers(2, 5), st.integers(1, 4), st.data())
def test_digit_round_trip(q, level, data):
    sym = data.draw(st.integers(0, q ** level - 1))
    assert digits_to_symbol(symbol_to_digits(sym, q, level), q) == sym


@st.composite
def graph_and_code(draw):
    n = draw(st.integers(1, 5))
    pairs = [(u, v) for u in range(n) for v in range(n) if u != v]
    arcs = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    g = build_graph(n, arcs, directed=True)
    q = draw(st.integers(2, 3))
    words = draw(st.lists(st.tuples(*[st.integers(0, q - 1)] * n), min_size=1, max_size=12))
    return g, Code(q, 1, n, words)


@given(graph_and_code())
def test_verifier_matches_definition(gc):
    g, code = gc
    v = verify_storage_code(code, g)
    words = code.as_tuples()
    assert v.ok == recoverable(words, g)
    if not v.ok:
        w = v.witness
        assert w.x in words and w.y in words
        assert w.x[w.vertex] != w.y[w.vertex]
        assert all(w.x[u] == w.y[u] for u in g.out[w.vertex])


@given(graph_and_code(), st.data())
def test_scoped_verifier(gc, data):
    g, code = gc
    scope = data.draw(st.sets(st.integers(0, g.n - 1)))
    assert verify_storage_code(code, g, scope).ok == recoverable(code.as_tuples(), g, scope)


@st.composite
def linear_instances(draw):
    q = draw(st.sampled_from([2, 3]))
    n = draw(st.integers(1, 5))
    k = draw(st.integers(0, n))
    gen = draw(st.lists(st.lists(st.integers(0, q - 1), min_size=n, max_size=n), min_size=k, max_size=k))
    pairs = [(u, v) for u in range(n) for v in range(n) if u != v]
    arcs = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    return q, n, gen, build_graph(n, arcs, directed=True)


@given(linear_instances())
def test_linear_code_words_and_rank_verifier(inst):
    q, n, gen, g = inst
    code = LinearCode(q, n, np.array(gen, dtype=np.int64).reshape(-1, n))
    words = enumerate_linear(gen, q) if gen else {(0,) * n}
    assert set(code.to_code().as_tuples()) == words
    assert code.size == len(words)
    rank_v = verify_storage_code(code, g, method="rank")
    ext_v = verify_storage_code(code.to_code(), g, method="extensional")
    assert rank_v.ok == ext_v.ok == recoverable(sorted(words), g)
    if not rank_v.ok:
        w = rank_v.witness
        assert w.x in words and w.y in words and w.x[w.vertex] != w.y[w.vertex]
        assert all(w.x[u] == w.y[u] for u in g.out[w.vertex])
        assert rank_v.witness == ext_v.witness
