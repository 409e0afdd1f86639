import pytest
from hypothesis import given, settings

from lothnn.derived import (INITIAL, TERMINAL, a_edges, all_simple_cycles, build, check_corollary_IT, check_lemma_I,
                            check_lemma_T, geodesic, last_arc_selector, maximal_forest, unique_cycle)
from lothnn.lot import LotError, parse
from strategies import lots


def test_w1_initial_graph(w1):
    g = build(w1, INITIAL)
    assert [(a.src, a.dst) for a in g.arcs] == [("v1", "v3"), ("v1", "v5"), ("v1", "v7"), ("v1", "v8"),
                                                ("v5", "v7"), ("v6", "v2"), ("v6", "v4")]
    assert g.components() == [frozenset({"v1", "v3", "v5", "v7", "v8"}), frozenset({"v2", "v4", "v6"})]
    cyc = unique_cycle(g)
    assert cyc.vertices == ("v1", "v5", "v7") and not cyc.is_directed
    assert all_simple_cycles(g) == [cyc]


def test_w1_terminal_graph(w1):
    g = build(w1, TERMINAL)
    assert g.components() == [frozenset({"v1"}), frozenset(set(w1.vertices) - {"v1"})]
    cyc = unique_cycle(g)
    assert set(cyc.vertices) == {"v4", "v6", "v7", "v8"} and not cyc.is_directed


def test_forest_selectors_on_w1(w1):
    e0, f0 = a_edges(w1)
    assert w1.edges[e0].tau in ("v1", "v6") and w1.edges[f0].iota in ("v1", "v6")
    # non-directed cycles: I drops f0, T drops e0
    assert maximal_forest(w1, build(w1, INITIAL)).removed.edge == f0
    assert maximal_forest(w1, build(w1, TERMINAL)).removed.edge == e0
    alt = maximal_forest(w1, build(w1, INITIAL), last_arc_selector)
    assert alt.removed.edge == max(unique_cycle(build(w1, INITIAL)).edges)


def test_geodesic_stays_in_forest(w1):
    forest = maximal_forest(w1, build(w1, INITIAL))
    # the removed arc v1 -> v7 forces the detour through v5, against both arcs
    steps = geodesic(forest, "v7", "v1")
    assert [(s.src, s.dst, s.forward) for s in steps] == [("v7", "v5", False), ("v5", "v1", False)]
    assert all(s.edge in forest.members for s in steps)
    with pytest.raises(LotError, match="different components"):
        geodesic(forest, "v2", "v7")


def test_unique_cycle_needs_two_components(three):
    with pytest.raises(LotError, match="components"):
        unique_cycle(build(three, INITIAL))


def test_lemmas_and_corollary_pass_on_w1(w1):
    for results in (check_lemma_I(w1, "v1", "v6", "v7"), check_lemma_T(w1, "v1", "v6", "v7"),
                    check_corollary_IT(w1, "v1", "v6", "v7")):
        assert results and all(r.ok for r in results), results
    assert [r.clause for r in check_corollary_IT(w1, "v1", "v6", "v7")] == ["i", "ii", "iii", "iv", "v", "vi"]


def test_corollary_scope_outside_hypotheses(three):
    results = check_corollary_IT(three, "u", "x", "y")
    vi = [r for r in results if r.clause == "vi"]
    assert vi and vi[0].ok
    assert all(r.ok for r in results)


def test_export_lists_every_arc(w1):
    text = build(w1, TERMINAL).export(w1)
    assert text.startswith("graph T\nnodes ")
    assert text.count("\narc ") == len(w1.edges)


@settings(max_examples=150, deadline=None)
@given(lots(min_n=2, max_n=7))
def test_derived_graph_counts(lot):
    # n nodes and n - 1 arcs, so the cycle rank is the component count minus one
    for kind in (INITIAL, TERMINAL):
        g = build(lot, kind)
        assert len(g.arcs) == lot.n - 1
        cycles = all_simple_cycles(g)
        if g.n_components == 1:
            assert not cycles
        if g.n_components == 2:
            assert len(cycles) == 1
            assert unique_cycle(g) == cycles[0]
        for c in cycles:
            assert len(set(c.vertices)) == len(c.vertices) == len(c.arcs)
