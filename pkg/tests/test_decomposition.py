import pytest
from hypothesis import given, settings

from lothnn.decomposition import (CHAIN, CORE, LABELS, TRIVIAL, TWO_SPANNED, admissible_subtrees, classify,
                                  decompose_step, sub_lot)
from lothnn.lot import LotError, diameter, is_minimal, parse, span, spans_whole
from strategies import lots


def test_three_is_two_spanned(three):
    rep = classify(three)
    assert rep.classification == TWO_SPANNED
    assert rep.flags["spanning_pair"] == ["u", "x"]
    assert not rep.chain and rep.hnn is None


def test_single_edge_is_trivial():
    assert classify(parse("x y x\n")).classification == TRIVIAL


def test_chain_over_star():
    lot = parse("v1 v2 v2\nv1 v3 v3\nv1 v4 v4\n")
    rep = classify(lot)
    assert rep.classification == CHAIN
    assert len(rep.chain) == 2 and rep.ok
    assert is_minimal(rep.core)[0] and rep.core.n == 2
    doc = rep.to_dict()
    # listed from the core upwards
    assert [len(s["subtree_vertices"]) for s in doc["chain"]] == [2, 3]
    assert all(s["span_replay"] for s in doc["chain"])


def test_core_classification_embeds_hnn(w1):
    rep = classify(w1)
    assert rep.classification == CORE and rep.hnn is not None and rep.hnn.ok
    assert rep.to_dict()["hnn"]["M"] == 1


def test_decompose_step_contract():
    lot = parse("x y x\ny z x\n")
    sub, x = decompose_step(lot)
    assert spans_whole(lot, sub.vertices | {x})
    assert len(sub.vertices) == 2 and x not in sub.vertices
    assert sub_lot(lot, sub).n == 2


def test_refusals(three):
    with pytest.raises(LotError, match="minimal"):
        decompose_step(three)
    deep = parse("a b a\nb c a\nc d a\nd e a\n")
    assert diameter(deep) == 4
    with pytest.raises(LotError, match="diameter"):
        classify(deep)


def test_admissible_subtrees_are_admissible(w1):
    assert admissible_subtrees(w1, 3) == []
    lot = parse("x y x\ny z x\n")
    subs = admissible_subtrees(lot, 2)
    assert [sorted(s.vertices) for s in subs] == [["x", "y"]]


@settings(max_examples=150, deadline=None)
@given(lots(min_n=2, max_n=7))
def test_classification_is_total_with_replayable_chain(lot):
    if diameter(lot) > 3:
        return
    rep = classify(lot)
    assert rep.classification in LABELS
    assert is_minimal(rep.core)[0]
    current = lot
    for step in rep.chain:
        assert step.parent == current
        assert span(current, step.sub.vertices | {step.x}).is_whole(current)
        current = sub_lot(current, step.sub)
    assert current == rep.core
