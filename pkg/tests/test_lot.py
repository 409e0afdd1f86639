import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lothnn.lot import (Edge, Lot, LotError, abelianization, admissible_closure, diameter, is_admissible,
                        is_minimal, is_minimal_bruteforce, is_reduced, parse, presentation, serialize, span,
                        spanning_classification, spans_whole, tree_path)
from lothnn.words import format_word
from strategies import lots, relabel


def test_parse_round_trip(three):
    assert three.vertices == ("u", "x", "y")
    assert serialize(three) == "u x y\ny u x\n"
    assert parse(serialize(three)) == three


def test_parse_ignores_comments_and_blank_lines():
    assert parse("# header\n\nu x y  # first\ny u x\n") == parse("u x y\ny u x\n")


@pytest.mark.parametrize("text, fragment", [
    ("", "empty input"),
    ("u x\n", "line 1: expected"),
    ("u x y\ny u w\n", "line 2: label 'w' is not a vertex"),
    ("u x y\nx u y\ny u x\n", "line 2: duplicate edge"),
    ("u u x\nu x u\n", "loop"),
    ("u x y\nx y u\ny u x\n", "line 3: edge y u closes a cycle"),
    ("u x y\ny z u\n", "not connected"),
])
def test_parse_errors(text, fragment):
    with pytest.raises(LotError, match=fragment):
        parse(text)


def test_constructor_rejects_non_trees():
    with pytest.raises(LotError):
        Lot(("a", "b", "c"), (Edge("a", "b", "c"),))


def test_presentation_of_three(three):
    pres = presentation(three)
    assert pres.generators == ("u", "x", "y")
    assert [format_word(r) for r in pres.relators] == ["u y x^-1 y^-1", "y x u^-1 x^-1"]
    assert abelianization(pres) == [0]


def test_abelianization_torsion_and_trivial():
    # a single edge x -> y labelled x gives x x y^-1 x^-1, i.e. x = y
    lot = parse("x y x\n")
    assert abelianization(presentation(lot)) == [0]
    from lothnn.lot import Presentation
    from lothnn.words import parse_word
    assert abelianization(Presentation(("a",), (parse_word("a a a"),))) == [3]
    assert abelianization(Presentation((), ())) == []


def test_diameter_and_path(w1, three):
    assert diameter(three) == 2
    assert diameter(w1) == 3
    path = tree_path(w1, "v2", "v8")
    assert [w1.edges[i].endpoints() for i in path] == [("v1", "v2"), ("v1", "v6"), ("v6", "v8")]


def test_reduced_violations():
    ok, bad = is_reduced(parse("u x u\nu y x\n"))
    assert not ok
    assert {v.clause for v in bad} == {1, 3}
    ok, bad = is_reduced(parse("u x w\nu y w\ny w x\n"))
    assert 2 in {v.clause for v in bad}
    assert is_reduced(parse("u x y\ny u x\n"))[0]


def test_minimal_examples(three, w1):
    assert is_minimal(three) == (True, None)
    assert is_minimal(w1)[0]
    # x - y labelled by x is admissible inside a larger tree
    lot = parse("x y x\ny z x\n")
    ok, witness = is_minimal(lot)
    assert not ok and len(witness.vertices) == 2 and is_admissible(lot, witness)


def test_spanning_classification_on_w1(w1):
    sp = spanning_classification(w1)
    assert (sp.u, sp.v) == ("v1", "v6")
    assert not sp.spanned_by_two
    assert sp.a is not None and sp.spanned_by_auv


def test_spanning_classification_refuses_non_minimal():
    with pytest.raises(LotError, match="minimal"):
        spanning_classification(parse("x y x\ny z x\n"))


@settings(max_examples=150, deadline=None)
@given(lots(min_n=2, max_n=7))
def test_minimal_matches_bruteforce(lot):
    assert is_minimal(lot)[0] == is_minimal_bruteforce(lot)


@settings(max_examples=150, deadline=None)
@given(lots(), st.data())
def test_span_is_monotone_and_idempotent(lot, data):
    small = set(data.draw(st.lists(st.sampled_from(lot.vertices), max_size=3)))
    big = small | set(data.draw(st.lists(st.sampled_from(lot.vertices), max_size=3)))
    s, b = span(lot, small), span(lot, big)
    assert s.vertices <= b.vertices and s.edges <= b.edges
    assert span(lot, s.vertices) == s
    assert is_admissible(lot, s)


@settings(max_examples=100, deadline=None)
@given(lots(), st.data())
def test_admissible_closure_contains_seed(lot, data):
    seed = data.draw(st.lists(st.sampled_from(lot.vertices), min_size=1, max_size=3))
    sub = admissible_closure(lot, seed)
    assert set(seed) <= sub.vertices
    assert is_admissible(lot, sub)
    assert len(sub.edges) == len(sub.vertices) - 1


@settings(max_examples=100, deadline=None)
@given(lots(), st.randoms(use_true_random=False))
def test_invariants_survive_renaming(lot, rng):
    perm = list(range(lot.n))
    rng.shuffle(perm)
    other = relabel(lot, perm)
    assert diameter(other) == diameter(lot)
    assert is_reduced(other)[0] == is_reduced(lot)[0]
    assert is_minimal(other)[0] == is_minimal(lot)[0]
    assert abelianization(presentation(other)) == abelianization(presentation(lot))
    assert spans_whole(other, other.vertices)
