from hypothesis import given, strategies as st

from lothnn.words import (X, Y, CyclicWord, cyclic_equal, cyclic_reduce, exponent_sum, format_word, free_reduce,
                          inverse, is_alternating, letter, parse_word, positivity, rotations, substitute)

W = parse_word

letters = st.builds(letter, st.sampled_from(["u", "v", "x", X]), st.sampled_from([1, -1]))
words = st.lists(letters, max_size=12).map(tuple)


def normal_form_bruteforce(w):
    """Cancel adjacent pairs in every possible order; all outcomes must agree."""
    results = set()

    def rec(cur):
        moved = False
        for i in range(len(cur) - 1):
            if cur[i].symbol == cur[i + 1].symbol and cur[i].sign == -cur[i + 1].sign:
                moved = True
                rec(cur[:i] + cur[i + 2:])
        if not moved:
            results.add(cur)

    rec(tuple(w))
    return results


def test_free_reduce_examples():
    assert free_reduce(W("u u^-1")) == ()
    assert free_reduce(W("u y x^-1 x y^-1 u^-1")) == ()
    assert free_reduce(W("u y x^-1")) == W("u y x^-1")


def test_cyclic_reduce_examples():
    # stripping x ... x^-1 leaves u y u^-1, which reduces on to y
    assert cyclic_reduce(W("x u y u^-1 x^-1")).word == W("y")
    assert cyclic_reduce(()).word == ()
    w = W("a p a^-1 q")
    assert cyclic_reduce(w).word == w


def test_exponent_sum_examples():
    assert exponent_sum(W("a p a^-1 q"), "a") == 0
    assert exponent_sum(W("X A X W X^-1 B X^-1"), X) == 0
    assert exponent_sum(W("u y"), "u") == 1


def test_positivity_examples():
    assert positivity(W("X u X"), X) == "strictly-positive"
    assert positivity(W("u v"), X) == "absent"
    assert positivity(W("X u X^-1"), X) == "mixed"
    assert positivity(W("Y^-1 u"), Y) == "strictly-negative"


def test_cyclic_equal_examples():
    assert cyclic_equal(W("u y"), W("y u"))
    assert cyclic_equal(W("u y"), W("y^-1 u^-1"), allow_inverse=True)
    assert not cyclic_equal(W("u y"), W("y^-1 u^-1"))
    assert not cyclic_equal(W("u y"), W("u x"))


def test_format_parse_round_trip():
    w = W("u y^-1 X")
    assert w[2].symbol is X
    assert format_word(w) == "u y^-1 X"
    assert parse_word(format_word(w)) == w


def test_alternating_and_substitute():
    assert is_alternating(W("u v^-1 x y^-1"))
    assert not is_alternating(W("u v"))
    assert not is_alternating(W("u"))
    assert substitute(W("t^-1"), {"t": W("a b^-1")}) == W("b a^-1")


@given(words)
def test_free_reduce_confluent(w):
    assert normal_form_bruteforce(w) == {free_reduce(w)}


@given(words)
def test_free_reduce_idempotent_and_shorter(w):
    r = free_reduce(w)
    assert free_reduce(r) == r
    assert len(r) <= len(w)
    assert free_reduce(w + inverse(w)) == ()


@given(words, words, words)
def test_cyclic_equal_is_equivalence(a, b, c):
    assert cyclic_equal(a, a)
    assert cyclic_equal(a, b) == cyclic_equal(b, a)
    if cyclic_equal(a, b) and cyclic_equal(b, c):
        assert cyclic_equal(a, c)


@given(words, st.integers(min_value=0, max_value=11))
def test_rotation_and_conjugation_preserve_cyclic_class(w, k):
    if w:
        k %= len(w)
        assert cyclic_equal(w, w[k:] + w[:k])
    g = W("x u^-1")
    assert cyclic_equal(g + w + inverse(g), w)
    assert CyclicWord(w) == CyclicWord(rotations(w)[0])


@given(words, st.integers(min_value=0, max_value=11))
def test_exponent_sum_invariant(w, k):
    rot = w[k % len(w):] + w[:k % len(w)] if w else w
    for s in ("u", "v", "x", X):
        assert exponent_sum(free_reduce(w), s) == exponent_sum(w, s) == exponent_sum(rot, s)
