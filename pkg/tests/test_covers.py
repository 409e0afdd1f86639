import dataclasses

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lothnn.covers import (BACKWARD, FORWARD, NotLiftable, backward_derivative, forward_derivative,
                           generate_sequence, level0_rotation, level1_rotation, lift, make_cover, seed_R0, seed_S0,
                           verify_certificate)
from lothnn.lot import LotError
from lothnn.words import X, Y, cyclic_equal, format_word, is_alternating, letter, parse_word


@pytest.fixture(scope="module")
def cover(w1):
    return make_cover(w1)


def test_sides_on_w1(cover):
    assert cover.two_sided and (cover.u, cover.v) == ("v1", "v6")
    assert {x for x, s in cover.side_I.items() if s == "v6"} == {"v2", "v4", "v6"}
    assert {x for x, s in cover.side_T.items() if s == "v1"} == {"v1"}


def test_make_cover_needs_split(three):
    with pytest.raises(LotError):
        make_cover(three)


def test_w1_sequences(cover):
    S = generate_sequence(cover, FORWARD)
    R = generate_sequence(cover, BACKWARD)
    assert format_word(S.seed) == "v1^-1 v5 v5^-1 v7 v7^-1 v1"
    assert [format_word(w) for w in S.words()] == [
        "v5 v3^-1 v7 v6^-1 v4 v7^-1",
        "v2 v3^-1 v5 v3^-1 v7 v6^-1 v4 v8^-1 v6 v7^-1",
    ]
    assert [format_word(w) for w in R.words()] == ["v7^-1 v1 v5^-1 v7 v8^-1 v1 v4^-1 v6"]
    assert S.items[-1].lift.uses_X and not S.items[-1].lift.uses_Y
    assert R.items[-1].lift.uses_Y and not R.items[-1].lift.uses_X
    assert all(it.lift.lifts for it in S.items[:-1])


def test_certificates_verify(cover, w1):
    for seq in (generate_sequence(cover, FORWARD), generate_sequence(cover, BACKWARD)):
        prev = seq.seed
        for it in seq.items:
            assert verify_certificate(w1, prev, it.certificate, it.word) == (True, "")
            prev = it.word


def test_tampered_certificate_is_rejected(cover, w1):
    seed, edges = seed_S0(cover)
    out, cert = forward_derivative(cover, seed, edges=edges)
    step = cert.steps[0]
    bad_step = dataclasses.replace(step, replacement=tuple(reversed(step.replacement)))
    bad = dataclasses.replace(cert, steps=(bad_step,) + cert.steps[1:])
    ok, msg = verify_certificate(w1, seed, bad, out)
    assert not ok and msg
    ok, msg = verify_certificate(w1, seed, cert, out[1:] + out[:1])
    assert not ok and "concatenate" in msg


def test_derivative_refuses_side_change(cover):
    # v1 and v2 lie on different I-sides
    with pytest.raises(NotLiftable):
        forward_derivative(cover, parse_word("v1^-1 v2 v2^-1 v1"))


def test_seeds_alternate(cover):
    for seed, edges in (seed_R0(cover), seed_S0(cover)):
        assert is_alternating(seed) and len(edges) * 2 == len(seed)


def test_lift_of_crossing_word(cover):
    res = lift(cover, parse_word("v1^-1 v3 v2^-1 v4"))
    assert res.uses_Y or res.uses_X
    assert lift(cover, ()).lifts


def test_rotations():
    w = parse_word("a b^-1 c d^-1")
    assert level1_rotation(w)[0].sign == -1
    assert level0_rotation(w)[0].sign == 1
    assert cyclic_equal(level1_rotation(w), w)


def test_non_alternating_input_is_rejected(cover):
    with pytest.raises(LotError, match="alternate"):
        lift(cover, parse_word("v1 v2"))


def _rand_loop(cover, draw, side, lead):
    """Closed path whose level-crossing pairs stay on one side."""
    k = draw(st.integers(1, 4))
    verts = list(cover.lot.vertices)
    out = []
    for _ in range(k):
        x = draw(st.sampled_from(verts))
        y = draw(st.sampled_from([z for z in verts if side[z] == side[x]]))
        out += [letter(x, lead), letter(y, -lead)]
    return tuple(out)


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_random_derivatives_certify(cover, w1, data):
    w = _rand_loop(cover, data.draw, cover.side_I, -1)
    out, cert = forward_derivative(cover, w)
    assert verify_certificate(w1, w, cert, out)[0]
    w = _rand_loop(cover, data.draw, cover.side_T, 1)
    out, cert = backward_derivative(cover, w)
    assert verify_certificate(w1, w, cert, out)[0]
    assert X not in {l.symbol for l in out} and Y not in {l.symbol for l in out}


def test_backward_derivative_of_seed(cover, w1):
    seed, edges = seed_R0(cover)
    out, cert = backward_derivative(cover, seed, edges=edges)
    assert verify_certificate(w1, seed, cert, out)[0]
    assert format_word(out) == "v7^-1 v1 v5^-1 v7 v8^-1 v1 v4^-1 v6"
