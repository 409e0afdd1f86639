import json

import pytest
from hypothesis import given, settings

from lothnn.conjecture import (ITERATION_CAP, LIFT_FAILURE, SEED_ONLY, explore, general_cover,
                               spanning_forest)
from lothnn.covers import BACKWARD, FORWARD
from lothnn.derived import INITIAL, all_simple_cycles, build
from lothnn.hnn import assemble
from lothnn.lot import LotError
from lothnn.suites import check_conjecture_consistency
from lothnn.words import cyclic_equal, exponent_sum, is_alternating
from strategies import lots


def test_w1_families_match_pipeline(w1):
    data = explore(w1, 8)
    rep = assemble(w1)
    fams = {f.direction: f for f in data.families}
    assert set(fams) == {FORWARD, BACKWARD}
    for seq, fam in ((rep.S, fams[FORWARD]), (rep.R, fams[BACKWARD])):
        assert fam.termination == LIFT_FAILURE
        assert all(cyclic_equal(a, b) for a, b in zip(seq.words(), fam.words()))
        assert len(seq.words()) == len(fam.words())


def test_cores8_consistency(cores8):
    bad = [r[1] for r in map(check_conjecture_consistency, cores8) if not r[0]]
    assert not bad


def test_termination_kinds(w1):
    assert {f.termination for f in explore(w1, 0).families} == {SEED_ONLY}
    capped = explore(w1, 1)
    assert any(f.termination == ITERATION_CAP for f in capped.families)
    assert capped.capped
    with pytest.raises(LotError):
        explore(w1, -1)


def test_dataset_document(three):
    doc = explore(three, 3).to_dict()
    assert doc["schema"] == 1 and doc["heuristic"] is True
    json.dumps(doc)


def test_general_cover_without_split(three):
    cov = general_cover(three)
    assert not cov.two_sided
    assert cov.forest_I is not None


def test_spanning_forest_is_acyclic(w1):
    g = build(w1, INITIAL)
    f = spanning_forest(g)
    assert len(f.arcs) == len(g.nodes) - g.n_components
    assert not all_simple_cycles(f)


@settings(max_examples=80, deadline=None)
@given(lots(min_n=3, max_n=7))
def test_emitted_words_alternate_with_zero_total_exponent(lot):
    for fam in explore(lot, 4).families:
        for w in fam.words():
            assert is_alternating(w)
            assert sum(l.sign for l in w) == 0
            # per-letter sums need not vanish, so only the total is checked
            assert sum(exponent_sum(w, x) for x in lot.vertices) == 0
