"""Named property checks run over enumerated LOTs.

Every check takes a :class:`Lot` and returns ``None`` when the LOT is
outside its scope, otherwise ``(ok, message)``.  Checks are module-level
functions so that they can be shipped to worker processes by name.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .conjecture import explore
from .covers import BACKWARD, FORWARD, generate_sequence, make_cover
from .decomposition import LABELS, classify
from .derived import check_corollary_IT, check_lemma_I, check_lemma_T, unique_cycle
from .hnn import assemble, extract_spine, is_core, opposite
from .lot import Lot, diameter, is_minimal, is_minimal_bruteforce, is_reduced
from .words import cyclic_equal, exponent_sum, format_word, is_alternating


def lemma_hypothesis(lot: Lot) -> tuple[str, str, str] | None:
    """(u, v, a) when the LOT is reduced, minimal, of diameter 3 and some
    extremal vertex a labels exactly two edges."""
    if lot.n < 4 or diameter(lot) != 3 or not is_reduced(lot)[0] or not is_minimal(lot)[0]:
        return None
    u, v = lot.non_extremal()
    counts = lot.label_counts()
    doubles = [x for x in lot.extremal() if counts[x] == 2]
    if len(doubles) != 1:
        return None
    return u, v, doubles[0]


def _clauses(prefix, results):
    bad = [f"{prefix}.{r.clause}: {r.detail}" for r in results if not r.ok]
    return not bad, "; ".join(bad)


def check_lemma_I_suite(lot: Lot):
    h = lemma_hypothesis(lot)
    return None if h is None else _clauses("lemma-I", check_lemma_I(lot, *h))


def check_lemma_T_suite(lot: Lot):
    h = lemma_hypothesis(lot)
    return None if h is None else _clauses("lemma-T", check_lemma_T(lot, *h))


def check_corollary_IT_suite(lot: Lot):
    h = lemma_hypothesis(lot)
    return None if h is None else _clauses("corollary-IT", check_corollary_IT(lot, *h))


@lru_cache(maxsize=4)
def _report(lot: Lot):
    return assemble(lot)


@dataclass(frozen=True)
class FinalTermGap:
    """Why the final forward term of ``tree`` may break the splitting clauses.

    Only relevant when the I-cycle is not directed; a directed cycle gives a
    single term checked by the one-term clauses, which need no splitting.

    ``cause``: the edge joining a to a centre (it ends one of the two
    chains) starts at a, so a is not a leaf of the I-forest, and the last
    derivative step routes a block through that edge, rewriting an a-letter.
    ``unbalanced``: the final term has nonzero a-exponent sum.  ``lost``: it
    misses a or a^-1.
    """

    tag: str
    index: int
    directed: bool
    cause: bool
    unbalanced: bool
    lost: bool

    def _at(self, names) -> set[str]:
        return {f"{c}[{self.tag}{self.index}]" for c in names}

    @property
    def allowed(self) -> set[str]:
        """Clauses that may fail: those needing a clean a U a^-1 V splitting."""
        if self.directed or not (self.cause and self.unbalanced):
            return set()
        return self._at(("struct1.i", "SNX", "SNa"))

    @property
    def forced(self) -> set[str]:
        """Clauses that must fail: with a or a^-1 missing there is no splitting at all."""
        if self.directed or not self.lost:
            return set()
        return self._at(("struct1.i", "SNX", "SNa"))


def final_term_gaps(lot: Lot) -> list[FinalTermGap]:
    """S-side data of ``lot`` and R-side data read on the opposite LOT, whose
    forward sequence is the sign-flipped R-sequence."""
    out = []
    for tag, tree in (("S", lot), ("R", opposite(lot))):
        sp = extract_spine(tree)
        cov = make_cover(tree)
        seq = generate_sequence(cov, FORWARD)
        last = seq.items[-1]
        # the edge joining a to a centre ends one of the two chains
        e_a = next(k for k in (sp.e[-1], sp.f[-1]) if sp.a in tree.edges[k].endpoints())
        cause = (tree.edges[e_a].iota == sp.a
                 and any(st.edge == e_a and sp.a in (st.replaced[0].symbol, st.replaced[1].symbol)
                         for st in last.certificate.steps))
        out.append(FinalTermGap(tag, seq.terminal_index, unique_cycle(cov.I).is_directed, cause,
                                exponent_sum(last.word, sp.a) != 0,
                                (sp.a, 1) not in last.word or (sp.a, -1) not in last.word))
    return out


def check_sequences(lot: Lot):
    if not is_core(lot):
        return None
    rep = _report(lot)
    M, N = rep.R.terminal_index, rep.S.terminal_index
    lr, ls = rep.R.items[-1].lift, rep.S.items[-1].lift
    ok = (M >= 1 and N >= 1 and M + N < lot.n and lr.uses_Y and not lr.uses_X
          and ls.uses_X and not ls.uses_Y)
    return ok, f"M = {M}, N = {N}, R~_M = {format_word(lr.lifted)}, S~_N = {format_word(ls.lifted)}"


def check_certificates(lot: Lot):
    if not is_core(lot):
        return None
    rep = _report(lot)
    wanted = ("certificate[", "a-exponent[")
    return _clauses("structure", [r for r in rep.structure.results if r.clause.startswith(wanted)])


def check_structure_matrix(lot: Lot):
    """Every clause of the structure matrix passes."""
    if not is_core(lot):
        return None
    return _clauses("structure", _report(lot).structure.results)


def check_structure_modulo_gap(lot: Lot):
    """All clauses pass except final-term splitting clauses explained by :class:`FinalTermGap`."""
    if not is_core(lot):
        return None
    rep = _report(lot)
    failed = {r.clause for r in rep.structure.failures()}
    gaps = final_term_gaps(lot)
    allowed = set().union(*(g.allowed for g in gaps))
    forced = set().union(*(g.forced for g in gaps))
    ok = forced <= failed <= allowed
    return ok, f"failed {sorted(failed)}, forced {sorted(forced)}, allowed {sorted(allowed)}"


def check_freeness(lot: Lot):
    if not is_core(lot):
        return None
    rep = _report(lot)
    g0 = rep.presentations.groups["G0"]
    rank = len(g0.generators) - len(g0.relators)
    M, N = rep.R.terminal_index, rep.S.terminal_index
    ok, msg = _clauses("freeness", rep.freeness.checks)
    want = lot.n - M - N - 1
    ok = ok and rep.freeness.rank == rank == want
    return ok, msg or f"rank {rep.freeness.rank}, generators minus relators {rank}, expected {want}"


def check_psi(lot: Lot):
    if not is_core(lot):
        return None
    rep = _report(lot)
    return _clauses("psi", rep.psi.checks + rep.presentations.round_trip)


def check_conjecture_consistency(lot: Lot):
    if not is_core(lot):
        return None
    rep = _report(lot)
    data = explore(lot, lot.n)
    fams = {f.direction: f for f in data.families}
    if len(data.families) != 2:
        return False, f"{len(data.families)} cycle families, expected 2"
    for seq, fam in ((rep.R, fams[BACKWARD]), (rep.S, fams[FORWARD])):
        a, b = seq.words(), fam.words()
        if len(a) != len(b) or not all(cyclic_equal(x, y) for x, y in zip(a, b)):
            return False, f"{seq.direction}: {[format_word(w) for w in a]} vs {[format_word(w) for w in b]}"
    return True, ""


def check_conjecture_words(lot: Lot):
    """Emitted relators are alternating with total exponent sum zero."""
    data = explore(lot, min(lot.n, 6))
    for fam in data.families:
        for w in fam.words():
            if not is_alternating(w) or sum(l.sign for l in w):
                return False, format_word(w)
    return True, ""


def check_decomposition(lot: Lot):
    if diameter(lot) > 3:
        return None
    rep = classify(lot)
    ok = rep.ok and rep.classification in LABELS and is_minimal(rep.core)[0]
    ok = ok and len(rep.chain) <= lot.n and (not rep.chain or not is_minimal(lot)[0])
    return ok, f"{rep.classification}, chain {len(rep.chain)}"


def check_minimal_oracle(lot: Lot):
    a, b = is_minimal(lot)[0], is_minimal_bruteforce(lot)
    return a == b, f"edge closure {a}, brute force {b}"


STANDARD_CHECKS = {
    "lemma-I": check_lemma_I_suite,
    "lemma-T": check_lemma_T_suite,
    "corollary-IT": check_corollary_IT_suite,
    "sequences": check_sequences,
    "certificates": check_certificates,
    "structure": check_structure_matrix,
    "structure-modulo-gap": check_structure_modulo_gap,
    "freeness": check_freeness,
    "psi": check_psi,
    "conjecture-consistency": check_conjecture_consistency,
    "conjecture-words": check_conjecture_words,
    "decomposition": check_decomposition,
    "minimal-oracle": check_minimal_oracle,
}
