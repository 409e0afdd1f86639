"""The HNN base of a core-hypothesis LOT.

Pipeline: check the hypotheses, extract the spine (the chains of edges
hanging off the two a-labelled edges), generate the R- and S-sequences,
verify their structure, and assemble presentations of the base group and
its two associated subgroups.

Conventions used throughout:

* ``lot.non_extremal()`` gives ``(u, v)`` in name order; the stable letter
  of the HNN extension is ``u``.
* The R-side checks reuse the S-side checks on the opposite LOT (every
  edge reversed).  Flipping the sign of every letter carries R-sequences of
  a LOT to S-sequences of its opposite, because the two derivative rules
  are exchanged by that substitution.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from itertools import combinations

from .covers import (BACKWARD, FORWARD, Cover, RelatorSequence, generate_sequence, level0_rotation,
                     level1_rotation, lift, make_cover, verify_certificate)
from .derived import INITIAL, TERMINAL, ClauseResult, a_edges, build, geodesic, unique_cycle
from .lot import Edge, Lot, LotError, diameter, is_minimal, is_reduced, spans_whole
from .words import (Letter, Special, Word, X, Y, cyclic_equal, cyclic_reduce, exponent_sum, format_word,
                    free_reduce, inverse, letter, occurrences, positivity, substitute)

SCHEMA = 1


class PipelineError(LotError):
    """An internal consistency failure; should not happen on core inputs."""


# ---------------------------------------------------------------------------
# hypotheses


def check_core_hypotheses(lot: Lot) -> tuple[bool, list[str]]:
    diag: list[str] = []
    if not is_reduced(lot)[0]:
        diag.append("not reduced")
    d = diameter(lot)
    if d != 3:
        diag.append(f"diameter is {d}, not 3")
    if not is_minimal(lot)[0]:
        diag.append("not minimal")
    pair = next((p for p in combinations(lot.vertices, 2) if spans_whole(lot, p)), None)
    if pair is not None:
        diag.append(f"spanned by two vertices {pair[0]}, {pair[1]}")
    if build(lot, INITIAL).n_components < 2:
        diag.append("I(G) is connected")
    if build(lot, TERMINAL).n_components < 2:
        diag.append("T(G) is connected")
    if not diag:
        e0, f0 = a_edges(lot)
        if e0 is None or f0 is None:
            diag.append("a-labelled edges do not have one extremal initial and one extremal terminal vertex")
    return not diag, diag


def is_core(lot: Lot) -> bool:
    """Same verdict as :func:`check_core_hypotheses`, cheapest tests first."""
    if not is_reduced(lot)[0] or diameter(lot) != 3:
        return False
    e0, f0 = a_edges(lot)
    if e0 is None or f0 is None:
        return False
    if build(lot, INITIAL).n_components < 2 or build(lot, TERMINAL).n_components < 2:
        return False
    if any(spans_whole(lot, p) for p in combinations(lot.vertices, 2)):
        return False
    return is_minimal(lot)[0]


def opposite(lot: Lot) -> Lot:
    """The same tree with every edge reversed."""
    return Lot(lot.vertices, tuple(Edge(e.tau, e.iota, e.label) for e in lot.edges))


def flip(w: Word) -> Word:
    """Change the sign of every letter (not the order)."""
    return tuple(Letter(l.symbol, -l.sign) for l in w)


# ---------------------------------------------------------------------------
# spine


@dataclass(frozen=True)
class SpineData:
    u: str
    v: str
    a: str
    e: tuple[int, ...]
    f: tuple[int, ...]
    b: tuple[str, ...]   # b[0] is b_1
    c: tuple[str, ...]
    x: tuple[str, ...]   # x[0] is x_1; the last entry is x_{P+1} = iota(e_P)
    y: tuple[str, ...]
    p: tuple[int, ...]   # each starts with the conventional 0
    p_prime: tuple[int, ...]
    q: tuple[int, ...]
    q_prime: tuple[int, ...]
    delta: frozenset[int]
    key_clauses: tuple[ClauseResult, ...] = ()

    @property
    def P(self) -> int:
        return len(self.e) - 1

    @property
    def Q(self) -> int:
        return len(self.f) - 1

    def bi(self, i: int) -> str | None:
        return self.b[i - 1] if 1 <= i <= self.P else None

    def ci(self, i: int) -> str | None:
        return self.c[i - 1] if 1 <= i <= self.Q else None

    def to_dict(self, lot: Lot) -> dict:
        return {
            "u": self.u, "v": self.v, "a": self.a, "P": self.P, "Q": self.Q,
            "e": [lot.edge_name(i) for i in self.e],
            "f": [lot.edge_name(i) for i in self.f],
            "b": list(self.b), "c": list(self.c), "x": list(self.x), "y": list(self.y),
            "p": list(self.p), "p_prime": list(self.p_prime),
            "q": list(self.q), "q_prime": list(self.q_prime),
            "key_clauses": [_clause_dict(r) for r in self.key_clauses],
        }


def _clause_dict(r: ClauseResult) -> dict:
    return {"clause": r.clause, "ok": r.ok, "detail": r.detail}


def _chain(lot: Lot, start: int, inner: set, delta: frozenset, a: str) -> tuple[list[int], list[str], list[str]]:
    """Follow extremal endpoints and their label edges until an edge of Delta."""
    edges, ext, centre = [start], [], []
    while edges[-1] not in delta:
        e = lot.edges[edges[-1]]
        ends = e.endpoints()
        outer = [z for z in ends if z not in inner]
        if len(outer) != 1 or outer[0] == a:
            raise PipelineError(f"chain edge {lot.edge_name(edges[-1])} does not join u/v to a new extremal vertex")
        centre.append(next(z for z in ends if z in inner))
        ext.append(outer[0])
        nxt = lot.edges_labelled(outer[0])
        if len(nxt) != 1:
            raise PipelineError(f"{outer[0]} labels {len(nxt)} edges, expected 1")
        if nxt[0] in edges:
            raise PipelineError("chain revisits an edge")
        edges.append(nxt[0])
    centre.append(next(z for z in lot.edges[edges[-1]].endpoints() if z in inner))
    return edges, ext, centre


def _chain_ends(lot: Lot, edges: list[int], ext: list[str], end: str) -> tuple[int, ...]:
    """Indices ``j`` (1..P) where the chain breaks: ``ext[j]`` is the ``end``
    vertex (``iota`` or ``tau``) of ``edges[j]``, or ``j`` is the last index."""
    last = len(edges) - 1
    out = [0]
    for j in range(1, last + 1):
        if j == last or getattr(lot.edges[edges[j]], end) == ext[j]:
            out.append(j)
    return tuple(out)


def extract_spine(lot: Lot) -> SpineData:
    inner_l = lot.non_extremal()
    if len(inner_l) != 2:
        raise LotError("expected exactly two non-extremal vertices")
    u, v = inner_l
    inner = set(inner_l)
    e0, f0 = a_edges(lot)
    if e0 is None or f0 is None:
        raise LotError("a-labelled edges are not in the expected position")
    a = lot.edges[e0].label
    delta = frozenset(i for i, e in enumerate(lot.edges) if set(e.endpoints()) <= {a, u, v})
    e, b, xs = _chain(lot, e0, inner, delta, a)
    f, c, ys = _chain(lot, f0, inner, delta, a)
    # x_{P+1}, y_{Q+1} are the initial vertices of the last chain edges
    xs[-1] = lot.edges[e[-1]].iota
    ys[-1] = lot.edges[f[-1]].iota
    if len(set(e) | set(f)) != len(e) + len(f) or len(set(b) | set(c)) != len(b) + len(c):
        raise PipelineError("spine chains overlap")
    if set(b) | set(c) | {a, u, v} != set(lot.vertices) or set(e) | set(f) != set(range(len(lot.edges))):
        raise PipelineError("spine does not cover the LOT")
    # b_{j+1} = tau(e_j): I(G) chain breaks; b_{j+1} = iota(e_j): T(G) chain breaks
    p = _chain_ends(lot, e, b, "tau")
    pp = _chain_ends(lot, e, b, "iota")
    q = _chain_ends(lot, f, c, "iota")
    qp = _chain_ends(lot, f, c, "tau")
    spine = SpineData(u, v, a, tuple(e), tuple(f), tuple(b), tuple(c), tuple(xs), tuple(ys), p, pp, q, qp, delta)
    return SpineData(**{**spine.__dict__, "key_clauses": tuple(key_lemma(lot, spine))})


def key_lemma(lot: Lot, sp: SpineData) -> list[ClauseResult]:
    """If x_2..x_P all equal one centre, x_1 is the other and e_P meets it; same for y."""
    out = []
    for name, xs, last in (("x", sp.x, sp.e[-1]), ("y", sp.y, sp.f[-1])):
        n = len(xs) - 1  # P or Q
        for k, (w, other) in enumerate(((sp.u, sp.v), (sp.v, sp.u))):
            clause = f"key.{'ii' if k else 'i'}[{name}]" if name == "x" else f"key.{'iv' if k else 'iii'}[{name}]"
            if all(z == w for z in xs[1:n]):
                ok = xs[0] == other and other in lot.edges[last].endpoints()
                out.append(ClauseResult(clause, ok, f"{name}_1 = {xs[0]}"))
            else:
                out.append(ClauseResult(clause, True, "hypothesis does not apply"))
    return out


# ---------------------------------------------------------------------------
# structure of the relators


@dataclass
class StructureReport:
    results: list[ClauseResult] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.results)

    def add(self, clause: str, ok: bool, detail: str = "") -> None:
        self.results.append(ClauseResult(clause, bool(ok), detail))

    def failures(self) -> list[ClauseResult]:
        return [r for r in self.results if not r.ok]

    def to_dict(self) -> list[dict]:
        return [_clause_dict(r) for r in self.results]


def _idx(seq: tuple[int, ...], k: int) -> int | None:
    return seq[k] if 0 <= k < len(seq) else None


def _factorizations(w: Word, a: str):
    """All cyclic splittings ``a U a^-1 V``: yields (U, V, rotation start, split index)."""
    n = len(w)
    for i in range(n):
        if w[i] != (a, 1):
            continue
        for j in range(n):
            if w[j] == (a, -1):
                k = (j - i) % n
                rot = w[i:] + w[:i]
                yield rot[1:k], rot[k + 1:], i, k


def _factor_checks(sp: SpineData, i: int, U: Word, V: Word) -> list[tuple[str, bool, str]]:
    pi = _idx(sp.p, i)
    qi = _idx(sp.q_prime, i - 1)
    if pi is None or qi is None:
        return [("i", False, f"p({i}) or q'({i - 1}) undefined")]
    base = {sp.a, sp.u, sp.v}
    u_ok = base | {sp.c[k] for k in range(min(qi + 1, sp.Q))}
    v_ok = base | {sp.b[k] for k in range(min(pi + 1, sp.P))}
    res = []
    bad = sorted({l.symbol for l in U} - u_ok) + sorted({l.symbol for l in V} - v_ok)
    res.append(("i", not bad, f"U={format_word(U)} V={format_word(V)}" + (f" stray {bad}" if bad else "")))
    if pi < sp.P:
        bnext = sp.bi(pi + 1)
        ok = occurrences(V, bnext) == 1 and occurrences(V, sp.a) == 0
        res.append(("ii", ok, f"{bnext} x{occurrences(V, bnext)}, a x{occurrences(V, sp.a)} in V"))
    else:
        res.append(("ii", True, f"p({i}) = P"))
    if qi < sp.Q:
        cnext = sp.ci(qi + 1)
        ok = occurrences(U, cnext) == 1 and occurrences(U, sp.a) == 0
        res.append(("iii", ok, f"{cnext} x{occurrences(U, cnext)}, a x{occurrences(U, sp.a)} in U"))
    else:
        res.append(("iii", True, f"q'({i - 1}) = Q"))
    return res


def subgraph_I(lot: Lot, sp: SpineData, k: int) -> set[str]:
    """Vertices of I_k: I(G)-endpoints of e_0..e_{p(k)} and f_1..f_{q'(k-1)}."""
    pk, qk = _idx(sp.p, k), _idx(sp.q_prime, k - 1)
    if pk is None or qk is None:
        return set()
    out: set[str] = set()
    for j in list(sp.e[:pk + 1]) + list(sp.f[1:qk + 1]):
        out.update((lot.edges[j].iota, lot.edges[j].label, lot.edges[j].tau))
    return out


def _split_lift(cov: Cover, w: Word, start: int, k: int) -> tuple[Word, Word]:
    """Lift ``w`` rotated to ``start`` and split it as a U~ a^-1 V~ at index ``k``."""
    rot = w[start:] + w[:start]
    lifted = lift(cov, rot, rotate=False).lifted
    # positions of the original letters inside the lifted word
    pos = [m for m, l in enumerate(lifted) if not isinstance(l.symbol, Special)]
    return lifted[pos[0] + 1:pos[k]], lifted[pos[k] + 1:]


def check_S_structure(lot: Lot, cov: Cover, sp: SpineData, words: list[Word], report: StructureReport,
                      tag: str = "S") -> None:
    """The clause matrix for a forward sequence ``words`` = [S_1, ..., S_N]."""
    n_terms = len(words)
    cycle = unique_cycle(cov.I)
    a = sp.a
    if cycle.is_directed:
        report.add(f"struct0.N[{tag}]", n_terms == 1, f"N = {n_terms}")
        s1 = words[0]
        lifted = lift(cov, s1).lifted
        pos = positivity(lifted, X)
        report.add(f"struct0.X[{tag}]", pos in ("strictly-positive", "strictly-negative"), pos)
        want = [a] + list(sp.b)
        counts = {z: occurrences(s1, z) for z in want}
        stray = [z for z in sp.c if occurrences(s1, z)]
        report.add(f"struct0.letters[{tag}]", all(c == 1 for c in counts.values()) and not stray,
                   f"counts {counts}" + (f", c letters {stray}" if stray else ""))
        bad = [z for z in want if lot.degree(z) != 1 or not any(e.iota == z for e in lot.edges)]
        report.add(f"struct0.sources[{tag}]", not bad, ", ".join(bad))
        return
    for i, w in enumerate(words, start=1):
        best = None
        for U, V, start, k in _factorizations(w, a):
            res = _factor_checks(sp, i, U, V)
            if best is None or sum(r[1] for r in res) > sum(r[1] for r in best[0]):
                best = (res, U, V, start, k)
            if all(r[1] for r in res):
                break
        if best is None:
            report.add(f"struct1.i[{tag}{i}]", False, f"no a ... a^-1 splitting of {format_word(w)}")
            if i == n_terms:
                report.add(f"SNX[{tag}{i}]", False, "needs an a U a^-1 V splitting")
                report.add(f"SNa[{tag}{i}]", False, "needs an a U a^-1 V splitting")
            continue
        res, U, V, start, k = best
        for clause, ok, detail in res:
            report.add(f"struct1.{clause}[{tag}{i}]", ok, detail)
        pi, qi = _idx(sp.p, i), _idx(sp.q_prime, i - 1)
        skip = {sp.bi(pi + 1) if pi is not None else None, sp.ci(qi + 1) if qi is not None else None}
        verts = subgraph_I(lot, sp, i)
        stray = sorted({l.symbol for l in w} - verts - skip)
        report.add(f"struct1.iv[{tag}{i}]", not stray, f"outside I_{i}: {stray}" if stray else "")
        if pi == sp.P or qi == sp.Q:
            report.add(f"struct1.v[{tag}{i}]", i == n_terms, f"i = {i}, N = {n_terms}")
        else:
            report.add(f"struct1.v[{tag}{i}]", True, "hypothesis does not apply")
        if i == n_terms:
            Ut, Vt = _split_lift(cov, w, start, k)
            pu, pv = positivity(Ut, X), positivity(Vt, X)
            report.add(f"SNX[{tag}{i}]", pu != "mixed" and pv != "mixed", f"U~: {pu}, V~: {pv}")
            na = occurrences(U, a) + occurrences(V, a)
            report.add(f"SNa[{tag}{i}]", na <= 1, f"{na} occurrences of {a} in U, V")


def verify_structure(lot: Lot, spine: SpineData, R: RelatorSequence, S: RelatorSequence,
                     cov: Cover | None = None) -> StructureReport:
    cov = cov or make_cover(lot)
    rep = StructureReport()
    for c in spine.key_clauses:
        rep.add(c.clause, c.ok, c.detail)
    M, N = R.terminal_index, S.terminal_index
    rep.add("terminates", M >= 1 and N >= 1, f"M = {M}, N = {N}")
    rep.add("M+N<|V|", M + N < lot.n, f"{M} + {N} < {lot.n}")
    lr, ls = R.items[-1].lift, S.items[-1].lift
    rep.add("R~_M uses Y not X", lr.uses_Y and not lr.uses_X, format_word(lr.lifted))
    rep.add("S~_N uses X not Y", ls.uses_X and not ls.uses_Y, format_word(ls.lifted))
    for seq, tag in ((R, "R"), (S, "S")):
        prev = seq.seed
        for k, it in enumerate(seq.items, start=1):
            ok, msg = verify_certificate(lot, prev, it.certificate, it.word)
            rep.add(f"certificate[{tag}{k}]", ok, msg)
            prev = it.word
        for k, w in enumerate(seq.words()[:-1], start=1):
            s = exponent_sum(w, spine.a)
            rep.add(f"a-exponent[{tag}{k}]", s == 0, f"exponent sum {s}")
    check_S_structure(lot, cov, spine, S.words(), rep, "S")
    op = opposite(lot)
    op_cov = make_cover(op)
    check_S_structure(op, op_cov, extract_spine(op), [flip(w) for w in R.words()], rep, "R")
    return rep


# ---------------------------------------------------------------------------
# presentations of the base and the associated subgroups


def _ends(cov: Cover, sym) -> tuple[tuple[int, str], tuple[int, str]]:
    """Endpoints of an edge of tilde-L: a vertex letter, X or Y."""
    if sym == X:
        return (0, cov.u), (0, cov.v)
    if sym == Y:
        return (1, cov.u), (1, cov.v)
    return (0, cov.side_I[sym]), (1, cov.side_T[sym])


def _walk(cov: Cover, w: Word) -> list[tuple[int, str]]:
    """Vertices visited by a path in tilde-L; the input must be a connected path."""
    if not w:
        return []
    tail, head = _ends(cov, w[0].symbol)
    cur = tail if w[0].sign > 0 else head
    out = [cur]
    for l in w:
        s, t = _ends(cov, l.symbol)
        if l.sign < 0:
            s, t = t, s
        if s != cur:
            raise PipelineError(f"{format_word(w)} is not a path in tilde-L")
        cur = t
        out.append(cur)
    return out


@dataclass
class GroupPresentation:
    name: str
    generators: tuple
    relators: list[Word]

    def to_dict(self) -> dict:
        return {"name": self.name, "generators": [str(g) for g in self.generators],
                "relators": [format_word(r) for r in self.relators]}


@dataclass
class GroupPresentationReport:
    tree: tuple[str, ...]
    basis: dict                # generator -> loop in tilde-L based at (0, u)
    groups: dict[str, GroupPresentation]
    round_trip: list[ClauseResult]

    def to_dict(self) -> dict:
        return {
            "base_point": "(0, u)",
            "tree": list(self.tree),
            "basis": {str(g): format_word(w) for g, w in self.basis.items()},
            "groups": {k: g.to_dict() for k, g in self.groups.items()},
            "round_trip": [_clause_dict(r) for r in self.round_trip],
        }


class Basis:
    """Free basis of pi_1(tilde-L): one generator per edge off the tree {u, v, w}."""

    def __init__(self, cov: Cover):
        lot = cov.lot
        u, v = cov.u, cov.v
        uv = next(e for e in lot.edges if set(e.endpoints()) == {u, v})
        self.cov = cov
        self.tree = (u, v, uv.label)
        if len(set(self.tree)) != 3:
            raise PipelineError("tree edges u, v, w are not distinct")
        self.base = (0, u)
        # tree paths from the base point
        self.path: dict = {self.base: ()}
        queue = deque([self.base])
        while queue:
            node = queue.popleft()
            for sym in self.tree:
                s, t = _ends(cov, sym)
                for a, b, sign in ((s, t, 1), (t, s, -1)):
                    if a == node and b not in self.path:
                        self.path[b] = self.path[a] + (letter(sym, sign),)
                        queue.append(b)
        if len(self.path) != 4:
            raise PipelineError("u, v, w do not span hat-L")
        self.generators = tuple(x for x in lot.vertices if x not in self.tree) + (X, Y)

    def loop(self, g) -> Word:
        s, t = _ends(self.cov, g)
        return free_reduce(self.path[s] + (letter(g),) + inverse(self.path[t]))

    def rewrite(self, w: Word) -> Word:
        """A closed path in tilde-L as a cyclically reduced word in the basis."""
        _walk(self.cov, w)
        out = [l for l in w if l.symbol not in self.tree]
        return cyclic_reduce(tuple(out)).word

    def expand(self, w: Word) -> Word:
        return free_reduce(substitute(w, {g: self.loop(g) for g in self.generators}))


def build_presentations(cov: Cover, R: RelatorSequence, S: RelatorSequence) -> GroupPresentationReport:
    basis = Basis(cov)
    gens0 = tuple(g for g in basis.generators if g not in (X, Y))
    lifted_R = [it.lift.lifted for it in R.items]
    lifted_S = [it.lift.lifted for it in S.items]
    checks = []
    rewritten = {}
    for tag, seq in (("R", lifted_R), ("S", lifted_S)):
        for k, w in enumerate(seq, start=1):
            r = basis.rewrite(w)
            rewritten[(tag, k)] = r
            ok = cyclic_equal(basis.expand(r), w)
            checks.append(ClauseResult(f"round-trip[{tag}{k}]", ok, format_word(r)))
    M, N = len(lifted_R), len(lifted_S)
    rel0 = [rewritten[("R", k)] for k in range(1, M)] + [rewritten[("S", k)] for k in range(1, N)]
    groups = {
        "G0": GroupPresentation("G0", gens0, rel0),
        "G+": GroupPresentation("G+", gens0 + (X,), rel0 + [rewritten[("S", N)]]),
        "G-": GroupPresentation("G-", gens0 + (Y,), rel0 + [rewritten[("R", M)]]),
        "G1": GroupPresentation("G1", gens0 + (X, Y), rel0 + [rewritten[("R", M)], rewritten[("S", N)]]),
    }
    return GroupPresentationReport(basis.tree, {g: basis.loop(g) for g in basis.generators}, groups, checks)


# ---------------------------------------------------------------------------
# freeness of G0


@dataclass
class FreenessWitness:
    index_set: list[int]
    assignment: list[tuple[str, int]]   # (relator, index j of b_j)
    rank: int
    checks: list[ClauseResult]

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def to_dict(self) -> dict:
        return {"index_set": self.index_set,
                "assignment": [{"relator": r, "b_index": j} for r, j in self.assignment],
                "rank": self.rank, "checks": [_clause_dict(c) for c in self.checks]}


def freeness_witness(cov: Cover, sp: SpineData, R: RelatorSequence, S: RelatorSequence) -> FreenessWitness:
    lot = cov.lot
    M, N = R.terminal_index, S.terminal_index
    pairs = []
    for i in range(1, N):
        pi = _idx(sp.p, i)
        pairs.append((f"S{i}", S.items[i - 1].word, None if pi is None else pi + 1))
    for i in range(1, M):
        pi = _idx(sp.p_prime, i - 1)
        pairs.append((f"R{i}", R.items[i - 1].word, None if pi is None else pi + 1))
    checks = []
    B = [j for _, _, j in pairs]
    ok = None not in B and len(set(B)) == len(B) == M + N - 2
    checks.append(ClauseResult("distinct", ok, f"B = {B}"))
    bindex = {z: k for k, z in enumerate(sp.b, start=1)}
    tops = {}
    for name, w, j in pairs:
        top = max((bindex[l.symbol] for l in w if l.symbol in bindex), default=None)
        tops[name] = top
        once = j is not None and j <= sp.P and occurrences(w, sp.bi(j)) == 1
        checks.append(ClauseResult(f"single[{name}]", top == j and once,
                                   f"greatest b-index {top}, expected {j}"))
    for j in set(B) - {None}:
        owners = [n for n, t in tops.items() if t == j]
        checks.append(ClauseResult(f"owner[b{j}]", len(owners) == 1, ", ".join(owners)))
    removed = {sp.bi(j) for j in B if j is not None}
    nodes = {(i, z) for i in (0, 1) for z in (cov.u, cov.v)}
    parent = {x: x for x in nodes}

    def find(x):
        while parent[x] != x:
            x = parent[x]
        return x

    for z in lot.vertices:
        if z not in removed:
            s, t = _ends(cov, z)
            parent[find(s)] = find(t)
    connected = len({find(x) for x in nodes}) == 1
    checks.append(ClauseResult("connected", connected, f"hat-L minus {sorted(x for x in removed if x)}"))
    return FreenessWitness(B, [(n, j) for n, _, j in pairs], lot.n - M - N - 1, checks)


# ---------------------------------------------------------------------------
# theta, phi and the correspondence Psi


def theta(e: Edge) -> Word:
    return (letter(e.tau), letter(e.label, -1))


def phi(e: Edge) -> Word:
    return (letter(e.label, -1), letter(e.iota))


def _sym(kind: str, lot: Lot, i: int) -> str:
    return f"{kind}_{lot.edge_name(i)}"


def theta_expression(cov: Cover, w: Word, edges=None) -> Word:
    """``w`` from level 0 as a word in the theta_e, along Phi_T (or pinned edges)."""
    lot = cov.lot
    rot = w if edges is not None else level0_rotation(w)
    out = []
    for b in range(0, len(rot), 2):
        x, y = rot[b].symbol, rot[b + 1].symbol
        steps = [(edges[b // 2], x, y)] if edges is not None else [
            (s.edge, s.src, s.dst) for s in geodesic(cov.forest_T, x, y)]
        for i, g, h in steps:
            e = lot.edges[i]
            # g h^-1 is theta_e when (g, h) = (tau, label), its inverse when reversed
            out.append(letter(_sym("theta", lot, i), 1 if (g, h) == (e.tau, e.label) else -1))
    return tuple(out)


def phi_expression(cov: Cover, w: Word, edges=None) -> Word:
    """``w`` from level 1 as a word in the phi_e, along Phi_I (or pinned edges)."""
    lot = cov.lot
    rot = w if edges is not None else level1_rotation(w)
    out = []
    for b in range(0, len(rot), 2):
        x, y = rot[b].symbol, rot[b + 1].symbol
        steps = [(edges[b // 2], x, y)] if edges is not None else [
            (s.edge, s.src, s.dst) for s in geodesic(cov.forest_I, x, y)]
        for i, g, h in steps:
            e = lot.edges[i]
            out.append(letter(_sym("phi", lot, i), 1 if (g, h) == (e.label, e.iota) else -1))
    return tuple(out)


def psi(w: Word) -> Word:
    return tuple(letter("phi_" + l.symbol[len("theta_"):], l.sign) for l in w)


def psi_inverse(w: Word) -> Word:
    return tuple(letter("theta_" + l.symbol[len("phi_"):], l.sign) for l in w)


@dataclass
class PsiReport:
    theta: dict
    phi: dict
    checks: list[ClauseResult]
    transports: list[dict]

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def to_dict(self) -> dict:
        return {"theta": {k: format_word(v) for k, v in self.theta.items()},
                "phi": {k: format_word(v) for k, v in self.phi.items()},
                "psi": {f"theta_{k}": f"phi_{k}" for k in self.theta},
                "transports": self.transports,
                "checks": [_clause_dict(c) for c in self.checks]}


def theta_phi_psi(cov: Cover, R: RelatorSequence, S: RelatorSequence) -> PsiReport:
    """Verify that Psi carries R_i to R_{i+1} and Psi^-1 carries S_j to S_{j+1}.

    The seeds use their own cycle edges, like their first derivatives.
    """
    lot = cov.lot
    th = {lot.edge_name(i): theta(e) for i, e in enumerate(lot.edges)}
    ph = {lot.edge_name(i): phi(e) for i, e in enumerate(lot.edges)}
    expand = {f"theta_{k}": w for k, w in th.items()} | {f"phi_{k}": w for k, w in ph.items()}
    checks, transports = [], []
    for tag, seq, express, move in (("R", R, theta_expression, psi), ("S", S, phi_expression, psi_inverse)):
        words = [seq.seed] + seq.words()
        for i in range(len(words) - 1):
            pinned = seq.seed_edges if i == 0 else None
            src = words[i]
            expr = express(cov, src, pinned)
            back = substitute(expr, expand)
            checks.append(ClauseResult(f"expand[{tag}{i}]", cyclic_equal(back, src), format_word(expr)))
            image = substitute(move(expr), expand)
            ok = cyclic_equal(image, words[i + 1])
            detail = "" if ok else f"image {format_word(free_reduce(image))} vs {format_word(words[i + 1])}"
            checks.append(ClauseResult(f"transport[{tag}{i}->{tag}{i + 1}]", ok, detail))
            inv = psi_inverse(move(expr)) if move is psi else psi(move(expr))
            checks.append(ClauseResult(f"involution[{tag}{i}]", inv == expr, ""))
            transports.append({"from": f"{tag}{i}", "to": f"{tag}{i + 1}", "expression": format_word(expr),
                               "image": format_word(move(expr))})
    return PsiReport(th, ph, checks, transports)


# ---------------------------------------------------------------------------
# the whole pipeline


PSI_NOTE = ("Psi is checked against the backward derivative: the image of R_i is R_(i+1) = d_-(R_i); "
            "an equivalent reading with the forward derivative is not used here.")


@dataclass
class HnnReport:
    lot: Lot
    spine: SpineData
    R: RelatorSequence
    S: RelatorSequence
    structure: StructureReport
    presentations: GroupPresentationReport
    freeness: FreenessWitness
    psi: PsiReport

    @property
    def ok(self) -> bool:
        return (self.structure.ok and self.freeness.ok and self.psi.ok
                and all(c.ok for c in self.presentations.round_trip))

    def check_matrix(self) -> dict[str, bool]:
        out = {}
        for r in (self.structure.results + self.freeness.checks + self.psi.checks
                  + self.presentations.round_trip):
            out[r.clause] = r.ok
        return out

    def to_dict(self) -> dict:
        lot = self.lot
        u = self.spine.u
        return {
            "schema": SCHEMA,
            "lot": [[e.iota, e.tau, e.label] for e in lot.edges],
            "ok": self.ok,
            "stable_letter": u,
            "base_generators": [f"{x} {u}^-1" for x in lot.vertices if x != u],
            "spine": self.spine.to_dict(lot),
            "M": self.R.terminal_index,
            "N": self.S.terminal_index,
            "R": self.R.to_dict(lot),
            "S": self.S.to_dict(lot),
            "structure": self.structure.to_dict(),
            "presentations": self.presentations.to_dict(),
            "freeness": self.freeness.to_dict(),
            "psi": self.psi.to_dict(),
            "notes": [PSI_NOTE],
        }


def assemble(lot: Lot) -> HnnReport:
    ok, diag = check_core_hypotheses(lot)
    if not ok:
        raise LotError("core hypotheses fail: " + "; ".join(diag))
    cov = make_cover(lot)
    spine = extract_spine(lot)
    R = generate_sequence(cov, BACKWARD)
    S = generate_sequence(cov, FORWARD)
    structure = verify_structure(lot, spine, R, S, cov)
    pres = build_presentations(cov, R, S)
    free = freeness_witness(cov, spine, R, S)
    ps = theta_phi_psi(cov, R, S)
    return HnnReport(lot, spine, R, S, structure, pres, free, ps)
