"""The initial graph I(G) and terminal graph T(G) of a LOT.

Both graphs share the vertex and edge sets of the tree.  The arc for edge
``e`` runs ``iota(e) -> label(e)`` in the initial graph and
``label(e) -> tau(e)`` in the terminal graph.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from itertools import combinations
from typing import Callable

from .lot import Lot, LotError, is_reduced, spans_whole

INITIAL = "I"
TERMINAL = "T"


@dataclass(frozen=True)
class Arc:
    src: str
    dst: str
    edge: int


@dataclass(frozen=True)
class DerivedGraph:
    kind: str
    nodes: tuple[str, ...]
    arcs: tuple[Arc, ...]
    component_of: dict

    @property
    def n_components(self) -> int:
        return len(set(self.component_of.values()))

    def components(self) -> list[frozenset[str]]:
        groups: dict[int, set[str]] = {}
        for x in self.nodes:
            groups.setdefault(self.component_of[x], set()).add(x)
        return [frozenset(groups[k]) for k in sorted(groups)]

    def in_degree(self, x: str) -> int:
        return sum(1 for a in self.arcs if a.dst == x)

    def out_degree(self, x: str) -> int:
        return sum(1 for a in self.arcs if a.src == x)

    def arc_of(self, edge: int) -> Arc:
        return self.arcs[edge]

    def export(self, lot: Lot) -> str:
        """Plain-text interchange form: node and arc lists with tree-edge back-references."""
        lines = [f"graph {self.kind}", "nodes " + " ".join(self.nodes)]
        for a in self.arcs:
            lines.append(f"arc {a.src} {a.dst} {lot.edge_name(a.edge)} component={self.component_of[a.src]}")
        return "\n".join(lines) + "\n"


def _components(nodes, arcs) -> dict:
    parent = {x: x for x in nodes}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a in arcs:
        ra, rb = find(a.src), find(a.dst)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)
    roots = sorted({find(x) for x in nodes})
    index = {r: i for i, r in enumerate(roots)}
    return {x: index[find(x)] for x in nodes}


def build(lot: Lot, kind: str) -> DerivedGraph:
    if kind == INITIAL:
        arcs = tuple(Arc(e.iota, e.label, i) for i, e in enumerate(lot.edges))
    elif kind == TERMINAL:
        arcs = tuple(Arc(e.label, e.tau, i) for i, e in enumerate(lot.edges))
    else:
        raise ValueError(f"unknown derived graph kind {kind!r}")
    return DerivedGraph(kind, lot.vertices, arcs, _components(lot.vertices, arcs))


# ---------------------------------------------------------------------------
# cycles


@dataclass(frozen=True)
class CycleData:
    """A simple closed walk ``vertices[0] -> vertices[1] -> ... -> vertices[0]``.

    ``arcs[k]`` joins ``vertices[k]`` to ``vertices[k+1]``; ``forward[k]`` is
    True when that step follows the arc's orientation.
    """

    vertices: tuple[str, ...]
    arcs: tuple[Arc, ...]
    forward: tuple[bool, ...]

    @property
    def is_directed(self) -> bool:
        return all(self.forward) or not any(self.forward)

    @property
    def edges(self) -> tuple[int, ...]:
        return tuple(a.edge for a in self.arcs)

    def reversed(self) -> CycleData:
        m = len(self.vertices)
        verts = (self.vertices[0],) + tuple(self.vertices[k] for k in range(m - 1, 0, -1))
        return CycleData(verts, tuple(reversed(self.arcs)), tuple(not f for f in reversed(self.forward)))

    def rotated(self, k: int) -> CycleData:
        return CycleData(self.vertices[k:] + self.vertices[:k], self.arcs[k:] + self.arcs[:k],
                         self.forward[k:] + self.forward[:k])

    def canonical(self) -> CycleData:
        """Start at the least vertex and step first to the lesser neighbour."""
        best = None
        for c in (self, self.reversed()):
            for k in range(len(c.vertices)):
                r = c.rotated(k)
                key = (r.vertices, tuple(a.edge for a in r.arcs))
                if best is None or key < best[0]:
                    best = (key, r)
        return best[1]


def _forest_path(nodes, arcs, x, y):
    """Arc steps along the unique path from x to y in an acyclic arc set, or None."""
    adj: dict[str, list[tuple[Arc, str]]] = {n: [] for n in nodes}
    for a in arcs:
        adj[a.src].append((a, a.dst))
        if a.dst != a.src:
            adj[a.dst].append((a, a.src))
    prev: dict[str, tuple[str, Arc] | None] = {x: None}
    queue = deque([x])
    while queue:
        z = queue.popleft()
        if z == y:
            break
        for a, w in adj[z]:
            if w not in prev:
                prev[w] = (z, a)
                queue.append(w)
    if y not in prev:
        return None
    steps = []
    z = y
    while prev[z] is not None:
        p, a = prev[z]
        steps.append((p, a, z))
        z = p
    return steps[::-1]


def all_simple_cycles(g: DerivedGraph) -> list[CycleData]:
    """Every simple undirected cycle, each once, in canonical form."""
    found: dict[tuple, CycleData] = {}
    arcs = g.arcs

    def dfs(start, current, visited_nodes, path_arcs, path_fwd, path_nodes):
        for a in arcs:
            if a in path_arcs:
                continue
            for here, there, fwd in ((a.src, a.dst, True), (a.dst, a.src, False)):
                if here != current:
                    continue
                if there == start:
                    cyc = CycleData(tuple(path_nodes), tuple(path_arcs) + (a,), tuple(path_fwd) + (fwd,)).canonical()
                    found.setdefault((cyc.vertices, frozenset(cyc.edges)), cyc)
                elif there not in visited_nodes and there > start:
                    dfs(start, there, visited_nodes | {there}, path_arcs + [a], path_fwd + [fwd],
                        path_nodes + [there])
                if a.src == a.dst:
                    break

    for start in g.nodes:
        dfs(start, start, {start}, [], [], [start])
    return sorted(found.values(), key=lambda c: (len(c.vertices), c.vertices, c.edges))


def unique_cycle(g: DerivedGraph) -> CycleData:
    if g.n_components != 2:
        raise LotError(f"{g.kind}-graph has {g.n_components} components; a unique cycle needs exactly 2")
    seen: list[Arc] = []
    parent = {x: x for x in g.nodes}

    def find(x):
        while parent[x] != x:
            x = parent[x]
        return x

    closing = None
    for a in g.arcs:
        ra, rb = find(a.src), find(a.dst)
        if ra == rb:
            closing = a
            break
        parent[ra] = rb
        seen.append(a)
    if closing is None:
        raise LotError(f"{g.kind}-graph has no cycle")
    path = _forest_path(g.nodes, seen, closing.dst, closing.src)
    # walk closing.src -> closing.dst via the closing arc, then back along the forest
    verts = [closing.src, closing.dst] + [s[2] for s in path][:-1]
    if closing.src == closing.dst:
        verts = [closing.src]
    arcs_ = [closing] + [s[1] for s in path]
    fwd = [True] + [s[1].src == s[0] and s[1].dst == s[2] for s in path]
    return CycleData(tuple(verts), tuple(arcs_), tuple(fwd)).canonical()


# ---------------------------------------------------------------------------
# forests and geodesics


@dataclass(frozen=True)
class MaximalForest:
    graph: DerivedGraph
    removed: Arc

    @property
    def arcs(self) -> tuple[Arc, ...]:
        return tuple(a for a in self.graph.arcs if a != self.removed)

    @property
    def members(self) -> frozenset[int]:
        return frozenset(a.edge for a in self.arcs)


Selector = Callable[[Lot, DerivedGraph, CycleData], Arc]


def a_edges(lot: Lot) -> tuple[int | None, int | None]:
    """(e0, f0): the a-labelled edges with tau resp. iota non-extremal."""
    counts = lot.label_counts()
    inner = set(lot.non_extremal())
    doubles = [x for x in lot.vertices if counts[x] == 2 and x not in inner]
    if len(doubles) != 1:
        return None, None
    a = doubles[0]
    e0 = next((i for i in lot.edges_labelled(a) if lot.edges[i].tau in inner), None)
    f0 = next((i for i in lot.edges_labelled(a) if lot.edges[i].iota in inner and i != e0), None)
    return e0, f0


def default_selector(lot: Lot, g: DerivedGraph, cycle: CycleData) -> Arc:
    """Drop f0 from a non-directed I-cycle and e0 from a directed one; mirrored for T."""
    e0, f0 = a_edges(lot)
    if g.kind == INITIAL:
        want = e0 if cycle.is_directed else f0
    else:
        want = f0 if cycle.is_directed else e0
    for a in cycle.arcs:
        if a.edge == want:
            return a
    raise LotError(f"default forest selector: edge {want} is not on the {g.kind}-cycle")


def last_arc_selector(lot: Lot, g: DerivedGraph, cycle: CycleData) -> Arc:
    return max(cycle.arcs, key=lambda a: a.edge)


def maximal_forest(lot: Lot, g: DerivedGraph, selector: Selector = default_selector) -> MaximalForest:
    cycle = unique_cycle(g)
    removed = selector(lot, g, cycle)
    if removed not in cycle.arcs:
        raise LotError("selected arc is not on the unique cycle")
    return MaximalForest(g, removed)


@dataclass(frozen=True)
class Step:
    edge: int
    src: str
    dst: str
    forward: bool  # walking along the arc's orientation


def geodesic(forest: MaximalForest | DerivedGraph, x: str, y: str, arcs=None) -> list[Step]:
    if isinstance(forest, MaximalForest):
        nodes, arcs = forest.graph.nodes, forest.arcs
    else:
        nodes = forest.nodes
        arcs = forest.arcs if arcs is None else arcs
    path = _forest_path(nodes, arcs, x, y)
    if path is None:
        raise LotError(f"no forest path from {x} to {y} (different components)")
    return [Step(a.edge, p, q, a.src == p and a.dst == q) for p, a, q in path]


# ---------------------------------------------------------------------------
# structure lemmas


@dataclass
class ClauseResult:
    clause: str
    ok: bool
    detail: str = ""


def _has_directed_cycle(nodes, arcs) -> bool:
    indeg = {x: 0 for x in nodes}
    out: dict[str, list[str]] = {x: [] for x in nodes}
    for a in arcs:
        indeg[a.dst] += 1
        out[a.src].append(a.dst)
    queue = deque(x for x in nodes if indeg[x] == 0)
    seen = 0
    while queue:
        x = queue.popleft()
        seen += 1
        for y in out[x]:
            indeg[y] -= 1
            if indeg[y] == 0:
                queue.append(y)
    return seen < len(nodes)


def check_lemma(lot: Lot, g: DerivedGraph, u: str, v: str, a: str) -> list[ClauseResult]:
    """The seven structural clauses for I(G); for T(G) roles of in/out are swapped."""
    if g.kind == INITIAL:
        indeg, outdeg, word_src, word_in = g.in_degree, g.out_degree, "sources", "terminal"
    else:
        indeg, outdeg, word_src, word_in = g.out_degree, g.in_degree, "sinks", "initial"
    res = []
    bad = [x for x in (u, v) if indeg(x) != 0]
    res.append(ClauseResult("i", not bad, f"u, v are {word_src}" if not bad else f"not {word_src}: {bad}"))
    bad = [x for x in g.nodes if x not in (u, v) and outdeg(x) > 1]
    res.append(ClauseResult("ii", not bad, ", ".join(bad)))
    res.append(ClauseResult("iii", indeg(a) == 2, f"{word_in} degree of {a} is {indeg(a)}"))
    bad = [x for x in g.nodes if x not in (a, u, v) and indeg(x) != 1]
    res.append(ClauseResult("iv", not bad, ", ".join(bad)))
    rest = [x for x in g.nodes if x != a]
    ok = not _has_directed_cycle(rest, [r for r in g.arcs if a not in (r.src, r.dst)])
    res.append(ClauseResult("v", ok, "" if ok else f"directed cycle avoiding {a}"))
    comps = g.components()
    bad = [sorted(c) for c in comps if u not in c and v not in c]
    res.append(ClauseResult("vi", not bad, "" if not bad else f"component without u, v: {bad[0]}"))
    res.append(ClauseResult("vii", len(comps) <= 2, f"{len(comps)} components"))
    return res


def check_lemma_I(lot: Lot, u: str, v: str, a: str) -> list[ClauseResult]:
    return check_lemma(lot, build(lot, INITIAL), u, v, a)


def check_lemma_T(lot: Lot, u: str, v: str, a: str) -> list[ClauseResult]:
    return check_lemma(lot, build(lot, TERMINAL), u, v, a)


def _is_path_pair(cyc: CycleData, src: set[str], dst: str) -> bool:
    """True when the cycle is two directed paths from a vertex of ``src`` to ``dst``,
    one of length 1 and the other of length at least 2."""
    m = len(cyc.vertices)
    for s in src:
        if s not in cyc.vertices or dst not in cyc.vertices:
            continue
        k = cyc.vertices.index(s)
        r = cyc.rotated(k)
        j = r.vertices.index(dst)
        first, second = r.forward[:j], r.forward[j:]
        if all(first) and not any(second) and sorted((j, m - j))[0] == 1 and m - 1 >= 2:
            return True
    return False


def check_corollary_IT(lot: Lot, u: str, v: str, a: str) -> list[ClauseResult]:
    """Corollary IT clauses.

    Clause vi (the two cycles are not both directed) is checked on any LOT
    meeting the Lemma I/T hypotheses, reading it as "I(G) and T(G) do not
    both contain a directed cycle".  The remaining clauses are checked only
    when both derived graphs are disconnected; otherwise they are reported
    as not applicable (ok, with a detail saying so).
    """
    I, T = build(lot, INITIAL), build(lot, TERMINAL)
    res = []
    both = _has_directed_cycle(I.nodes, I.arcs) and _has_directed_cycle(T.nodes, T.arcs)
    res.append(ClauseResult("vi", not both, "" if not both else "I and T both carry directed cycles"))
    applies = (I.n_components > 1 and T.n_components > 1 and is_reduced(lot)[0]
               and not any(spans_whole(lot, p) for p in combinations(lot.vertices, 2)))
    if not applies:
        for c in ("i", "ii", "iii", "iv", "v"):
            res.append(ClauseResult(c, True, "not applicable"))
        return res
    inner = {u, v}
    counts = lot.label_counts()
    doubles = [x for x in lot.vertices if counts[x] == 2 and x not in inner]
    labelled = [lot.edges[i] for i in lot.edges_labelled(a)]
    ok = (doubles == [a] and any(e.iota not in inner for e in labelled)
          and any(e.tau not in inner for e in labelled))
    res.append(ClauseResult("i", ok, f"double labels {doubles}"))
    for name, g, ccl, src, dst in (("ii", I, "iii", inner, a), ("iv", T, "v", {a}, None)):
        split = g.n_components == 2 and g.component_of[u] != g.component_of[v]
        res.append(ClauseResult(name, split, f"{g.n_components} components"))
        cyc = unique_cycle(g) if g.n_components == 2 else None
        if cyc is None:
            res.append(ClauseResult(ccl, False, "no unique cycle"))
            continue
        if cyc.is_directed:
            ok = a in cyc.vertices
        elif g.kind == INITIAL:
            ok = _is_path_pair(cyc, inner, a)
        else:
            ok = any(_is_path_pair(cyc, {a}, t) for t in inner)
        res.append(ClauseResult(ccl, ok, f"cycle {'-'.join(cyc.vertices)} directed={cyc.is_directed}"))
    return sorted(res, key=lambda r: ["i", "ii", "iii", "iv", "v", "vi"].index(r.clause))
