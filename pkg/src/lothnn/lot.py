"""Labelled oriented trees: data model, text format and basic predicates."""

from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Iterable

from .words import Word, letter


class LotError(ValueError):
    """Raised for malformed LOT input or violated preconditions."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


@dataclass(frozen=True)
class Edge:
    iota: str
    tau: str
    label: str

    def endpoints(self) -> tuple[str, str]:
        return (self.iota, self.tau)

    def other(self, x: str) -> str:
        return self.tau if x == self.iota else self.iota


@dataclass(frozen=True)
class Lot:
    """A labelled oriented tree in canonical order.

    Vertices are sorted by name and edges by ``(iota, tau)``; edge indices
    used everywhere else in the package refer to this order.
    """

    vertices: tuple[str, ...]
    edges: tuple[Edge, ...]

    def __post_init__(self):
        verts = tuple(sorted(set(self.vertices)))
        if len(verts) != len(self.vertices):
            raise LotError("duplicate vertex")
        if not verts:
            raise LotError("a LOT needs at least one vertex")
        edges = tuple(sorted(self.edges, key=lambda e: (e.iota, e.tau)))
        object.__setattr__(self, "vertices", verts)
        object.__setattr__(self, "edges", edges)
        _check_tree(verts, edges)

    @classmethod
    def from_triples(cls, triples: Iterable[tuple[str, str, str]], vertices: Iterable[str] = ()) -> Lot:
        edges = tuple(Edge(*t) for t in triples)
        verts = set(vertices)
        for e in edges:
            verts.update(e.endpoints())
        return cls(tuple(verts), edges)

    @property
    def n(self) -> int:
        return len(self.vertices)

    def edge_name(self, index: int) -> str:
        return f"e{index + 1}"

    @cached_property
    def _adj(self) -> dict[str, tuple[tuple[int, str], ...]]:
        adj: dict[str, list[tuple[int, str]]] = {v: [] for v in self.vertices}
        for i, e in enumerate(self.edges):
            adj[e.iota].append((i, e.tau))
            adj[e.tau].append((i, e.iota))
        return {v: tuple(n) for v, n in adj.items()}

    def adjacency(self) -> dict[str, list[tuple[int, str]]]:
        return {v: list(n) for v, n in self._adj.items()}

    def degree(self, x: str) -> int:
        return len(self._adj[x])

    def extremal(self) -> list[str]:
        return [x for x in self.vertices if self.degree(x) <= 1]

    def non_extremal(self) -> list[str]:
        return [x for x in self.vertices if self.degree(x) > 1]

    def label_counts(self) -> Counter:
        return Counter(e.label for e in self.edges)

    def edges_labelled(self, x: str) -> list[int]:
        return [i for i, e in enumerate(self.edges) if e.label == x]

    def whole(self) -> Subgraph:
        return Subgraph(frozenset(self.vertices), frozenset(range(len(self.edges))))


def _check_tree(vertices: tuple[str, ...], edges: tuple[Edge, ...]) -> None:
    names = set(vertices)
    parent = {v: v for v in vertices}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for e in edges:
        for x in (e.iota, e.tau, e.label):
            if x not in names:
                raise LotError(f"unknown vertex {x!r}")
        if e.iota == e.tau:
            raise LotError(f"edge {e.iota} {e.tau} is a loop")
        ri, rt = find(e.iota), find(e.tau)
        if ri == rt:
            raise LotError("graph is not a tree (cycle)")
        parent[ri] = rt
    if len(edges) != len(vertices) - 1:
        raise LotError("graph is not a tree (disconnected)")


@dataclass(frozen=True)
class Subgraph:
    vertices: frozenset[str]
    edges: frozenset[int] = field(default_factory=frozenset)

    def is_whole(self, lot: Lot) -> bool:
        return len(self.vertices) == lot.n and len(self.edges) == len(lot.edges)


@dataclass(frozen=True)
class Presentation:
    generators: tuple[str, ...]
    relators: tuple[Word, ...]


# ---------------------------------------------------------------------------
# text format


def _strip(line: str) -> str:
    return line.split("#", 1)[0].strip()


def parse(text: str | bytes) -> Lot:
    """Parse the line format ``iota tau label`` (``#`` starts a comment)."""
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    rows: list[tuple[int, tuple[str, str, str]]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = _strip(raw)
        if not body:
            continue
        tokens = body.split()
        if len(tokens) != 3:
            raise LotError(f"expected 'iota tau label', got {len(tokens)} tokens", lineno)
        rows.append((lineno, (tokens[0], tokens[1], tokens[2])))
    if not rows:
        raise LotError("empty input")

    names = set()
    for _, (i, t, _l) in rows:
        names.update((i, t))
    seen: dict[frozenset, int] = {}
    parent = {v: v for v in names}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for lineno, (i, t, lab) in rows:
        key = frozenset((i, t))
        if key in seen:
            raise LotError(f"duplicate edge {i} {t} (first seen on line {seen[key]})", lineno)
        seen[key] = lineno
        if i == t:
            raise LotError(f"edge {i} {t} is a loop", lineno)
        if lab not in names:
            raise LotError(f"label {lab!r} is not a vertex", lineno)
        ri, rt = find(i), find(t)
        if ri == rt:
            raise LotError(f"edge {i} {t} closes a cycle", lineno)
        parent[ri] = rt
    roots = {find(x) for x in names}
    if len(roots) != 1:
        raise LotError(f"graph is not connected ({len(roots)} components)", rows[-1][0])
    return Lot.from_triples(t for _, t in rows)


def serialize(lot: Lot) -> str:
    return "".join(f"{e.iota} {e.tau} {e.label}\n" for e in lot.edges)


# ---------------------------------------------------------------------------
# group presentation


def relator(e: Edge) -> Word:
    """The word iota(e) lambda(e) tau(e)^-1 lambda(e)^-1."""
    return (letter(e.iota), letter(e.label), letter(e.tau, -1), letter(e.label, -1))


def presentation(lot: Lot) -> Presentation:
    return Presentation(lot.vertices, tuple(relator(e) for e in lot.edges))


def abelianization(pres: Presentation) -> list[int]:
    """Invariant factors of the abelianised group; ``0`` marks a free factor.

    The trivial group gives ``[]``; a torsion factor ``Z/d`` appears as ``d``.
    """
    from sympy import Matrix
    from sympy.matrices.normalforms import smith_normal_form

    gens = list(pres.generators)
    col = {g: j for j, g in enumerate(gens)}
    rows = []
    for w in pres.relators:
        row = [0] * len(gens)
        for sym, sign in w:
            row[col[sym]] += sign
        rows.append(row)
    if not gens:
        return []
    diag: list[int] = []
    if rows:
        snf = smith_normal_form(Matrix(rows))
        diag = [abs(int(snf[i, i])) for i in range(min(snf.shape))]
    nonzero = [d for d in diag if d != 0]
    rank = len(gens) - len(nonzero)
    return [d for d in nonzero if d != 1] + [0] * rank


# ---------------------------------------------------------------------------
# metric


def distances_from(lot: Lot, source: str) -> dict[str, int]:
    adj = lot._adj
    dist = {source: 0}
    queue = deque([source])
    while queue:
        x = queue.popleft()
        for _, y in adj[x]:
            if y not in dist:
                dist[y] = dist[x] + 1
                queue.append(y)
    return dist


def diameter(lot: Lot) -> int:
    # double sweep is exact on trees
    far = max(distances_from(lot, lot.vertices[0]).items(), key=lambda kv: (kv[1], kv[0]))[0]
    return max(distances_from(lot, far).values())


def tree_path(lot: Lot, x: str, y: str) -> list[int]:
    """Edge indices on the unique tree path from x to y."""
    adj = lot._adj
    prev: dict[str, tuple[str, int] | None] = {x: None}
    queue = deque([x])
    while queue:
        z = queue.popleft()
        if z == y:
            break
        for i, w in adj[z]:
            if w not in prev:
                prev[w] = (z, i)
                queue.append(w)
    path = []
    z = y
    while prev[z] is not None:
        z, i = prev[z]
        path.append(i)
    return path[::-1]


# ---------------------------------------------------------------------------
# predicates and closures


@dataclass(frozen=True)
class Violation:
    clause: int
    edges: tuple[int, ...] = ()
    vertex: str | None = None

    def describe(self, lot: Lot) -> str:
        names = ", ".join(lot.edge_name(i) for i in self.edges)
        if self.clause == 1:
            return f"(1) label of {names} equals an endpoint"
        if self.clause == 2:
            return f"(2) edges {names} share a label and an endpoint role"
        return f"(3) leaf {self.vertex} is never a label"


def is_reduced(lot: Lot) -> tuple[bool, list[Violation]]:
    out: list[Violation] = []
    for i, e in enumerate(lot.edges):
        if e.label in (e.iota, e.tau):
            out.append(Violation(1, (i,)))
    for (i, e), (j, f) in combinations(enumerate(lot.edges), 2):
        if e.label == f.label and (e.iota == f.iota or e.tau == f.tau):
            out.append(Violation(2, (i, j)))
    labels = {e.label for e in lot.edges}
    for x in lot.vertices:
        if lot.degree(x) == 1 and x not in labels:
            out.append(Violation(3, vertex=x))
    return not out, out


def span(lot: Lot, seed: Iterable[str]) -> Subgraph:
    verts = set(seed)
    edges: set[int] = set()
    changed = True
    while changed:
        changed = False
        for i, e in enumerate(lot.edges):
            if i in edges or e.label not in verts:
                continue
            if e.iota in verts or e.tau in verts:
                edges.add(i)
                verts.update(e.endpoints())
                changed = True
    return Subgraph(frozenset(verts), frozenset(edges))


def spans_whole(lot: Lot, seed: Iterable[str]) -> bool:
    return span(lot, seed).is_whole(lot)


def is_admissible(lot: Lot, sub: Subgraph) -> bool:
    return all(lot.edges[i].label in sub.vertices for i in sub.edges)


def induced(lot: Lot, verts: Iterable[str]) -> Subgraph:
    vs = frozenset(verts)
    return Subgraph(vs, frozenset(i for i, e in enumerate(lot.edges) if e.iota in vs and e.tau in vs))


def convex_hull(lot: Lot, verts: Iterable[str]) -> set[str]:
    """Vertices of the least subtree containing ``verts`` (prune other leaves)."""
    keep = set(verts)
    deg = {x: len(n) for x, n in lot._adj.items()}
    alive = set(lot.vertices)
    stack = [x for x in alive if deg[x] <= 1 and x not in keep]
    while stack and len(alive) > 1:
        x = stack.pop()
        alive.discard(x)
        for _, y in lot._adj[x]:
            if y in alive:
                deg[y] -= 1
                if deg[y] == 1 and y not in keep:
                    stack.append(y)
    return alive


def admissible_closure(lot: Lot, verts: Iterable[str]) -> Subgraph:
    """Least connected admissible subgraph whose vertex set contains ``verts``."""
    vs = set(verts)
    while True:
        grown = convex_hull(lot, vs)
        sub = induced(lot, grown)
        grown.update(lot.edges[i].label for i in sub.edges)
        if grown == vs:
            return sub
        vs = grown


def is_minimal(lot: Lot) -> tuple[bool, Subgraph | None]:
    """Minimal means no proper connected admissible subgraph has two or more vertices."""
    for e in lot.edges:
        sub = admissible_closure(lot, e.endpoints())
        if not sub.is_whole(lot):
            return False, sub
    return True, None


def is_minimal_bruteforce(lot: Lot) -> bool:
    """Reference check over every proper vertex subset; exponential, for small trees only."""
    for k in range(2, lot.n):
        for verts in combinations(lot.vertices, k):
            sub = induced(lot, verts)
            if len(sub.edges) == k - 1 and is_admissible(lot, sub):
                return False
    return True


@dataclass
class SpanningReport:
    u: str
    v: str
    labels_u_or_v: bool
    spanned_by_two: bool
    pair: tuple[str, str] | None
    a: str | None
    spanned_by_auv: bool | None

    @property
    def case(self) -> int:
        return 1 if self.labels_u_or_v else 2


def spanning_classification(lot: Lot) -> SpanningReport:
    ok, _ = is_minimal(lot)
    if not ok:
        raise LotError("spanning classification needs a minimal LOT")
    if not is_reduced(lot)[0]:
        raise LotError("spanning classification needs a reduced LOT")
    if diameter(lot) != 3:
        raise LotError(f"spanning classification needs diameter 3, got {diameter(lot)}")
    u, v = lot.non_extremal()
    counts = lot.label_counts()
    pair = next((p for p in combinations(lot.vertices, 2) if spans_whole(lot, p)), None)
    doubles = [x for x in lot.vertices if counts[x] == 2 and x not in (u, v)]
    a = doubles[0] if len(doubles) == 1 else None
    auv = spans_whole(lot, (a, u, v)) if a is not None else None
    if auv is False:
        raise LotError(f"span of {{{a}, {u}, {v}}} is not the whole tree")
    return SpanningReport(u, v, counts[u] + counts[v] > 0, pair is not None, pair, a, auv)
