"""Exhaustive enumeration of small LOTs.

Trees come from Pruefer sequences on vertices ``v1..vn``; every edge is
oriented from the lower to the higher index.  Each LOT is isomorphic to
one of these (relabel along a topological order of the oriented tree),
so the stream covers every isomorphism class, and it has exactly
``n^(n-2) * n^(n-1)`` members before filtering.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from itertools import combinations, permutations, product
from typing import Callable, Iterator

from .lot import Edge, Lot, diameter, is_minimal, is_reduced, spans_whole
from .derived import INITIAL, TERMINAL, build

FILTERS = ("reduced", "minimal", "diameter=0", "diameter=1", "diameter=2", "diameter=3",
           "core-hypotheses", "I-disconnected", "T-disconnected", "not-2-spanned")

MAX_VERTICES = 7


@dataclass(frozen=True)
class EnumerationSpec:
    max_vertices: int
    filters: frozenset = field(default_factory=frozenset)
    dedupe: bool = False
    min_vertices: int = 1
    allow_large: bool = False

    def __post_init__(self):
        if self.max_vertices < 1:
            raise ValueError("max_vertices must be at least 1")
        if self.max_vertices > MAX_VERTICES and not self.allow_large:
            raise ValueError(f"max_vertices is capped at {MAX_VERTICES}")
        unknown = set(self.filters) - set(FILTERS)
        if unknown:
            raise ValueError(f"unknown filters: {sorted(unknown)}")
        object.__setattr__(self, "filters", frozenset(self.filters))


def names(n: int) -> list[str]:
    return [f"v{i}" for i in range(1, n + 1)]


def pruefer_trees(n: int) -> Iterator[list[tuple[int, int]]]:
    """All labelled trees on 0..n-1 as sorted (low, high) pairs."""
    if n == 1:
        yield []
        return
    if n == 2:
        yield [(0, 1)]
        return
    for seq in product(range(n), repeat=n - 2):
        degree = [1] * n
        for x in seq:
            degree[x] += 1
        leaves = [i for i in range(n) if degree[i] == 1]
        heapq.heapify(leaves)
        edges = []
        for x in seq:
            leaf = heapq.heappop(leaves)
            edges.append((min(leaf, x), max(leaf, x)))
            degree[x] -= 1
            if degree[x] == 1:
                heapq.heappush(leaves, x)
        a, b = heapq.heappop(leaves), heapq.heappop(leaves)
        edges.append((a, b))
        yield sorted(edges)


def _tree_diameter(n: int, edges) -> int:
    if n == 1:
        return 0
    adj = [[] for _ in range(n)]
    for a, b in edges:
        adj[a].append(b)
        adj[b].append(a)

    def far(s):
        dist = {s: 0}
        stack = [s]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y not in dist:
                    dist[y] = dist[x] + 1
                    stack.append(y)
        best = max(dist.values())
        return best, next(x for x in dist if dist[x] == best)

    _, x = far(0)
    d, _ = far(x)
    return d


def _wanted_diameter(filters) -> int | None:
    ds = [int(f.split("=")[1]) for f in filters if f.startswith("diameter=")]
    if len(set(ds)) > 1:
        return -1
    if "core-hypotheses" in filters:
        ds.append(3)
        if len(set(ds)) > 1:
            return -1
    return ds[0] if ds else None


def lot_filter(lot: Lot, filters) -> bool:
    """True when ``lot`` passes every filter; cheap tests run first."""
    if "reduced" in filters and not is_reduced(lot)[0]:
        return False
    for f in filters:
        if f.startswith("diameter=") and diameter(lot) != int(f.split("=")[1]):
            return False
    if "I-disconnected" in filters and build(lot, INITIAL).n_components < 2:
        return False
    if "T-disconnected" in filters and build(lot, TERMINAL).n_components < 2:
        return False
    if "not-2-spanned" in filters:
        if any(spans_whole(lot, pair) for pair in combinations(lot.vertices, 2)):
            return False
    if "minimal" in filters and not is_minimal(lot)[0]:
        return False
    if "core-hypotheses" in filters:
        from .hnn import is_core
        return is_core(lot)
    return True


def _refined_classes(lot: Lot) -> list[list[str]]:
    """Vertex classes from colour refinement, in an isomorphism-invariant order.

    Any isomorphism preserves the colours, so canonical forms only need
    permutations within each class.
    """
    deg_in = {x: 0 for x in lot.vertices}
    deg_out = dict(deg_in)
    nlab = dict(deg_in)
    for e in lot.edges:
        deg_out[e.iota] += 1
        deg_in[e.tau] += 1
        nlab[e.label] += 1
    colour = {x: (deg_in[x], deg_out[x], nlab[x]) for x in lot.vertices}
    for _ in range(lot.n):
        sig = {x: [colour[x]] for x in lot.vertices}
        for e in lot.edges:
            ci, ct, cl = colour[e.iota], colour[e.tau], colour[e.label]
            sig[e.iota].append(("out", ct, cl))
            sig[e.tau].append(("in", ci, cl))
            sig[e.label].append(("lab", ci, ct))
        keyed = {x: (sig[x][0], tuple(sorted(sig[x][1:]))) for x in lot.vertices}
        ranks = {k: r for r, k in enumerate(sorted(set(keyed.values())))}
        new = {x: ranks[keyed[x]] for x in lot.vertices}
        stable = len(set(new.values())) == len(set(colour.values()))
        colour = new
        if stable:
            break
    classes: dict = {}
    for x in lot.vertices:
        classes.setdefault(colour[x], []).append(x)
    return [classes[k] for k in sorted(classes)]


def canonical_form(lot: Lot) -> tuple:
    """Least relabelled edge set over vertex bijections that respect colour classes."""
    classes = _refined_classes(lot)
    best = None
    for choice in product(*(permutations(c) for c in classes)):
        order = [x for block in choice for x in block]
        m = {x: k for k, x in enumerate(order)}
        key = tuple(sorted((m[e.iota], m[e.tau], m[e.label]) for e in lot.edges))
        if best is None or key < best:
            best = key
    return best


def canonical_form_bruteforce(lot: Lot) -> tuple:
    """Reference version minimising over all vertex bijections."""
    vs = lot.vertices
    best = None
    for perm in permutations(range(len(vs))):
        m = dict(zip(vs, perm))
        key = tuple(sorted((m[e.iota], m[e.tau], m[e.label]) for e in lot.edges))
        if best is None or key < best:
            best = key
    return best


def _labelings(n: int, tree, reduced: bool) -> Iterator[tuple[int, ...]]:
    """Label tuples in lexicographic order; under ``reduced`` only those that
    pass the three reducedness clauses can survive, and branches that cannot
    are cut early."""
    m = len(tree)
    if not reduced:
        yield from product(range(n), repeat=m)
        return
    deg = [0] * n
    for a, b in tree:
        deg[a] += 1
        deg[b] += 1
    leaves = {k for k in range(n) if deg[k] == 1}
    labels = [0] * m
    used_iota: set = set()
    used_tau: set = set()
    count = [0] * n

    def rec(j: int, missing: int):
        if missing > m - j:
            return
        if j == m:
            yield tuple(labels)
            return
        a, b = tree[j]
        for k in range(n):
            if k == a or k == b or (k, a) in used_iota or (k, b) in used_tau:
                continue
            labels[j] = k
            used_iota.add((k, a))
            used_tau.add((k, b))
            count[k] += 1
            yield from rec(j + 1, missing - (1 if k in leaves and count[k] == 1 else 0))
            count[k] -= 1
            used_iota.discard((k, a))
            used_tau.discard((k, b))

    yield from rec(0, len(leaves))


def enumerate_lots(spec: EnumerationSpec) -> Iterator[Lot]:
    filters = spec.filters
    want_d = _wanted_diameter(filters)
    reduced = "reduced" in filters or "core-hypotheses" in filters
    seen: set = set()
    for n in range(spec.min_vertices, spec.max_vertices + 1):
        vs = names(n)
        for tree in pruefer_trees(n):
            if want_d is not None and _tree_diameter(n, tree) != want_d:
                continue
            for labels in _labelings(n, tree, reduced):
                lot = Lot(tuple(vs), tuple(Edge(vs[a], vs[b], vs[k]) for (a, b), k in zip(tree, labels)))
                if filters and not lot_filter(lot, filters):
                    continue
                if spec.dedupe:
                    key = (n, canonical_form(lot))
                    if key in seen:
                        continue
                    seen.add(key)
                yield lot


def small_diameter_candidates(n: int) -> Iterator[Lot]:
    """LOTs of diameter at most 3 on ``n`` vertices, at least one per isomorphism class.

    Such trees are stars or double stars.  The centre is ``v1`` (and ``v2``
    for a double star, with the first ``k`` leaves at ``v1``); leaves at one
    centre are interchangeable, so leaf orientations are taken sorted.
    """
    vs = names(n)
    if n == 1:
        yield Lot(tuple(vs), ())
        return
    if n == 2:
        for k in range(2):
            yield Lot(tuple(vs), (Edge(vs[0], vs[1], vs[k]),))
        return
    shapes = [([(0, i) for i in range(1, n)], [(), _sorted_bits(n - 1)])]
    for k in range(1, (n - 2) // 2 + 1):
        ends = [(0, 1)] + [(0 if i < 2 + k else 1, i) for i in range(2, n)]
        shapes.append((ends, [(0, 1), _sorted_bits(k), _sorted_bits(n - 2 - k)]))
    for ends, parts in shapes:
        parts = [p for p in parts if p != ()]
        for flips in product(*parts):
            bits = tuple(b for f in flips for b in (f if isinstance(f, tuple) else (f,)))
            oriented = [(q, p) if bit else (p, q) for bit, (p, q) in zip(bits, ends)]
            for labels in product(range(n), repeat=n - 1):
                yield Lot(tuple(vs), tuple(Edge(vs[i], vs[t], vs[l]) for (i, t), l in zip(oriented, labels)))


def enumerate_small_diameter(max_vertices: int, dedupe: bool = True) -> Iterator[Lot]:
    """One LOT per isomorphism class of diameter at most 3, for 1..max_vertices vertices."""
    for n in range(1, max_vertices + 1):
        seen: set = set()
        for lot in small_diameter_candidates(n):
            if dedupe:
                key = canonical_form(lot)
                if key in seen:
                    continue
                seen.add(key)
            yield lot


def core_candidates(n: int) -> Iterator[Lot]:
    """Double stars on ``n`` vertices whose labels are the leaves, one leaf used twice.

    Every core-hypothesis LOT on ``n`` vertices is isomorphic to one of
    these: diameter 3 forces a double star, reducedness makes every leaf a
    label, and with ``n - 1`` edges that leaves a single spare label, which
    the hypotheses require to be a second use of an extremal vertex.
    Vertices are ``v1`` (first centre), ``v2`` (second centre) and leaves
    ``v3..vn``, the first ``k`` leaves hanging at ``v1``.  Candidates that
    are not reduced, or whose I- or T-graph does not split the centres into
    two components, are dropped before a :class:`Lot` is built.
    """
    vs = names(n)
    leaves = list(range(2, n))
    for k in range(1, (n - 2) // 2 + 1):
        ends = [(0, 1)] + [(0 if i < 2 + k else 1, i) for i in leaves]
        # leaves at one centre are interchangeable, so only sorted leaf orientations are needed
        for flips in product((0, 1), _sorted_bits(k), _sorted_bits(n - 2 - k)):
            bits = (flips[0],) + flips[1] + flips[2]
            oriented = [(q, p) if bit else (p, q) for bit, (p, q) in zip(bits, ends)]
            for labels in _leaf_surjections(ends, leaves):
                if _screen(n, oriented, labels):
                    yield Lot(tuple(vs), tuple(Edge(vs[i], vs[t], vs[l]) for (i, t), l in zip(oriented, labels)))


def _sorted_bits(k: int) -> list[tuple[int, ...]]:
    return [(0,) * (k - j) + (1,) * j for j in range(k + 1)]


def _leaf_surjections(ends, leaves) -> Iterator[tuple[int, ...]]:
    """Labels onto the leaves with exactly one leaf used twice, never on its own edge."""
    m = len(ends)
    for a in leaves:
        for j1, j2 in combinations(range(m), 2):
            if a in ends[j1] or a in ends[j2]:
                continue
            rest = [j for j in range(m) if j not in (j1, j2)]
            others = [l for l in leaves if l != a]
            for perm in permutations(others):
                if any(l in ends[j] for j, l in zip(rest, perm)):
                    continue
                labels = [a] * m
                for j, l in zip(rest, perm):
                    labels[j] = l
                yield tuple(labels)


def _screen(n: int, oriented, labels) -> bool:
    seen_i, seen_t = set(), set()
    for (i, t), l in zip(oriented, labels):
        if (l, i) in seen_i or (l, t) in seen_t:
            return False
        seen_i.add((l, i))
        seen_t.add((l, t))
    for side in (0, 1):
        parent = list(range(n))

        def find(x):
            while parent[x] != x:
                x = parent[x]
            return x

        comps = n
        for (i, t), l in zip(oriented, labels):
            a, b = find(i if side == 0 else l), find(l if side == 0 else t)
            if a != b:
                parent[a] = b
                comps -= 1
        if comps != 2 or find(0) == find(1):
            return False
    return True


def enumerate_core(n: int, dedupe: bool = True) -> Iterator[Lot]:
    """Core-hypothesis LOTs on exactly ``n`` vertices via :func:`core_candidates`."""
    from .hnn import is_core

    seen: set = set()
    for lot in core_candidates(n):
        if not is_core(lot):
            continue
        if dedupe:
            key = canonical_form(lot)
            if key in seen:
                continue
            seen.add(key)
        yield lot


def canonical_witness(limit: int = 12) -> Lot:
    """The first core-hypothesis LOT of :func:`enumerate_lots` order at the least ``n`` having one.

    :func:`enumerate_core` is complete up to isomorphism, so it serves as a
    cheap emptiness test for each smaller ``n``.
    """
    for n in range(1, limit + 1):
        if next(enumerate_core(n), None) is None:
            continue
        spec = EnumerationSpec(n, frozenset({"core-hypotheses"}), min_vertices=n, allow_large=True)
        return next(enumerate_lots(spec))
    raise LookupError(f"no core-hypothesis LOT with at most {limit} vertices")


def spine_candidate(n: int, rng) -> Lot:
    """A random double star on ``n >= 5`` vertices shaped like a core spine.

    Centres ``u``, ``v``; the leaf ``a`` hangs at a random centre.  Leaves
    ``b1..bP`` and ``c1..cQ`` (``P + Q = n - 3``) sit at random centres and
    label the chains a, b1, .., bP and a, c1, .., cQ, each chain ending on
    one of the two edges uv and a-centre.  The first b-edge starts at its
    leaf and the first c-edge ends at its leaf; other orientations are
    random.  The result is often, not always, a core LOT.
    """
    if n < 5:
        raise ValueError("spine candidates need at least 5 vertices")
    p = rng.randint(1, n - 4)
    bs = [f"b{i}" for i in range(1, p + 1)]
    cs = [f"c{i}" for i in range(1, n - 2 - p)]
    delta = [("u", "v"), ("a", rng.choice("uv"))]
    rng.shuffle(delta)
    edges = []
    for chain, (dx, dy), leaf_first in ((bs, delta[0], True), (cs, delta[1], False)):
        labels = ["a"] + chain
        for k, z in enumerate(chain):
            centre = rng.choice("uv")
            if k == 0:
                i, t = (z, centre) if leaf_first else (centre, z)
            else:
                i, t = (z, centre) if rng.random() < 0.5 else (centre, z)
            edges.append(Edge(i, t, labels[k]))
        i, t = (dx, dy) if rng.random() < 0.5 else (dy, dx)
        edges.append(Edge(i, t, labels[-1]))
    return Lot(tuple(["u", "v", "a"] + bs + cs), tuple(edges))


def sample_cores(n: int, count: int, rng, max_tries: int = 100000) -> list[Lot]:
    """Up to ``count`` pairwise non-isomorphic core LOTs on ``n`` vertices from :func:`spine_candidate`."""
    from .hnn import is_core

    out, seen = [], set()
    for _ in range(max_tries):
        if len(out) == count:
            break
        lot = spine_candidate(n, rng)
        if is_core(lot):
            key = canonical_form(lot)
            if key not in seen:
                seen.add(key)
                out.append(lot)
    return out


@dataclass
class CheckSummary:
    name: str
    passed: int = 0
    failed: int = 0
    skipped: int = 0
    counterexample: str | None = None
    message: str | None = None

    def to_dict(self) -> dict:
        return {"check": self.name, "passed": self.passed, "failed": self.failed, "skipped": self.skipped,
                "counterexample": self.counterexample, "message": self.message}


Check = Callable[[Lot], "tuple[bool, str] | bool | None"]


def _run_checks(lot: Lot, checks: dict) -> list[tuple[str, bool | None, str]]:
    out = []
    for name, check in checks.items():
        try:
            res = check(lot)
            if res is None:
                out.append((name, None, ""))
                continue
            ok, msg = res if isinstance(res, tuple) else (bool(res), "")
        except Exception as exc:  # a crash counts as a failure of this check
            ok, msg = False, f"{type(exc).__name__}: {exc}"
        out.append((name, ok, msg))
    return out


def _worker(args):
    from .suites import STANDARD_CHECKS

    batch, names_ = args
    checks = {n: STANDARD_CHECKS[n] for n in names_}
    return [(lot, _run_checks(lot, checks)) for lot in batch]


def _chunks(stream, size):
    # Lot objects rather than text: the line format cannot express a lone vertex
    chunk = []
    for lot in stream:
        chunk.append(lot)
        if len(chunk) == size:
            yield chunk
            chunk = []
    if chunk:
        yield chunk


def run_property_suite(spec: EnumerationSpec, checks: dict[str, Check] | list[str], lots=None,
                       workers: int = 1) -> list[CheckSummary]:
    """Apply ``checks`` to every LOT of the stream and tally the outcomes.

    ``checks`` is either a name -> function mapping or a list of names from
    :data:`lothnn.suites.STANDARD_CHECKS`; only the latter can run in worker
    processes.  ``lots`` overrides the stream built from ``spec``.
    """
    from .lot import serialize

    stream = enumerate_lots(spec) if lots is None else lots
    if not isinstance(checks, dict):
        from .suites import STANDARD_CHECKS

        names_ = list(checks)
        checks = {n: STANDARD_CHECKS[n] for n in names_}
    else:
        names_ = None
        workers = 1
    summaries = {name: CheckSummary(name) for name in checks}

    def tally(lot, results):
        for name, ok, msg in results:
            s = summaries[name]
            if ok is None:
                s.skipped += 1
            elif ok:
                s.passed += 1
            else:
                s.failed += 1
                if s.counterexample is None:
                    s.counterexample = serialize(lot)
                    s.message = msg

    if workers > 1:
        from multiprocessing import Pool

        with Pool(workers) as pool:
            for batch in pool.imap(_worker, ((c, names_) for c in _chunks(stream, 256))):
                for lot, results in batch:
                    tally(lot, results)
    else:
        for lot in stream:
            tally(lot, _run_checks(lot, checks))
    return list(summaries.values())
