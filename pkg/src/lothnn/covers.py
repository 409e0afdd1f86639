"""Closed paths in the two-vertex graph L, their lifts, and derivatives.

A closed path in ``L`` is an alternating word in the vertex letters: a
positive letter runs from level 0 to level 1 and a negative letter back.
Between ``x^-1`` and ``y`` the path sits at level 0 (a *level-0 crossing*);
between ``x`` and ``y^-1`` it sits at level 1.

The covering graph hat-L places each level in two copies, one per side
(the component of I(G) resp. T(G) that a letter belongs to).  A path lifts
when every level-0 crossing stays within one I-component and every level-1
crossing within one T-component.  Otherwise the lift into tilde-L inserts
the connecting edge ``X`` (level 0) or ``Y`` (level 1).

The forward derivative rewrites a lifting path block by block: starting at
level 1 the path splits into blocks ``x^-1 y``, each block is expanded along
the forest geodesic from ``x`` to ``y`` in I(G), and every geodesic step is
swapped for the other side of the tree relation of its edge.  The backward
derivative does the same from level 0 with blocks ``x y^-1`` and T(G).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .derived import (INITIAL, TERMINAL, CycleData, DerivedGraph, MaximalForest, Selector, build,
                      default_selector, geodesic, maximal_forest, unique_cycle)
from .lot import Lot, LotError, relator
from .words import (Letter, Word, X, Y, cyclic_equal, format_word, free_reduce, inverse, is_alternating,
                    letter, word_key)

FORWARD = "forward"
BACKWARD = "backward"


class NotLiftable(LotError):
    """A derivative was requested for a path that does not lift to hat-L."""


# ---------------------------------------------------------------------------
# side labels


@dataclass(frozen=True)
class Cover:
    """Component labels and forests used by lifting and derivatives.

    ``side_I[x]`` / ``side_T[x]`` name the component of ``x``: by the
    non-extremal vertex it contains when the graph splits as {u-side,
    v-side}, otherwise by a plain component index.
    """

    lot: Lot
    I: DerivedGraph
    T: DerivedGraph
    side_I: dict
    side_T: dict
    forest_I: MaximalForest | None
    forest_T: MaximalForest | None
    u: str | None = None
    v: str | None = None

    @property
    def two_sided(self) -> bool:
        return self.u is not None


def side_labels(g: DerivedGraph, u: str | None, v: str | None) -> dict:
    if u is not None:
        cu, cv = g.component_of[u], g.component_of[v]
        if g.n_components == 2 and cu != cv:
            names = {cu: u, cv: v}
            return {x: names[g.component_of[x]] for x in g.nodes}
    return dict(g.component_of)


def make_cover(lot: Lot, selector_I: Selector = default_selector, selector_T: Selector = default_selector) -> Cover:
    """Cover data for a LOT whose derived graphs each split {u-side, v-side}."""
    inner = lot.non_extremal()
    if len(inner) != 2:
        raise LotError("hat-L needs exactly two non-extremal vertices")
    u, v = inner
    I, T = build(lot, INITIAL), build(lot, TERMINAL)
    for g in (I, T):
        if g.n_components != 2 or g.component_of[u] == g.component_of[v]:
            raise LotError(f"{g.kind}(G) does not split into a u-side and a v-side")
    return Cover(lot, I, T, side_labels(I, u, v), side_labels(T, u, v),
                 maximal_forest(lot, I, selector_I), maximal_forest(lot, T, selector_T), u, v)


# ---------------------------------------------------------------------------
# lifting


@dataclass(frozen=True)
class LiftResult:
    lifted: Word
    uses_X: bool
    uses_Y: bool

    @property
    def lifts(self) -> bool:
        return not (self.uses_X or self.uses_Y)


def check_loop(w: Word) -> None:
    if not is_alternating(w):
        raise LotError(f"not a closed path in L (signs must alternate): {format_word(w)}")


def level1_rotation(w: Word) -> Word:
    """Least rotation starting with a negative letter (i.e. at level 1)."""
    rots = [w[i:] + w[:i] for i in range(len(w)) if w[i].sign < 0]
    return min(rots, key=word_key) if rots else w


def level0_rotation(w: Word) -> Word:
    rots = [w[i:] + w[:i] for i in range(len(w)) if w[i].sign > 0]
    return min(rots, key=word_key) if rots else w


def _connector(side: dict, cov: Cover, x: str, y: str, special) -> list[Letter]:
    sx, sy = side[x], side[y]
    if sx == sy:
        return []
    if cov.two_sided:
        return [letter(special, 1 if sx == cov.u else -1)]
    # several components: record the crossing without a direction
    return [letter(special, 1 if str(sx) < str(sy) else -1)]


def lift(cov: Cover, w: Word, rotate: bool = True) -> LiftResult:
    """Lift to tilde-L, inserting X at level-0 and Y at level-1 side changes.

    The connector after the last letter is appended at the end, so with
    ``rotate=False`` letter positions of ``w`` are preserved in order.
    """
    check_loop(w)
    if not w:
        return LiftResult((), False, False)
    if rotate:
        w = level1_rotation(w)
    out: list[Letter] = []
    n = len(w)
    for k, l in enumerate(w):
        out.append(l)
        nxt = w[(k + 1) % n]
        if l.sign < 0:
            out.extend(_connector(cov.side_I, cov, l.symbol, nxt.symbol, X))
        else:
            out.extend(_connector(cov.side_T, cov, l.symbol, nxt.symbol, Y))
    lifted = tuple(out)
    return LiftResult(lifted, any(l.symbol == X for l in lifted), any(l.symbol == Y for l in lifted))


# ---------------------------------------------------------------------------
# derivatives


@dataclass(frozen=True)
class RewriteStep:
    block: int
    edge: int
    orientation: int  # +1: pair runs along the arc, -1: against it
    replaced: Word
    replacement: Word


@dataclass(frozen=True)
class Certificate:
    direction: str
    rotated_input: Word
    steps: tuple[RewriteStep, ...]

    def to_dict(self, lot: Lot) -> dict:
        return {
            "direction": self.direction,
            "rotated_input": format_word(self.rotated_input),
            "steps": [
                {
                    "block": s.block,
                    "edge": lot.edge_name(s.edge),
                    "orientation": s.orientation,
                    "replaced": format_word(s.replaced),
                    "replacement": format_word(s.replacement),
                }
                for s in self.steps
            ],
        }


def _rewrite_forward(lot: Lot, edge: int, x: str, y: str) -> tuple[int, Word, Word]:
    """x^-1 y for an I-arc of ``edge`` becomes the matching g h^-1."""
    e = lot.edges[edge]
    if (x, y) == (e.iota, e.label):
        return 1, (letter(x, -1), letter(y)), (letter(e.label), letter(e.tau, -1))
    if (x, y) == (e.label, e.iota):
        return -1, (letter(x, -1), letter(y)), (letter(e.tau), letter(e.label, -1))
    raise LotError(f"{lot.edge_name(edge)} does not join {x} and {y} in I(G)")


def _rewrite_backward(lot: Lot, edge: int, x: str, y: str) -> tuple[int, Word, Word]:
    """x y^-1 for a T-arc of ``edge`` becomes the matching g^-1 h."""
    e = lot.edges[edge]
    if (x, y) == (e.label, e.tau):
        return 1, (letter(x), letter(y, -1)), (letter(e.iota, -1), letter(e.label))
    if (x, y) == (e.tau, e.label):
        return -1, (letter(x), letter(y, -1)), (letter(e.label, -1), letter(e.iota))
    raise LotError(f"{lot.edge_name(edge)} does not join {x} and {y} in T(G)")


def _derivative(cov: Cover, w: Word, direction: str, edges=None, rotate=True) -> tuple[Word, Certificate]:
    lot = cov.lot
    check_loop(w)
    if direction == FORWARD:
        side, forest, rewrite, lead = cov.side_I, cov.forest_I, _rewrite_forward, -1
        rot = level1_rotation(w) if rotate else w
    else:
        side, forest, rewrite, lead = cov.side_T, cov.forest_T, _rewrite_backward, 1
        rot = level0_rotation(w) if rotate else w
    if rot and rot[0].sign != lead:
        raise LotError("pinned derivative input must start at the right level")
    if edges is not None and len(edges) * 2 != len(rot):
        raise LotError("one pinned edge per block is required")
    out: list[Letter] = []
    steps: list[RewriteStep] = []
    for b in range(0, len(rot), 2):
        x, y = rot[b].symbol, rot[b + 1].symbol
        if side[x] != side[y]:
            where = "level-0" if direction == FORWARD else "level-1"
            raise NotLiftable(f"{where} crossing {format_word(rot[b:b + 2])} changes side")
        if edges is not None:
            path = [(edges[b // 2], x, y)]
        else:
            path = [(s.edge, s.src, s.dst) for s in geodesic(forest, x, y)]
        for edge, p, q in path:
            orient, old, new = rewrite(lot, edge, p, q)
            steps.append(RewriteStep(b // 2, edge, orient, old, new))
            out.extend(new)
    return tuple(out), Certificate(direction, rot, tuple(steps))


def forward_derivative(cov: Cover, w: Word, edges=None) -> tuple[Word, Certificate]:
    """Forward derivative along the I-forest.

    ``edges`` pins the tree edge of every block instead of following forest
    geodesics; seeds use it so that each block is rewritten by its own cycle
    edge (``w`` is then taken in the given rotation).
    """
    return _derivative(cov, w, FORWARD, edges, rotate=edges is None)


def backward_derivative(cov: Cover, w: Word, edges=None) -> tuple[Word, Certificate]:
    return _derivative(cov, w, BACKWARD, edges, rotate=edges is None)


def _is_rearrangement(lot: Lot, edge: int, old: Word, new: Word) -> bool:
    rel = relator(lot.edges[edge])
    return cyclic_equal(old + inverse(new), rel, allow_inverse=True)


def verify_certificate(lot: Lot, w: Word, cert: Certificate, out: Word) -> tuple[bool, str]:
    n = len(w)
    if n != len(cert.rotated_input) or not any(w[i:] + w[:i] == cert.rotated_input for i in range(max(n, 1))):
        return False, "rotated input is not a rotation of the input"
    blocks: dict[int, list[RewriteStep]] = {}
    for k, s in enumerate(cert.steps):
        if not _is_rearrangement(lot, s.edge, s.replaced, s.replacement):
            return False, f"step {k}: not a relation of {lot.edge_name(s.edge)}"
        blocks.setdefault(s.block, []).append(s)
    rot = cert.rotated_input
    for b in range(0, len(rot), 2):
        got = free_reduce(l for s in blocks.get(b // 2, []) for l in s.replaced)
        if got != free_reduce(rot[b:b + 2]):
            return False, f"block {b // 2}: replaced pairs do not multiply to {format_word(rot[b:b + 2])}"
    if set(blocks) - set(range(len(rot) // 2)):
        return False, "step refers to a missing block"
    produced = tuple(l for s in cert.steps for l in s.replacement)
    if produced != tuple(out):
        return False, "replacements do not concatenate to the output"
    if [s.block for s in cert.steps] != sorted(s.block for s in cert.steps):
        return False, "steps out of block order"
    return True, ""


# ---------------------------------------------------------------------------
# seeds and sequences


def seed_word(cycle: CycleData, direction: str) -> tuple[Word, tuple[int, ...]]:
    """Seed path of a derived-graph cycle and the cycle edge behind each block.

    Blocks are ``z_k^-1 z_{k+1}`` for the I-cycle (forward) and
    ``z_k z_{k+1}^-1`` for the T-cycle (backward).
    """
    zs = cycle.vertices
    m = len(zs)
    out: list[Letter] = []
    for k in range(m):
        x, y = zs[k], zs[(k + 1) % m]
        out += [letter(x, -1), letter(y)] if direction == FORWARD else [letter(x), letter(y, -1)]
    return tuple(out), cycle.edges


def seed_R0(cov: Cover) -> tuple[Word, tuple[int, ...]]:
    return seed_word(unique_cycle(cov.T), BACKWARD)


def seed_S0(cov: Cover) -> tuple[Word, tuple[int, ...]]:
    return seed_word(unique_cycle(cov.I), FORWARD)


@dataclass
class SequenceItem:
    word: Word
    certificate: Certificate
    lift: LiftResult


@dataclass
class RelatorSequence:
    direction: str
    seed: Word
    seed_edges: tuple[int, ...]
    items: list[SequenceItem] = field(default_factory=list)

    @property
    def terminal_index(self) -> int:
        return len(self.items)

    def words(self) -> list[Word]:
        return [it.word for it in self.items]

    def to_dict(self, lot: Lot) -> dict:
        return {
            "direction": self.direction,
            "seed": format_word(self.seed),
            "terminal_index": self.terminal_index,
            "items": [
                {
                    "index": k + 1,
                    "word": format_word(it.word),
                    "lift": format_word(it.lift.lifted),
                    "uses_X": it.lift.uses_X,
                    "uses_Y": it.lift.uses_Y,
                    "certificate": it.certificate.to_dict(lot),
                }
                for k, it in enumerate(self.items)
            ],
        }


def iterate(cov: Cover, seed: Word, seed_edges, direction: str, limit: int) -> tuple[list[SequenceItem], bool]:
    """Derive from the seed until a term fails to lift or ``limit`` terms exist.

    Returns the items and whether the last one fails to lift.
    """
    deriv = forward_derivative if direction == FORWARD else backward_derivative
    items: list[SequenceItem] = []
    if limit <= 0:
        return items, False
    w, cert = deriv(cov, seed, edges=seed_edges)
    while True:
        lr = lift(cov, w)
        items.append(SequenceItem(w, cert, lr))
        if not lr.lifts:
            return items, True
        if len(items) >= limit:
            return items, False
        w, cert = deriv(cov, w)


def generate_sequence(cov: Cover, direction: str) -> RelatorSequence:
    """R-sequence (backward, from the T-cycle) or S-sequence (forward, from the I-cycle)."""
    seed, edges = seed_S0(cov) if direction == FORWARD else seed_R0(cov)
    limit = cov.lot.n
    items, done = iterate(cov, seed, edges, direction, limit)
    if not done:
        raise LotError(f"{direction} sequence did not terminate within {limit} terms")
    return RelatorSequence(direction, seed, edges, items)
