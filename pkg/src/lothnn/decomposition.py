"""Reduction of diameter <= 3 LOTs to a minimal core.

A non-minimal LOT ``G`` contains a proper admissible subtree ``G'`` with
at least two vertices and a vertex ``x`` outside it such that
``V(G') + {x}`` spans ``G``; at the group level ``G(G)`` is then a
one-relator product of ``G(G')`` and an infinite cyclic group.  Repeating
the step on ``G'`` itself ends at a minimal admissible core.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

from .derived import INITIAL, TERMINAL, build
from .lot import (Lot, LotError, Subgraph, diameter, induced, is_admissible, is_minimal, span,
                  spans_whole)

TRIVIAL = "trivial"
TWO_SPANNED = "two-spanned one-relator"
CORE = "core-hypothesis"
CHAIN = "one-relator-product chain"
LOCALLY_FREE = "locally-free-commutator"
LABELS = (TRIVIAL, TWO_SPANNED, CORE, CHAIN, LOCALLY_FREE)


def _triples(lot: Lot) -> list[list[str]]:
    return [[e.iota, e.tau, e.label] for e in lot.edges]


def sub_lot(lot: Lot, sub: Subgraph) -> Lot:
    """The admissible subtree ``sub`` as a LOT in its own right."""
    if not is_admissible(lot, sub):
        raise LotError("subgraph is not admissible")
    return Lot(tuple(sub.vertices), tuple(lot.edges[i] for i in sorted(sub.edges)))


def admissible_subtrees(lot: Lot, size: int) -> list[Subgraph]:
    """Admissible subtrees with exactly ``size`` vertices, in vertex-name order."""
    out = []
    for verts in combinations(lot.vertices, size):
        sub = induced(lot, verts)
        if len(sub.edges) == size - 1 and is_admissible(lot, sub):
            out.append(sub)
    return out


def decompose_step(lot: Lot) -> tuple[Subgraph, str]:
    """A proper admissible subtree Γ' and a vertex x with span(V(Γ') + {x}) = Γ.

    The search takes the largest Γ' that works and, among equal sizes,
    the first one in vertex-name order and then the first x by name.
    """
    if diameter(lot) > 3:
        raise LotError(f"decomposition needs diameter at most 3, got {diameter(lot)}")
    found_any = False
    for size in range(lot.n - 1, 1, -1):
        for sub in admissible_subtrees(lot, size):
            found_any = True
            for x in lot.vertices:
                if x not in sub.vertices and spans_whole(lot, sub.vertices | {x}):
                    return sub, x
    if not found_any:
        raise LotError("LOT is minimal: no proper admissible subtree with two or more vertices")
    raise LotError("no admissible subtree plus one vertex spans the LOT")


@dataclass(frozen=True)
class ChainStep:
    """Γ_next is spanned by the vertices of ``sub`` together with ``x``."""

    parent: Lot
    sub: Subgraph
    x: str
    replay_ok: bool

    def to_dict(self) -> dict:
        return {
            "lot": _triples(self.parent),
            "subtree_vertices": sorted(self.sub.vertices),
            "subtree_edges": [self.parent.edge_name(i) for i in sorted(self.sub.edges)],
            "x": self.x,
            "span_replay": self.replay_ok,
        }


@dataclass
class DecompositionReport:
    lot: Lot
    chain: list[ChainStep]
    core: Lot
    classification: str
    detail: str
    core_classification: str
    hnn: object | None = None
    flags: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(s.replay_ok for s in self.chain)

    def to_dict(self) -> dict:
        # chain listed from the core upwards
        steps = list(reversed(self.chain))
        return {
            "schema": 1,
            "lot": _triples(self.lot),
            "classification": self.classification,
            "detail": self.detail,
            "chain": [s.to_dict() for s in steps],
            "core": _triples(self.core),
            "core_classification": self.core_classification,
            "flags": self.flags,
            "hnn": self.hnn.to_dict() if self.hnn is not None else None,
        }


def _flags(lot: Lot) -> dict:
    pair = next((p for p in combinations(lot.vertices, 2) if spans_whole(lot, p)), None)
    return {
        "diameter": diameter(lot),
        "minimal": is_minimal(lot)[0],
        "spanning_pair": list(pair) if pair else None,
        "I_components": build(lot, INITIAL).n_components,
        "T_components": build(lot, TERMINAL).n_components,
    }


def _label(lot: Lot, flags: dict, chain_len: int) -> tuple[str, str]:
    from .hnn import is_core

    if flags["diameter"] <= 1:
        return TRIVIAL, "the group is infinite cyclic"
    if flags["spanning_pair"]:
        a, b = flags["spanning_pair"]
        return TWO_SPANNED, f"spanned by {a}, {b}: a torsion-free one-relator group"
    if is_core(lot):
        return CORE, "core hypotheses hold: HNN base built explicitly"
    if chain_len:
        return CHAIN, f"{chain_len} one-relator products with Z over a minimal core"
    if flags["I_components"] == 1 or flags["T_components"] == 1:
        which = "I" if flags["I_components"] == 1 else "T"
        return LOCALLY_FREE, f"{which}(G) is connected: the commutator subgroup is locally free"
    raise LotError("LOT falls outside every classification case")


def classify(lot: Lot) -> DecompositionReport:
    """Chain down to a minimal core and label the group-theoretic structure."""
    from .hnn import assemble, is_core

    d = diameter(lot)
    if d > 3:
        raise LotError(f"classification covers diameter at most 3; this LOT has diameter {d}")
    chain: list[ChainStep] = []
    current = lot
    while not is_minimal(current)[0]:
        sub, x = decompose_step(current)
        replay = span(current, sub.vertices | {x}).is_whole(current)
        chain.append(ChainStep(current, sub, x, replay))
        current = sub_lot(current, sub)
    flags = _flags(lot)
    label, detail = _label(lot, flags, len(chain))
    core_label = label if not chain else _label(current, _flags(current), 0)[0]
    hnn = assemble(current) if is_core(current) else None
    return DecompositionReport(lot, chain, current, label, detail, core_label, hnn, flags)
