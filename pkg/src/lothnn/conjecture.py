"""Candidate base relators for arbitrary LOTs from closed paths in I(G) and T(G).

Every simple cycle of I(G) seeds a forward-derivative family and every
simple cycle of T(G) a backward one.  Lifting is generalised to any number
of components: a word lifts when each level-0 crossing stays inside one
I-component and each level-1 crossing inside one T-component.  Geodesics
use one fixed maximal forest per derived graph.  This generalisation is
heuristic: nothing here shows that the families are finite or that they
present an HNN base.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .covers import BACKWARD, FORWARD, Cover, SequenceItem, side_labels, iterate, seed_word
from .derived import (INITIAL, TERMINAL, CycleData, DerivedGraph, all_simple_cycles, build, maximal_forest,
                      unique_cycle)
from .lot import Lot, LotError, serialize
from .words import format_word, is_alternating

LIFT_FAILURE = "lift-failure"
ITERATION_CAP = "iteration-cap"
SEED_ONLY = "seed-only"


def spanning_forest(g: DerivedGraph) -> DerivedGraph:
    """Arcs kept greedily in edge order while they join different trees."""
    parent = {x: x for x in g.nodes}

    def find(x):
        while parent[x] != x:
            x = parent[x]
        return x

    kept = []
    for a in g.arcs:
        ra, rb = find(a.src), find(a.dst)
        if ra != rb:
            parent[ra] = rb
            kept.append(a)
    return DerivedGraph(g.kind, g.nodes, tuple(kept), g.component_of)


def _forest(lot: Lot, g: DerivedGraph):
    # the standard forest whenever it is defined, so core inputs match the main pipeline
    if g.n_components == 2:
        try:
            unique_cycle(g)
            return maximal_forest(lot, g)
        except LotError:
            pass
    return spanning_forest(g)


def general_cover(lot: Lot) -> Cover:
    I, T = build(lot, INITIAL), build(lot, TERMINAL)
    inner = lot.non_extremal()
    u = v = None
    if len(inner) == 2:
        cu, cv = inner
        if all(g.n_components == 2 and g.component_of[cu] != g.component_of[cv] for g in (I, T)):
            u, v = cu, cv
    return Cover(lot, I, T, side_labels(I, u, v), side_labels(T, u, v), _forest(lot, I), _forest(lot, T), u, v)


@dataclass
class CycleFamily:
    graph: str
    cycle: CycleData
    direction: str
    seed: tuple
    items: list[SequenceItem]
    termination: str

    def words(self) -> list:
        return [it.word for it in self.items]

    def to_dict(self, lot: Lot) -> dict:
        return {
            "graph": self.graph,
            "cycle": list(self.cycle.vertices),
            "cycle_edges": [lot.edge_name(e) for e in self.cycle.edges],
            "directed": self.cycle.is_directed,
            "direction": self.direction,
            "seed": format_word(self.seed),
            "termination": self.termination,
            "iterations": [
                {
                    "index": k + 1,
                    "word": format_word(it.word),
                    "alternating": is_alternating(it.word),
                    "lift": format_word(it.lift.lifted),
                    "lifts": it.lift.lifts,
                    "certificate": it.certificate.to_dict(lot),
                }
                for k, it in enumerate(self.items)
            ],
        }


@dataclass
class ConjectureDataset:
    lot: Lot
    max_iterations: int
    families: list[CycleFamily] = field(default_factory=list)

    @property
    def capped(self) -> list[CycleFamily]:
        return [f for f in self.families if f.termination == ITERATION_CAP]

    def to_dict(self) -> dict:
        return {
            "schema": 1,
            "lot": serialize(self.lot).splitlines(),
            "max_iterations": self.max_iterations,
            "heuristic": True,
            "families": [f.to_dict(self.lot) for f in self.families],
            "iteration_cap_reached": len(self.capped),
        }


def explore(lot: Lot, max_iterations: int) -> ConjectureDataset:
    """Iterate derivatives from every simple cycle of I(G) and T(G)."""
    if max_iterations < 0:
        raise LotError("max_iterations must be non-negative")
    cov = general_cover(lot)
    data = ConjectureDataset(lot, max_iterations)
    for g, direction in ((cov.I, FORWARD), (cov.T, BACKWARD)):
        for cyc in all_simple_cycles(g):
            seed, edges = seed_word(cyc, direction)
            items, done = iterate(cov, seed, edges, direction, max_iterations)
            if max_iterations == 0:
                kind = SEED_ONLY
            else:
                kind = LIFT_FAILURE if done else ITERATION_CAP
            data.families.append(CycleFamily(g.kind, cyc, direction, seed, items, kind))
    return data
