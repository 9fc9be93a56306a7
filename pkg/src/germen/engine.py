"""Incremental density landscape and clusterhead maintenance.

Every insertion runs three steps on the perturbed region only:

1. link the new node into the K-NN graph (``SimGraph.insert_node``),
2. recompute densities of the touched nodes and their 1-neighbourhoods,
3. propagate clusterhead changes with a worklist, densest nodes first.

A node with no denser 1-neighbour is its own clusterhead; otherwise it
inherits the union of the head sets of all its denser 1-neighbours.
"""

from __future__ import annotations

import copy
import logging
import math
from dataclasses import dataclass
from typing import Iterable

from .corpus import Document, SparseVector, Vocabulary
from .errors import DuplicateNodeError, InvariantError
from .graph import DEFAULT_K, LinkDelta, SimGraph

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class NodeState:
    density: float
    heads: frozenset[str]


@dataclass(frozen=True)
class InsertTrace:
    doc_id: str
    n_affected: int
    n_density_changes: int
    n_head_changes: int
    n_rounds: int

    def __str__(self) -> str:
        return (
            f"{self.doc_id} {self.n_affected} {self.n_density_changes} "
            f"{self.n_head_changes} {self.n_rounds}"
        )


def density(g: SimGraph, v: str) -> float:
    """Weighted closed-triangle mass around ``v``.

    Sum over linked pairs {u, w} of 1-neighbours of the mean of the three
    cosines of triangle (v, u, w). The sum is correctly rounded (fsum), so
    it depends only on the multiset of cosines: the three corners of one
    triangle get bit-equal densities and ties are real ties.
    """
    nbrs = sorted(g.neighborhood1(v))
    terms = []
    for i, u in enumerate(nbrs):
        s_vu = g.weight(v, u)
        for w in nbrs[i + 1:]:
            if g.has_edge(u, w) or g.has_edge(w, u):
                terms += (s_vu, g.weight(v, w), g.weight(u, w))
    return math.fsum(terms) / 3.0


class EngineState:
    """K-NN graph plus per-node density and clusterhead sets."""

    def __init__(self, k: int = DEFAULT_K):
        self.graph = SimGraph(k)
        self.densities: dict[str, float] = {}
        self.lcc: dict[str, frozenset[str]] = {}
        self.documents: dict[str, Document] = {}
        self.vocab: Vocabulary | None = None
        self.trace: list[InsertTrace] = []

    @property
    def k(self) -> int:
        return self.graph.k

    def __len__(self) -> int:
        return len(self.graph)

    def __contains__(self, node: str) -> bool:
        return node in self.graph

    def state(self, node: str) -> NodeState:
        return NodeState(self.densities[node], self.lcc[node])

    @property
    def states(self) -> dict[str, NodeState]:
        return {v: self.state(v) for v in sorted(self.densities)}

    def table(self) -> list[tuple[str, float, tuple[str, ...]]]:
        """(id, density, sorted heads) rows in id order."""
        return [(v, self.densities[v], tuple(sorted(self.lcc[v]))) for v in sorted(self.densities)]

    def snapshot(self) -> "EngineState":
        """Independent copy for readers; later inserts do not affect it."""
        return copy.deepcopy(self)

    def denser(self, u: str, v: str) -> bool:
        """Strict total order: higher density first, then smaller id."""
        du, dv = self.densities[u], self.densities[v]
        return du > dv or (du == dv and u < v)

    def _order_key(self, v: str) -> tuple[float, str]:
        return (-self.densities[v], v)

    def overhang_set(self, v: str) -> set[str]:
        """1-neighbours that ``v`` is denser than."""
        return {w for w in self.graph.neighborhood1(v) if self.denser(v, w)}

    def inherited_heads(self, v: str) -> frozenset[str]:
        heads: set[str] = set()
        for u in self.graph.neighborhood1(v):
            if self.denser(u, v):
                heads |= self.lcc[u]
        return frozenset(heads) if heads else frozenset((v,))

    def recompute_densities(self, delta: LinkDelta) -> set[str]:
        """Refresh densities over LL and its 1-neighbourhood; return the changed nodes."""
        region = set(delta.affected)
        for v in delta.affected:
            region |= self.graph.neighborhood1(v)
        changed = set()
        for v in region:
            d = density(self.graph, v)
            if d != self.densities.get(v, 0.0):
                changed.add(v)
            self.densities[v] = d
        return changed

    def update_clusterheads(self, seeds: Iterable[str]) -> tuple[int, int]:
        """Worklist propagation of head changes.

        Returns (number of head changes, number of rounds).
        """
        pending = set(seeds)
        for v in pending:
            self.lcc.setdefault(v, frozenset((v,)))
        n_nodes = len(self.graph)
        max_arity = max((len(h) for h in self.lcc.values()), default=1)
        bound = n_nodes * max(1, max_arity) + 1
        rounds = changes = 0
        while pending:
            rounds += 1
            if rounds > bound:
                raise InvariantError(
                    f"clusterhead propagation did not settle after {bound} rounds"
                )
            nxt: set[str] = set()
            for v in sorted(pending, key=self._order_key):
                heads = self.inherited_heads(v)
                if heads != self.lcc[v]:
                    self.lcc[v] = heads
                    changes += 1
                    nxt |= self.overhang_set(v)
            pending = nxt
        return changes, rounds

    def insert(self, doc_id: str, vec: SparseVector) -> InsertTrace:
        if doc_id in self.graph:
            raise DuplicateNodeError(doc_id)
        delta = self.graph.insert_node(doc_id, vec)
        self.densities[doc_id] = 0.0
        self.lcc[doc_id] = frozenset((doc_id,))
        changed = self.recompute_densities(delta)
        # a density change can flip the order against a neighbour outside LL
        seeds = set(delta.affected) | changed
        for v in changed:
            seeds |= self.graph.neighborhood1(v)
        n_changes, rounds = self.update_clusterheads(seeds)
        tr = InsertTrace(doc_id, len(delta.affected), len(changed), n_changes, rounds)
        self.trace.append(tr)
        log.debug("inserted %s", tr)
        return tr

    def insert_document(self, doc: Document, vec: SparseVector) -> InsertTrace:
        tr = self.insert(doc.doc_id, vec)
        self.documents[doc.doc_id] = doc
        return tr

    def check_invariants(self) -> None:
        """Raise InvariantError if any node's heads disagree with the inheritance rule."""
        for v in self.graph.nodes:
            if not self.lcc.get(v):
                raise InvariantError(f"node {v!r} has no clusterhead")
            expect = self.inherited_heads(v)
            if expect != self.lcc[v]:
                raise InvariantError(
                    f"node {v!r}: heads {sorted(self.lcc[v])} but rule gives {sorted(expect)}"
                )
            for h in self.lcc[v]:
                if self.lcc.get(h) != frozenset((h,)):
                    raise InvariantError(f"head {h!r} of {v!r} is not its own clusterhead")
