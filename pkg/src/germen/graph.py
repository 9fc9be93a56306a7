"""Incremental directed K-nearest-neighbour graph over unit-norm sparse vectors.

Each node keeps at most ``k`` out-edges to its most similar predecessors or
successors, ranked by descending cosine with ties going to the smaller id.
Because the ranking key never involves insertion rank, the graph reached
after any insertion order is the same as the all-pairs K-NN graph.
"""

from __future__ import annotations

from bisect import insort
from dataclasses import dataclass, field
from typing import Iterator

import numpy as np

from . import kernels
from .corpus import SparseVector
from .errors import DuplicateNodeError, InputError, UnknownNodeError

DEFAULT_K = 3


def cosine(a: SparseVector, b: SparseVector) -> float:
    """Dot product of two unit vectors, summed in ascending term order."""
    acc = 0.0
    i = j = 0
    ai, bi = a.indices, b.indices
    while i < len(ai) and j < len(bi):
        if ai[i] == bi[j]:
            acc += a.weights[i] * b.weights[j]
            i += 1
            j += 1
        elif ai[i] < bi[j]:
            i += 1
        else:
            j += 1
    return acc


def _rank_key(edge: tuple[str, float]) -> tuple[float, str]:
    return (-edge[1], edge[0])


@dataclass
class LinkDelta:
    new_node: str
    affected: set[str] = field(default_factory=set)
    created: list[tuple[str, str, float]] = field(default_factory=list)
    removed: list[tuple[str, str, float]] = field(default_factory=list)


class _VectorStore:
    """Append-only CSR matrix of node vectors, grown by doubling."""

    def __init__(self):
        self.n = 0
        self.nnz = 0
        self.dim = 0
        self.indptr = np.zeros(16, dtype=np.int64)
        self.indices = np.zeros(64, dtype=np.int64)
        self.data = np.zeros(64, dtype=np.float64)

    def append(self, vec: SparseVector) -> None:
        m = len(vec)
        while self.n + 2 > self.indptr.shape[0]:
            self.indptr = np.resize(self.indptr, 2 * self.indptr.shape[0])
        while self.nnz + m > self.indices.shape[0]:
            self.indices = np.resize(self.indices, 2 * self.indices.shape[0])
            self.data = np.resize(self.data, 2 * self.data.shape[0])
        self.indices[self.nnz:self.nnz + m] = vec.indices
        self.data[self.nnz:self.nnz + m] = vec.weights
        self.nnz += m
        self.n += 1
        self.indptr[self.n] = self.nnz
        if m:
            self.dim = max(self.dim, vec.indices[-1] + 1)

    def dots(self, vec: SparseVector) -> np.ndarray:
        if self.n == 0:
            return np.zeros(0)
        dense = np.zeros(max(self.dim, (vec.indices[-1] + 1) if len(vec) else 0), dtype=np.float64)
        dense[list(vec.indices)] = vec.weights
        return kernels.row_dots(
            self.indptr[: self.n + 1], self.indices[: self.nnz], self.data[: self.nnz], dense
        )


class SimGraph:
    def __init__(self, k: int = DEFAULT_K):
        if k < 1:
            raise ValueError("k must be >= 1")
        self.k = k
        self.vectors: dict[str, SparseVector] = {}
        self._order: list[str] = []
        self._store = _VectorStore()
        self._out: dict[str, list[tuple[str, float]]] = {}
        self._out_w: dict[str, dict[str, float]] = {}
        self._in: dict[str, set[str]] = {}

    def __contains__(self, node: str) -> bool:
        return node in self.vectors

    def __len__(self) -> int:
        return len(self.vectors)

    @property
    def nodes(self) -> list[str]:
        return sorted(self.vectors)

    def _check(self, node: str) -> None:
        if node not in self.vectors:
            raise UnknownNodeError(node)

    def out_nbrs(self, node: str) -> list[tuple[str, float]]:
        self._check(node)
        return list(self._out[node])

    def in_nbrs(self, node: str) -> set[str]:
        self._check(node)
        return set(self._in[node])

    def has_edge(self, u: str, v: str) -> bool:
        return v in self._out_w.get(u, ())

    def weight(self, u: str, v: str) -> float:
        """Stored cosine of the link between u and v, in either direction."""
        w = self._out_w[u].get(v)
        if w is None:
            w = self._out_w[v].get(u)
        if w is None:
            raise InputError(f"no link between {u!r} and {v!r}")
        return w

    def edges(self) -> Iterator[tuple[str, str, float]]:
        for u in self.nodes:
            for v, w in self._out[u]:
                yield u, v, w

    def neighborhood1(self, node: str) -> set[str]:
        """Out- and in-neighbours together."""
        self._check(node)
        return self._out_w[node].keys() | self._in[node]

    def neighborhood2(self, node: str) -> set[str]:
        first = self.neighborhood1(node)
        second = set(first)
        for u in first:
            second |= self._out_w[u].keys() | self._in[u]
        second.discard(node)
        return second

    def similarities(self, vec: SparseVector) -> dict[str, float]:
        """Positive cosines between ``vec`` and every stored node."""
        sims = self._store.dots(vec)
        hits = np.flatnonzero(sims > 0.0)
        return {self._order[r]: float(sims[r]) for r in hits}

    def _add_vertex(self, node: str, vec: SparseVector) -> None:
        self.vectors[node] = vec
        self._order.append(node)
        self._store.append(vec)
        self._out[node] = []
        self._out_w[node] = {}
        self._in[node] = set()

    def _link(self, u: str, v: str, w: float) -> None:
        insort(self._out[u], (v, w), key=_rank_key)
        self._out_w[u][v] = w
        self._in[v].add(u)

    def _unlink_weakest(self, u: str) -> tuple[str, float]:
        v, w = self._out[u].pop()
        del self._out_w[u][v]
        self._in[v].discard(u)
        return v, w

    def insert_node(self, node: str, vec: SparseVector) -> LinkDelta:
        if node in self.vectors:
            raise DuplicateNodeError(node)
        sims = self.similarities(vec)
        delta = LinkDelta(node, {node})
        self._add_vertex(node, vec)

        for v, w in sorted(sims.items(), key=_rank_key)[: self.k]:
            self._link(node, v, w)
            delta.created.append((node, v, w))
            delta.affected.add(v)

        for u, w in sims.items():
            edges = self._out[u]
            if len(edges) >= self.k:
                if (-w, node) >= _rank_key(edges[-1]):
                    continue
                z, wz = self._unlink_weakest(u)
                delta.removed.append((u, z, wz))
                delta.affected.add(z)
            self._link(u, node, w)
            delta.created.append((u, node, w))
            delta.affected.add(u)
        return delta

    @classmethod
    def from_links(cls, k: int, vectors: dict[str, SparseVector], out_links: dict[str, list[str]]):
        """Rebuild a graph from stored adjacency, recomputing every weight."""
        g = cls(k)
        for node in sorted(vectors):
            g._add_vertex(node, vectors[node])
        for u in sorted(out_links):
            for v in out_links[u]:
                if u not in g or v not in g:
                    raise UnknownNodeError(v if u in g else u)
                w = cosine(vectors[u], vectors[v])
                if w <= 0.0:
                    raise InputError(f"stored link {u!r}->{v!r} has zero similarity")
                g._link(u, v, w)
            if len(g._out[u]) > k:
                raise InputError(f"node {u!r} has more than k={k} out-links")
        return g
