"""Cluster extraction, taxonomy and keyword tables from an engine state."""

from __future__ import annotations

import logging
from collections import Counter, defaultdict
from dataclasses import dataclass, field

import numpy as np

from .engine import EngineState

log = logging.getLogger(__name__)

KERNEL, CURD, OUTLIER = "kernel", "curd", "outlier"


@dataclass
class ClusterSnapshot:
    period: str
    clusters: dict[str, list[str]]
    n_arity: dict[str, int]
    taxonomy: dict[str, str]

    def of_kind(self, kind: str) -> list[str]:
        """Heads of clusters of one kind, largest first then by id."""
        heads = [h for h, t in self.taxonomy.items() if t == kind]
        return sorted(heads, key=lambda h: (-len(self.clusters[h]), h))

    def distribution(self) -> dict[str, int]:
        """Document counts: single-head documents by the kind of their
        cluster, plus ``multi`` for documents with more than one head."""
        out = Counter({KERNEL: 0, CURD: 0, OUTLIER: 0, "multi": 0})
        head_of = {}
        for h, members in self.clusters.items():
            for m in members:
                head_of.setdefault(m, h)
        for v, a in self.n_arity.items():
            out["multi" if a > 1 else self.taxonomy[head_of[v]]] += 1
        return dict(out)


@dataclass
class TypicalityMatrix:
    rows: list[str]
    columns: list[str]
    values: np.ndarray
    empty: set[str] = field(default_factory=set)

    def column(self, label: str) -> np.ndarray:
        return self.values[:, self.columns.index(label)]


def extract_clusters(state: EngineState, period: str = "") -> ClusterSnapshot:
    clusters: dict[str, list[str]] = defaultdict(list)
    n_arity = {}
    for v in state.graph.nodes:
        heads = state.lcc[v]
        n_arity[v] = len(heads)
        for h in heads:
            clusters[h].append(v)
    taxonomy = {}
    for h, members in clusters.items():
        if len(members) == 1:
            taxonomy[h] = OUTLIER
        elif len(members) == 2 and all(
            state.graph.neighborhood1(m) <= set(members) for m in members
        ):
            taxonomy[h] = CURD
        else:
            taxonomy[h] = KERNEL
    return ClusterSnapshot(period, dict(sorted(clusters.items())), n_arity, taxonomy)


def narity_histogram(snapshot: ClusterSnapshot) -> dict[int, int]:
    return dict(sorted(Counter(snapshot.n_arity.values()).items()))


def internal_links(state: EngineState, members) -> list[tuple[str, str]]:
    """Undirected graph links with both ends inside ``members``, as sorted pairs."""
    inside = set(members)
    pairs = set()
    for u in inside:
        for v in state.graph.neighborhood1(u):
            if v in inside:
                pairs.add((u, v) if u < v else (v, u))
    return sorted(pairs)


def raw_participation(state: EngineState, members) -> dict[int, float]:
    """Term index -> summed product of the two endpoint weights over internal links."""
    raw: dict[int, float] = defaultdict(float)
    vecs = state.graph.vectors
    for u, w in internal_links(state, members):
        wv = vecs[w].as_dict()
        for t, x in zip(vecs[u].indices, vecs[u].weights):
            if t in wv:
                raw[t] += x * wv[t]
    return dict(raw)


def keyword_participation(state: EngineState, head: str, snapshot: ClusterSnapshot | None = None):
    """Ranked (keyword, percent) list; the mean over active keywords is 100."""
    snapshot = snapshot or extract_clusters(state)
    raw = raw_participation(state, snapshot.clusters[head])
    if not raw:
        log.warning("cluster %s has no internal links", head)
        return []
    mean = sum(raw.values()) / len(raw)
    terms = state.vocab.terms
    ranked = [(terms[t], 100.0 * r / mean) for t, r in raw.items()]
    ranked.sort(key=lambda p: (-p[1], p[0]))
    return ranked


def typicality_matrix(
    state: EngineState, snapshot: ClusterSnapshot, prefix: str = ""
) -> TypicalityMatrix:
    """Keyword x class matrix of participation rescaled to a column max of 1.

    Classes without internal links get an all-zero column and are listed in
    ``empty``.
    """
    heads = sorted(snapshot.clusters)
    columns = [prefix + h for h in heads]
    rows = list(state.vocab.terms) if state.vocab else []
    values = np.zeros((len(rows), len(heads)))
    empty = set()
    for j, h in enumerate(heads):
        raw = raw_participation(state, snapshot.clusters[h])
        if not raw:
            empty.add(columns[j])
            continue
        top = max(raw.values())
        for t, r in raw.items():
            values[t, j] = r / top
    return TypicalityMatrix(rows, columns, values, empty)


def class_label(state: EngineState, head: str, snapshot: ClusterSnapshot, n: int = 3) -> str:
    """Human label: top participation keywords joined by '/'."""
    ranked = keyword_participation(state, head, snapshot) if len(snapshot.clusters[head]) > 1 else []
    if not ranked:
        return head
    return "/".join(t for t, _ in ranked[:n])


# -- text tables --------------------------------------------------------------


def _sig(x: float) -> str:
    return f"{x:.8g}"


def kernel_listing(state: EngineState, head: str, snapshot: ClusterSnapshot) -> str:
    """Member table: arity bands ascending, descending density within a band."""
    rank = {v: i for i, v in enumerate(state.graph.nodes)}
    members = snapshot.clusters[head]
    lines = [
        f"Kernel number (clusterhead) = {rank[head]}: {class_label(state, head, snapshot)}",
        "",
        "N-arity / internal # / density / external # / Title",
    ]
    bands = defaultdict(list)
    for v in members:
        bands[snapshot.n_arity[v]].append(v)
    for i, a in enumerate(sorted(bands)):
        if i:
            lines += ["!", "!"]
        for v in sorted(bands[a], key=lambda m: (-state.densities[m], m)):
            doc = state.documents.get(v)
            title = ", ".join(sorted(doc.keywords)) if doc else ""
            lines.append(f"!{a} {rank[v]} {_sig(state.densities[v])} {v} {title}")
    return "\n".join(lines) + "\n"


def participation_table(state: EngineState, head: str, snapshot: ClusterSnapshot) -> str:
    lines = ["% internal links / keyword # / keyword"]
    for term, pct in keyword_participation(state, head, snapshot):
        lines.append(f"!{pct:.0f} {state.vocab.index(term)} {term} !")
    return "\n".join(lines) + "\n"


def summary(state: EngineState, snapshot: ClusterSnapshot) -> str:
    n = len(snapshot.n_arity)
    kinds = Counter(snapshot.taxonomy.values())
    lines = [
        f"documents\t{n}",
        f"K\t{state.k}",
        f"clusters\t{len(snapshot.clusters)}",
        f"kernels\t{kinds[KERNEL]}",
        f"curds\t{kinds[CURD]}",
        f"outliers\t{kinds[OUTLIER]}",
        "",
        "distribution\tdocuments\tpercent",
    ]
    for kind, c in snapshot.distribution().items():
        pct = 100.0 * c / n if n else 0.0
        lines.append(f"{kind}\t{c}\t{pct:.1f}")
    lines += ["", "N-arity\tdocuments"]
    for a, c in narity_histogram(snapshot).items():
        lines.append(f"{a}\t{c}")
    return "\n".join(lines) + "\n"


def full_report(state: EngineState, snapshot: ClusterSnapshot) -> str:
    parts = [summary(state, snapshot)]
    for h in snapshot.of_kind(KERNEL):
        parts.append(kernel_listing(state, h, snapshot))
        parts.append(participation_table(state, h, snapshot))
    return "\n".join(parts)
