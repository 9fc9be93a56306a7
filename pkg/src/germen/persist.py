"""Text persistence of an engine state.

Layout::

    GERMEN-GRAPH v1 K=<k>
    VOCAB<TAB>min_df=<n><TAB>max_df=<x><TAB>term;term;...
    id<TAB>density<TAB>head,head<TAB>id:weight;id:weight<TAB>period<TAB>kw;kw

Node lines are in lexicographic id order, weights and densities carry nine
decimals. On load, weights and densities are recomputed from the stored
keywords (so a resumed run continues with full precision) and checked
against the printed values.
"""

from __future__ import annotations

import os
import tempfile

from .corpus import Document, Vocabulary, vectorize
from .engine import EngineState, density
from .errors import InputError, InvariantError
from .graph import SimGraph

MAGIC = "GERMEN-GRAPH v1"


class StateFormatError(InputError):
    pass


def _fmt(x: float) -> str:
    return f"{x:.9f}"


def dumps(state: EngineState) -> str:
    vocab = state.vocab
    lines = [f"{MAGIC} K={state.k}"]
    if vocab is None:
        lines.append("VOCAB\tmin_df=0\tmax_df=0\t")
    else:
        lines.append(f"VOCAB\tmin_df={vocab.min_df}\tmax_df={vocab.max_df!r}\t{';'.join(vocab.terms)}")
    g = state.graph
    for v in g.nodes:
        doc = state.documents.get(v)
        period = doc.period if doc else ""
        kws = ";".join(vocab.terms[i] for i in g.vectors[v].indices) if vocab else ""
        heads = ",".join(sorted(state.lcc[v]))
        out = ";".join(f"{u}:{_fmt(w)}" for u, w in g.out_nbrs(v))
        lines.append(f"{v}\t{_fmt(state.densities[v])}\t{heads}\t{out}\t{period}\t{kws}")
    return "\n".join(lines) + "\n"


def loads(text: str) -> EngineState:
    lines = text.splitlines()
    if not lines or not lines[0].startswith(MAGIC + " K="):
        raise StateFormatError(f"not a state file (expected header {MAGIC!r})")
    try:
        k = int(lines[0][len(MAGIC) + 3:])
    except ValueError:
        raise StateFormatError(f"bad header {lines[0]!r}") from None
    if len(lines) < 2 or not lines[1].startswith("VOCAB\t"):
        raise StateFormatError("missing VOCAB line")
    parts = lines[1].split("\t")
    if len(parts) != 4:
        raise StateFormatError("malformed VOCAB line")
    min_df = int(parts[1].removeprefix("min_df="))
    max_df = float(parts[2].removeprefix("max_df="))
    terms = tuple(t for t in parts[3].split(";") if t)
    vocab = Vocabulary(terms, (0,) * len(terms), min_df, max_df) if terms else None

    docs: dict[str, Document] = {}
    printed: dict[str, tuple[str, frozenset[str], list[tuple[str, str]]]] = {}
    for lineno, line in enumerate(lines[2:], start=3):
        f = line.split("\t")
        if len(f) != 6:
            raise StateFormatError(f"line {lineno}: expected 6 fields, got {len(f)}")
        v, dens, heads, out, period, kws = f
        if vocab is None:
            raise StateFormatError(f"line {lineno}: node without vocabulary")
        edges = [tuple(e.rsplit(":", 1)) for e in out.split(";") if e]
        if any(len(e) != 2 for e in edges):
            raise StateFormatError(f"line {lineno}: malformed out-edge list")
        docs[v] = Document(v, period, frozenset(kws.split(";")) if kws else frozenset(), line=lineno)
        printed[v] = (dens, frozenset(heads.split(",")), edges)

    state = EngineState(k)
    state.vocab = vocab
    state.documents = docs
    if not docs:
        return state
    try:
        vectors = {v: vectorize(d, vocab) for v, d in docs.items()}
    except InputError as exc:
        raise StateFormatError(str(exc)) from None
    g = SimGraph.from_links(k, vectors, {v: [u for u, _ in p[2]] for v, p in printed.items()})
    state.graph = g
    for v, (dens, heads, edges) in printed.items():
        if len(edges) != len(g.out_nbrs(v)):
            raise StateFormatError(f"node {v!r}: out-link count mismatch")
        for (u, w_txt), (u2, w) in zip(edges, g.out_nbrs(v)):
            if u != u2 or _fmt(w) != w_txt:
                raise StateFormatError(f"node {v!r}: stored link {u}:{w_txt} disagrees with recomputation")
        d = density(g, v)
        if _fmt(d) != dens:
            raise StateFormatError(f"node {v!r}: stored density {dens} disagrees with recomputation {_fmt(d)}")
        state.densities[v] = d
        state.lcc[v] = heads
    try:
        state.check_invariants()
    except InvariantError as exc:
        raise StateFormatError(f"inconsistent clusterheads: {exc}") from None
    return state


def save(state: EngineState, path) -> None:
    """Write atomically: a crash never leaves a truncated state file."""
    path = os.fspath(path)
    fd, tmp = tempfile.mkstemp(dir=os.path.dirname(os.path.abspath(path)), suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(dumps(state))
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def load(path) -> EngineState:
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read())
