"""Synthetic keyword corpora for tests and benchmarks."""

from __future__ import annotations

import numpy as np

from .corpus import Document


def blob_corpus(
    n_docs: int = 60,
    n_terms: int = 120,
    n_blobs: int = 4,
    kw_range: tuple[int, int] = (3, 6),
    noise: float = 0.1,
    seed: int = 0,
    period: str = "p1",
    prefix: str = "d",
) -> list[Document]:
    """Documents drawn from ``n_blobs`` disjoint keyword pools.

    Each document samples its keywords from its blob's pool; with
    probability ``noise`` a keyword is swapped for one from the whole
    vocabulary.
    """
    rng = np.random.default_rng(seed)
    pools = np.array_split(np.arange(n_terms), n_blobs)
    width = len(str(n_docs - 1))
    docs = []
    for i in range(n_docs):
        pool = pools[i % n_blobs]
        m = int(rng.integers(kw_range[0], kw_range[1] + 1))
        picks = rng.choice(pool, size=min(m, len(pool)), replace=False)
        terms = set()
        for t in picks:
            if rng.random() < noise:
                t = rng.integers(n_terms)
            terms.add(f"t{int(t):03d}")
        docs.append(Document(f"{prefix}{i:0{width}d}", period, frozenset(terms)))
    return docs


def chain_corpus(
    n_docs: int = 40,
    window: int = 3,
    step: int = 1,
    tail: int = 1,
    seed: int = 0,
    period: str = "p1",
) -> list[Document]:
    """Documents sliding along a term sequence, so neighbours overlap by ``window - step`` terms.

    Each document also gets 0..``tail`` private terms. Without them every
    link has the same weight and the density landscape is flat.
    """
    rng = np.random.default_rng(seed)
    width = len(str(n_docs - 1))
    docs = []
    for i in range(n_docs):
        start = i * step
        terms = {f"c{j:04d}" for j in range(start, start + window)}
        terms |= {f"x{i:0{width}d}_{m}" for m in range(int(rng.integers(0, tail + 1)))}
        docs.append(Document(f"n{i:0{width}d}", period, frozenset(terms)))
    return docs


def to_tsv(docs) -> str:
    return "".join(f"{d.doc_id}\t{d.period}\t{';'.join(sorted(d.keywords))}\n" for d in docs)
