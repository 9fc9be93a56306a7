"""Document records, vocabulary filtering and unit-norm binary vectors.

Corpus files hold one record per line::

    doc_id<TAB>period<TAB>kw1;kw2;...;kwn

Blank lines and lines starting with ``#`` are skipped.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import InputError

# doc ids end up inside the state file, where these characters are separators
_FORBIDDEN_ID_CHARS = ("\t", ",", ";", "\n", "\r")

DEFAULT_MIN_DF = 2
DEFAULT_MAX_DF = 0.5


@dataclass(frozen=True)
class Document:
    doc_id: str
    period: str
    keywords: frozenset[str]
    line: int = 0
    usable: bool = True


@dataclass(frozen=True)
class Diagnostic:
    line: int
    message: str

    def __str__(self) -> str:
        return f"line {self.line}: {self.message}"


@dataclass
class ParseResult:
    documents: list[Document] = field(default_factory=list)
    diagnostics: list[Diagnostic] = field(default_factory=list)

    @property
    def usable(self) -> list[Document]:
        return [d for d in self.documents if d.usable]


@dataclass(frozen=True)
class Vocabulary:
    terms: tuple[str, ...]
    doc_freq: tuple[int, ...]
    min_df: int = DEFAULT_MIN_DF
    max_df: float = DEFAULT_MAX_DF

    def __post_init__(self):
        object.__setattr__(self, "_index", {t: i for i, t in enumerate(self.terms)})

    def __len__(self) -> int:
        return len(self.terms)

    def __contains__(self, term: str) -> bool:
        return term in self._index

    def index(self, term: str) -> int:
        return self._index[term]

    def retained(self, keywords: Iterable[str]) -> list[str]:
        return sorted(k for k in keywords if k in self._index)


@dataclass(frozen=True)
class SparseVector:
    """Sorted term indices with strictly positive weights."""

    indices: tuple[int, ...]
    weights: tuple[float, ...]

    def __len__(self) -> int:
        return len(self.indices)

    def norm(self) -> float:
        return math.sqrt(sum(w * w for w in self.weights))

    def as_dict(self) -> dict[int, float]:
        return dict(zip(self.indices, self.weights))


def parse_line(text: str, lineno: int) -> Document | None:
    """Parse one record. Returns None for comments and blank lines."""
    stripped = text.rstrip("\r\n")
    if not stripped.strip() or stripped.lstrip().startswith("#"):
        return None
    parts = stripped.split("\t")
    if len(parts) != 3:
        raise InputError(f"line {lineno}: expected 3 tab-separated fields, got {len(parts)}")
    doc_id, period, kw_field = (p.strip() for p in parts)
    if not doc_id:
        raise InputError(f"line {lineno}: empty doc_id")
    if any(c in doc_id for c in _FORBIDDEN_ID_CHARS):
        raise InputError(f"line {lineno}: doc_id {doc_id!r} contains a reserved character (, ; TAB)")
    if not period or "\t" in period:
        raise InputError(f"line {lineno}: empty period label")
    keywords = frozenset(k.strip() for k in kw_field.split(";") if k.strip())
    return Document(doc_id, period, keywords, line=lineno, usable=bool(keywords))


def parse_corpus(lines: Iterable[str]) -> ParseResult:
    """Parse a record stream in order.

    Malformed lines become diagnostics and are skipped. A repeated doc_id
    is a hard error naming both lines. Records with no keywords are kept
    but flagged unusable.
    """
    result = ParseResult()
    seen: dict[str, int] = {}
    for lineno, text in enumerate(lines, start=1):
        try:
            doc = parse_line(text, lineno)
        except InputError as exc:
            result.diagnostics.append(Diagnostic(lineno, str(exc).split(": ", 1)[-1]))
            continue
        if doc is None:
            continue
        if doc.doc_id in seen:
            raise InputError(
                f"duplicate doc_id {doc.doc_id!r} on line {lineno} "
                f"(first seen on line {seen[doc.doc_id]})"
            )
        seen[doc.doc_id] = lineno
        if not doc.usable:
            result.diagnostics.append(Diagnostic(lineno, f"document {doc.doc_id!r} has no keywords"))
        result.documents.append(doc)
    return result


def read_corpus(path) -> ParseResult:
    with open(path, encoding="utf-8") as fh:
        return parse_corpus(fh)


def build_vocabulary(
    docs: Sequence[Document], min_df: int = DEFAULT_MIN_DF, max_df: float = DEFAULT_MAX_DF
) -> Vocabulary:
    """Keep terms with ``df >= min_df`` and ``df / N <= max_df``."""
    if min_df < 1:
        raise ValueError("min_df must be >= 1")
    if not 0 < max_df <= 1:
        raise ValueError("max_df must be in (0, 1]")
    df = Counter()
    for doc in docs:
        df.update(doc.keywords)
    n = len(docs)
    terms = sorted(t for t, c in df.items() if c >= min_df and c / n <= max_df)
    if not terms:
        raise InputError(
            f"empty vocabulary with min_df={min_df}, max_df={max_df} over {n} documents; "
            "relax the thresholds"
        )
    return Vocabulary(tuple(terms), tuple(df[t] for t in terms), min_df, max_df)


def vectorize(doc: Document | Iterable[str], vocab: Vocabulary) -> SparseVector:
    """Binary incidence over retained terms, scaled to unit length."""
    keywords = doc.keywords if isinstance(doc, Document) else doc
    idx = sorted(vocab.index(k) for k in keywords if k in vocab)
    if not idx:
        name = doc.doc_id if isinstance(doc, Document) else "document"
        raise InputError(f"{name} has no keyword in the vocabulary (unusable document)")
    w = 1.0 / math.sqrt(len(idx))
    return SparseVector(tuple(idx), (w,) * len(idx))
