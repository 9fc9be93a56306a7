"""Incremental density-peak clustering of keyword document streams, with
fuzzy association rules for period-to-period trend reports."""

from .corpus import Document, SparseVector, Vocabulary, build_vocabulary, parse_corpus, vectorize
from .engine import EngineState, NodeState, density
from .errors import GermenError, InputError, InvariantError
from .graph import LinkDelta, SimGraph, cosine

__all__ = [
    "Document",
    "EngineState",
    "GermenError",
    "InputError",
    "InvariantError",
    "LinkDelta",
    "NodeState",
    "SimGraph",
    "SparseVector",
    "Vocabulary",
    "build_vocabulary",
    "cosine",
    "density",
    "parse_corpus",
    "vectorize",
]

__version__ = "0.1.0"
