import random

import pytest

from germen.corpus import build_vocabulary, vectorize
from germen.engine import EngineState
from germen.synthetic import blob_corpus


def run_engine(docs, vocab, k=3, order=None):
    state = EngineState(k)
    state.vocab = vocab
    for d in order if order is not None else docs:
        state.insert_document(d, vectorize(d, vocab))
    return state


def shuffled(docs, seed):
    out = list(docs)
    random.Random(seed).shuffle(out)
    return out


@pytest.fixture
def blobs():
    docs = blob_corpus(n_docs=40, n_terms=80, n_blobs=4, seed=11)
    vocab = build_vocabulary(docs, 1, 0.5)
    docs = [d for d in docs if vocab.retained(d.keywords)]
    return docs, vocab


# one line per acceptance criterion, echoed in the terminal summary
ACCEPTANCE: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
