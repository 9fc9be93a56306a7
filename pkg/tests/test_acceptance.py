"""Acceptance criteria 1-10. Each test prints one PASS/FAIL line."""

import contextlib
import io
import random
import time
from itertools import combinations

import numpy as np
import pytest
from mpmath import mp, mpf, sqrt

from germen.cli import RunConfig, cmd_cluster
from germen.corpus import Document, build_vocabulary, vectorize
from germen.engine import EngineState
from germen.fuzzy import FuzzyContext, Rule, derive_rules, evaluate, levelwise_extract, support
from germen.stats import extract_clusters, kernel_listing, participation_table
from germen.synthetic import blob_corpus, chain_corpus, to_tsv
from germen.trend import classify_events, degree_crosstab, pair_associations

import oracles
from conftest import ACCEPTANCE
from planted import CROSSTAB, EVENTS, planted


def verdict(n, title, ok, detail=""):
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'} {title}" + (f" ({detail})" if detail else "")
    print(line)
    ACCEPTANCE.append(line)
    assert ok, line


def ctx_of(m):
    return FuzzyContext([f"o{i}" for i in range(m.shape[0])], [f"v{j}" for j in range(m.shape[1])], m)


# -- 1 and 2: order independence and the batch oracle -------------------------


@pytest.fixture(scope="module")
def streams():
    """10 corpora x 20 insertion orders; returns (runs, engine seconds)."""
    runs = []
    elapsed = 0.0
    for c in range(10):
        docs = blob_corpus(60, 120, 3 + c % 3, seed=100 + c)
        vocab = build_vocabulary(docs, 2, 0.5)
        vecs = {d.doc_id: vectorize(d, vocab) for d in docs if vocab.retained(d.keywords)}
        docs = [d for d in docs if d.doc_id in vecs]
        rnd = random.Random(c)
        tables = []
        finals = []
        for _ in range(20):
            order = list(docs)
            rnd.shuffle(order)
            t0 = time.perf_counter()
            st = EngineState(3)
            for d in order:
                st.insert_document(d, vecs[d.doc_id])
            elapsed += time.perf_counter() - t0
            tables.append(st.table())
            finals.append(st)
        runs.append((vecs, tables, finals))
    return runs, elapsed


def test_criterion_1_order_independence(streams):
    runs, elapsed = streams
    identical = all(all(t == tables[0] for t in tables) for _, tables, _ in runs)
    verdict(1, "order independence, 10 corpora x 20 orders", identical and elapsed < 30.0,
            f"{elapsed:.2f}s")


def test_criterion_2_batch_oracle(streams):
    runs, _ = streams
    worst, heads_ok = 0.0, True
    for vecs, _, finals in runs:
        _, dens, heads = oracles.batch_engine({v: x.as_dict() for v, x in vecs.items()}, 3)
        for st in finals:
            worst = max(worst, max(abs(st.densities[v] - dens[v]) for v in vecs))
            heads_ok &= all(st.lcc[v] == heads[v] for v in vecs)
    verdict(2, "incremental equals batch recomputation", heads_ok and worst <= 1e-9,
            f"max density error {worst:.1e}")


# -- 3: determinism of a complete run ------------------------------------------


def test_criterion_3_determinism(tmp_path):
    corpus = tmp_path / "c.tsv"
    corpus.write_text(to_tsv(blob_corpus(60, 120, 4, seed=3)))
    outs = []
    for name in ("a", "b"):
        cfg = RunConfig(state_path=str(tmp_path / f"{name}.graph"), output_path=str(tmp_path / f"{name}.txt"))
        with contextlib.redirect_stdout(io.StringIO()):
            cmd_cluster(cfg, str(corpus))
        outs.append(((tmp_path / f"{name}.graph").read_bytes(), (tmp_path / f"{name}.txt").read_bytes()))
    verdict(3, "byte-identical state files and reports", outs[0] == outs[1])


# -- 4: K sanity on a chained corpus -------------------------------------------


def test_criterion_4_k_monotonicity():
    docs = chain_corpus(40)
    vocab = build_vocabulary(docs, 1, 1.0)
    counts = {}
    for k in (1, 3, 4):
        st = EngineState(k)
        for d in docs:
            st.insert_document(d, vectorize(d, vocab))
        counts[k] = len(extract_clusters(st).clusters)
    verdict(4, "clusters(K=1) >= clusters(K=3) >= clusters(K=4)", counts[1] >= counts[3] >= counts[4],
            f"{counts[1]} / {counts[3]} / {counts[4]}")


# -- 5, 6, 7: fuzzy rule mining -------------------------------------------------


def test_criterion_5_crisp_reduction():
    rng = np.random.default_rng(5)
    ok = True
    for _ in range(50):
        m = (rng.random((int(rng.integers(2, 11)), int(rng.integers(2, 9)))) < 0.55).astype(float)
        c = ctx_of(m)
        for r in (1, 2, 3):
            for cols in combinations(range(m.shape[1]), r):
                ok &= support(c, [c.variables[j] for j in cols]) == oracles.crisp_support(m, cols)
        got = levelwise_extract(c, 3, 1.0, 0.0)
        want = oracles.levelwise(m, c.variables, 3, 1.0, 0.0)
        ok &= {it.items: (it.support, it.midova) for it in got} == want
        for rule in derive_rules(got, 0.0):
            p = [c.variables.index(v) for v in rule.premise]
            q = p + [c.variables.index(v) for v in rule.conclusion]
            ok &= rule.confidence == oracles.crisp_support(m, q) / oracles.crisp_support(m, p)
    verdict(5, "crisp contexts reduce to classical counts, levelwise equals exhaustive", ok)


def test_criterion_6_frechet_soundness():
    rng = np.random.default_rng(6)
    crisp_ok = True
    for _ in range(200):
        m = (rng.random((int(rng.integers(1, 13)), int(rng.integers(2, 6)))) < rng.random()).astype(float)
        c = ctx_of(m)
        for r in range(2, min(4, m.shape[1]) + 1):
            for items in combinations(c.variables, r):
                it = evaluate(c, items)
                crisp_ok &= it.bounds[0] <= it.support <= it.bounds[1]
    fuzzy_ok = True
    for _ in range(200):
        m = rng.random((int(rng.integers(1, 16)), 2))
        c = ctx_of(m)
        fuzzy_ok &= support(c, ["v0", "v1"]) >= support(c, ["v0"]) + support(c, ["v1"]) - c.n - 1e-12
    verdict(6, "lo <= supp <= hi (crisp), pair lower bound (fuzzy)", crisp_ok and fuzzy_ok)


def test_criterion_7_midova_signs():
    rng = np.random.default_rng(7)
    dup = disj = det = True
    for _ in range(100):
        n = int(rng.integers(3, 20))
        # duplicated column with 0 < supp < n
        col = rng.random(n) * (rng.random(n) < 0.5)
        col[0], col[1] = 0.0, 0.7
        dup &= evaluate(ctx_of(np.stack([col, col], 1)), ["v0", "v1"]).midova > 0
        # disjoint supports
        a = (rng.random(n) < 0.5).astype(float)
        b = (1 - a) * (rng.random(n) < 0.5)
        disj &= evaluate(ctx_of(np.stack([a, b], 1)), ["v0", "v1"]).midova <= 0
        # one column all ones fixes supp(AB) = supp(B): hi == lo
        it = evaluate(ctx_of(np.stack([np.ones(n), a], 1)), ["v0", "v1"])
        det &= it.bounds[0] == it.bounds[1] and it.midova == 0.0
    verdict(7, "midova > 0 duplicated, <= 0 disjoint, == 0 determined", dup and disj and det)


# -- 8: planted trends ----------------------------------------------------------


def test_criterion_8_trend_recovery():
    typ, c1, c2 = planted()
    pairs = pair_associations(typ, c1, c2)
    events = {(e.kind, tuple(e.c1_classes), tuple(e.c2_classes)) for e in classify_events(pairs, c1, c2)}
    counts = degree_crosstab(pairs, c1, c2)
    verdict(8, "planted events recovered, cross-tab matches hand counts",
            events == EVENTS and counts == CROSSTAB, f"{len(events)} events")


# -- 9: golden formats ----------------------------------------------------------

TABLE1 = (
    "Kernel number (clusterhead) = 0: x/y/z\n"
    "\n"
    "N-arity / internal # / density / external # / Title\n"
    "!1 0 0.71099772 d1 x, y\n"
    "!1 1 0.71099772 d2 x, y, z\n"
    "!1 2 0.71099772 d3 x, z\n"
)

TABLE2 = (
    "% internal links / keyword # / keyword\n"
    "!185 1 x !\n"
    "!57 2 y !\n"
    "!57 3 z !\n"
)

RULE = "Rule(1) A03t1526->a34t2564 ; support : 6.65, MIDOVA : 3.29, confidence : 0.66"


def test_criterion_9_formats():
    # hand check of the golden numbers: one triangle with cosines 2/sqrt6, 1/2, 2/sqrt6
    mp.dps = 30
    dens = (mpf(1) / 2 + 4 / sqrt(6)) / 3
    rx, ry = 2 / sqrt(6) + mpf(1) / 2, 1 / sqrt(6)
    mean = (rx + 2 * ry) / 3
    numbers_ok = (mp.nstr(dens, 8) == "0.71099772"
                  and f"{float(100 * rx / mean):.0f}" == "185" and f"{float(100 * ry / mean):.0f}" == "57")

    docs = [Document("d1", "p", frozenset("xy")), Document("d2", "p", frozenset("xyz")),
            Document("d3", "p", frozenset("xz")), Document("d4", "p", frozenset("q"))]
    vocab = build_vocabulary(docs, 1, 1.0)
    st = EngineState(3)
    st.vocab = vocab
    for d in docs:
        st.insert_document(d, vectorize(d, vocab))
    snap = extract_clusters(st)
    ok = (numbers_ok
          and kernel_listing(st, "d1", snap) == TABLE1
          and participation_table(st, "d1", snap) == TABLE2
          and Rule(("A03t1526",), ("a34t2564",), 6.65, 0.66, 3.29).format(1) == RULE)
    verdict(9, "kernel listing, participation table and rule line match golden text", ok)


# -- 10: resume ----------------------------------------------------------------


def test_criterion_10_resume(tmp_path):
    docs = blob_corpus(30, 120, 3, seed=10, period="2003") + blob_corpus(30, 120, 3, seed=11, period="2004", prefix="e")
    corpus = tmp_path / "c.tsv"
    corpus.write_text(to_tsv(docs))
    split, whole = tmp_path / "split.graph", tmp_path / "whole.graph"
    with contextlib.redirect_stdout(io.StringIO()):
        cmd_cluster(RunConfig(state_path=str(split)), str(corpus), "2003")
        cmd_cluster(RunConfig(state_path=str(split)), str(corpus), "2004")
        cmd_cluster(RunConfig(state_path=str(whole)), str(corpus))
    verdict(10, "persist + resume equals one uninterrupted run", split.read_bytes() == whole.read_bytes())
