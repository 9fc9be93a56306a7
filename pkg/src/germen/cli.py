"""Command-line front end.

    germen cluster --k 3 --state s.graph --period 2003 corpus.tsv
    germen stats --state s.graph
    germen compare --state1 s03.graph --state2 s34.graph --crosstab

Exit status: 0 on success, 1 on input errors, 2 on internal invariant
violations.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from dataclasses import dataclass

from . import persist
from .corpus import DEFAULT_MAX_DF, DEFAULT_MIN_DF, Document, build_vocabulary, read_corpus, vectorize
from .engine import EngineState
from .errors import InputError, InvariantError
from .fuzzy import DEFAULT_MIN_CONFIDENCE, DEFAULT_MIN_MIDOVA, DEFAULT_MIN_SUPPORT
from .graph import DEFAULT_K
from .stats import class_label, extract_clusters, full_report, typicality_matrix
from .trend import (
    classify_events,
    degree_crosstab,
    format_crosstab,
    merge_typicality,
    pair_associations,
    render_report,
    rule_dump,
    sentence,
)

log = logging.getLogger("germen")

C1_PREFIX, C2_PREFIX = "A:", "B:"


@dataclass
class RunConfig:
    k: int = DEFAULT_K
    min_df: int = DEFAULT_MIN_DF
    max_df: float = DEFAULT_MAX_DF
    min_support: float = DEFAULT_MIN_SUPPORT
    min_midova: float = DEFAULT_MIN_MIDOVA
    min_confidence: float = DEFAULT_MIN_CONFIDENCE
    state_path: str | None = None
    output_path: str | None = None

    def __post_init__(self):
        if self.k < 1:
            raise InputError("--k must be >= 1")
        for name in ("min_support", "min_midova", "min_confidence"):
            if getattr(self, name) < 0:
                raise InputError(f"--{name.replace('_', '-')} must be >= 0")


def _emit(text: str, output_path: str | None, out=None) -> None:
    (out or sys.stdout).write(text)
    if output_path:
        with open(output_path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _periods(state: EngineState) -> list[str]:
    return sorted({d.period for d in state.documents.values()})


def cmd_cluster(cfg: RunConfig, corpus_path: str, period: str | None = None, trace=None) -> EngineState:
    parsed = read_corpus(corpus_path)
    for diag in parsed.diagnostics:
        log.warning("%s: %s", corpus_path, diag)

    if cfg.state_path and os.path.exists(cfg.state_path):
        state = persist.load(cfg.state_path)
        if state.k != cfg.k:
            raise InputError(
                f"state {cfg.state_path} was built with K={state.k}, refusing to resume with K={cfg.k}"
            )
    else:
        state = EngineState(cfg.k)
    if state.vocab is None and parsed.usable:
        state.vocab = build_vocabulary(parsed.usable, cfg.min_df, cfg.max_df)

    wanted = set(period.split(",")) if period else None
    for doc in parsed.usable:
        if wanted is not None and doc.period not in wanted:
            continue
        kept = state.vocab.retained(doc.keywords)
        if not kept:
            log.warning("%s: line %d: document %r has no vocabulary keyword, skipped",
                        corpus_path, doc.line, doc.doc_id)
            continue
        doc = Document(doc.doc_id, doc.period, frozenset(kept), doc.line)
        tr = state.insert_document(doc, vectorize(doc, state.vocab))
        if trace is not None:
            print(tr, file=trace)

    state.check_invariants()
    if cfg.state_path:
        persist.save(state, cfg.state_path)
    snap = extract_clusters(state, ",".join(_periods(state)))
    _emit(full_report(state, snap), cfg.output_path)
    return state


def cmd_stats(cfg: RunConfig) -> None:
    state = persist.load(cfg.state_path)
    snap = extract_clusters(state, ",".join(_periods(state)))
    _emit(full_report(state, snap), cfg.output_path)


def compare_states(
    s1: EngineState, s2: EngineState, min_support: float = DEFAULT_MIN_SUPPORT
):
    """Snapshot -> typicality -> pairs -> events pipeline.

    Returns (pairs, events, labels, c1, c2).
    """
    if s1.vocab and s2.vocab and len(s1) and len(s2):
        if not set(s1.vocab.terms) & set(s2.vocab.terms):
            raise InputError(
                "the two states share no keyword; rebuild both from one corpus "
                "holding every period so they share a vocabulary"
            )
    snap1, snap2 = extract_clusters(s1), extract_clusters(s2)
    t1 = typicality_matrix(s1, snap1, C1_PREFIX)
    t2 = typicality_matrix(s2, snap2, C2_PREFIX)
    typ = merge_typicality(t1, t2)
    c1 = [c for c in t1.columns if c not in t1.empty]
    c2 = [c for c in t2.columns if c not in t2.empty]
    pairs = pair_associations(typ, c1, c2, min_support)
    events = classify_events(pairs, c1, c2)
    labels = {C1_PREFIX + h: class_label(s1, h, snap1) for h in snap1.clusters}
    labels.update({C2_PREFIX + h: class_label(s2, h, snap2) for h in snap2.clusters})
    return pairs, events, labels, c1, c2


def cmd_compare(cfg: RunConfig, state1: str, state2: str, crosstab: bool = False, rules_path: str | None = None) -> str:
    s1, s2 = persist.load(state1), persist.load(state2)
    pairs, events, labels, c1, c2 = compare_states(s1, s2, cfg.min_support)
    periods = _periods(s2)
    period2 = periods[-1] if periods else "the second period"
    for ev in events:
        ev.sentence = sentence(ev, labels, period2)
    text = render_report(events, labels, period2)
    if crosstab:
        text += "\n" + format_crosstab(degree_crosstab(pairs, c1, c2))
    if rules_path:
        kept = [p for p in pairs if p.conf_ab >= cfg.min_confidence]
        with open(rules_path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(rule_dump(kept))
    _emit(text, cfg.output_path)
    return text


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="germen", description="Incremental density clustering of keyword streams")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("cluster", help="insert a corpus (or some of its periods) into a state")
    c.add_argument("corpus")
    c.add_argument("--k", type=int, default=DEFAULT_K)
    c.add_argument("--state", help="state file, resumed if it exists and rewritten afterwards")
    c.add_argument("--period", help="only insert records of these periods (comma separated)")
    c.add_argument("--min-df", type=int, default=DEFAULT_MIN_DF)
    c.add_argument("--max-df", type=float, default=DEFAULT_MAX_DF)
    c.add_argument("--output", help="also write the report here")
    c.add_argument("--trace", action="store_true", help="per-insertion counters on stderr")

    s = sub.add_parser("stats", help="report on a saved state")
    s.add_argument("--state", required=True)
    s.add_argument("--output")

    m = sub.add_parser("compare", help="trend report between two saved states")
    m.add_argument("--state1", required=True)
    m.add_argument("--state2", required=True)
    m.add_argument("--crosstab", action="store_true")
    m.add_argument("--min-support", type=float, default=DEFAULT_MIN_SUPPORT)
    m.add_argument("--min-confidence", type=float, default=DEFAULT_MIN_CONFIDENCE)
    m.add_argument("--rules", help="write the rule dump here")
    m.add_argument("--output")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(message)s",
        stream=sys.stderr,
    )
    try:
        if args.command == "cluster":
            cfg = RunConfig(k=args.k, min_df=args.min_df, max_df=args.max_df,
                            state_path=args.state, output_path=args.output)
            cmd_cluster(cfg, args.corpus, args.period, sys.stderr if args.trace else None)
        elif args.command == "stats":
            cmd_stats(RunConfig(state_path=args.state, output_path=args.output))
        else:
            cfg = RunConfig(min_support=args.min_support, min_confidence=args.min_confidence,
                            output_path=args.output)
            cmd_compare(cfg, args.state1, args.state2, args.crosstab, args.rules)
    except InvariantError as exc:
        print(f"germen: internal error: {exc}", file=sys.stderr)
        return 2
    except (InputError, OSError, ValueError) as exc:
        print(f"germen: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
