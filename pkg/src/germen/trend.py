"""Cross-period class comparison: pair rules, degree cross-tab, trend events."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .fuzzy import DEFAULT_MIN_SUPPORT, FuzzyContext, Rule, evaluate, support
from .errors import InputError
from .stats import TypicalityMatrix

CONTINUE, SPLIT, MERGE, CROSS, DIE, BORN = "continue", "split", "merge", "cross", "die", "born"
KIND_ORDER = (CONTINUE, SPLIT, MERGE, CROSS, DIE, BORN)


@dataclass(frozen=True)
class ClassPair:
    a: str
    b: str
    support: float
    midova: float
    conf_ab: float
    conf_ba: float

    def rule(self) -> Rule:
        return Rule((self.a,), (self.b,), self.support, self.conf_ab, self.midova)


@dataclass
class TrendEvent:
    kind: str
    c1_classes: list[str]
    c2_classes: list[str]
    evidence: list[ClassPair] = field(default_factory=list)
    sentence: str = ""


def merge_typicality(t1: TypicalityMatrix, t2: TypicalityMatrix) -> TypicalityMatrix:
    """Stack two matrices column-wise over the union of their keyword rows."""
    overlap = set(t1.columns) & set(t2.columns)
    if overlap:
        raise InputError(f"class labels used in both periods: {sorted(overlap)[:5]}")
    rows = sorted(set(t1.rows) | set(t2.rows))
    pos = {r: i for i, r in enumerate(rows)}
    values = np.zeros((len(rows), len(t1.columns) + len(t2.columns)))
    for t, off in ((t1, 0), (t2, len(t1.columns))):
        if t.rows:
            idx = [pos[r] for r in t.rows]
            values[idx, off:off + len(t.columns)] = t.values
    return TypicalityMatrix(rows, t1.columns + t2.columns, values, t1.empty | t2.empty)


def pair_associations(
    typ: TypicalityMatrix,
    c1: Sequence[str],
    c2: Sequence[str],
    min_support: float = DEFAULT_MIN_SUPPORT,
) -> list[ClassPair]:
    """Every (C1, C2) class pair whose fuzzy itemset has positive midova.

    Objects are keywords, variables are class labels, values typicalities.
    """
    if set(c1) & set(c2):
        raise InputError("C1 and C2 class labels overlap; prefix them by period")
    ctx = FuzzyContext(typ.rows, typ.columns, typ.values)
    nonzero = typ.values > 0
    col = {c: j for j, c in enumerate(typ.columns)}
    pairs = []
    for a in sorted(c1):
        for b in sorted(c2):
            if not np.any(nonzero[:, col[a]] & nonzero[:, col[b]]):
                continue
            it = evaluate(ctx, (a, b))
            if it.midova <= 0.0 or it.support < min_support:
                continue
            sa, sb = support(ctx, (a,)), support(ctx, (b,))
            pairs.append(ClassPair(a, b, it.support, it.midova, it.support / sa, it.support / sb))
    return pairs


def _partners(pairs: Sequence[ClassPair]):
    p1, p2 = defaultdict(set), defaultdict(set)
    for p in pairs:
        p1[p.a].add(p.b)
        p2[p.b].add(p.a)
    return p1, p2


def degree_crosstab(pairs: Sequence[ClassPair], c1: Sequence[str] = (), c2: Sequence[str] = ()) -> dict[int, dict[int, int]]:
    """Tally C1 classes by (premises on the C1 side, partners on the C2 side).

    For a C1 class A with partners B1..Bm, the column is m and the row is
    the largest number of C1 partners among the Bi. A split of A into two
    lands in [1][2], a merge of two C1 classes adds 2 to [2][1].
    """
    p1, p2 = _partners(pairs)
    counts: dict[int, dict[int, int]] = defaultdict(lambda: defaultdict(int))
    for a, bs in p1.items():
        row = max(len(p2[b]) for b in bs)
        counts[row][len(bs)] += 1
    return {r: dict(cols) for r, cols in sorted(counts.items())}


def format_crosstab(counts: Mapping[int, Mapping[int, int]]) -> str:
    """Tab-separated cross-tab with marginal totals; empty cells stay blank."""
    n_rows = max(counts, default=0)
    n_cols = max((c for r in counts.values() for c in r), default=0)
    cols = range(1, n_cols + 1)
    lines = [
        "\t\tB (C2)" + "\t" * n_cols + "Total",
        "\t\t" + "".join(f"{c}\t" for c in cols),
        "\t# premises" + "\t" * (n_cols + 1),
    ]
    col_tot = [0] * n_cols
    for r in range(1, n_rows + 1):
        cells = [counts.get(r, {}).get(c, 0) for c in cols]
        col_tot = [a + b for a, b in zip(col_tot, cells)]
        head = "A (C1)" if r == 1 else ""
        body = "".join(f"{v if v else ''}\t" for v in cells)
        lines.append(f"{head}\t{r}\t{body}{sum(cells)}")
    lines.append("Total\t\t" + "".join(f"{v}\t" for v in col_tot) + str(sum(col_tot)))
    return "\n".join(lines) + "\n"


def classify_events(pairs: Sequence[ClassPair], c1: Sequence[str], c2: Sequence[str]) -> list[TrendEvent]:
    """One event per connected component of the pair graph, plus deaths and births."""
    p1, p2 = _partners(pairs)
    seen1, seen2 = set(), set()
    events = []
    for start in sorted(p1):
        if start in seen1:
            continue
        comp1, comp2 = {start}, set()
        frontier = [("a", start)]
        while frontier:
            side, x = frontier.pop()
            nbrs = p1[x] if side == "a" else p2[x]
            other, tag = (comp2, "b") if side == "a" else (comp1, "a")
            for y in nbrs:
                if y not in other:
                    other.add(y)
                    frontier.append((tag, y))
        seen1 |= comp1
        seen2 |= comp2
        if len(comp1) == 1:
            kind = CONTINUE if len(comp2) == 1 else SPLIT
        else:
            kind = MERGE if len(comp2) == 1 else CROSS
        evidence = sorted(
            (p for p in pairs if p.a in comp1),
            key=lambda p: (-p.midova, p.a, p.b),
        )
        events.append(TrendEvent(kind, sorted(comp1), sorted(comp2), evidence))
    events += [TrendEvent(DIE, [a], []) for a in sorted(c1) if a not in seen1]
    events += [TrendEvent(BORN, [], [b]) for b in sorted(c2) if b not in seen2]
    events.sort(key=_event_key)
    return events


def _event_key(ev: TrendEvent):
    top = -ev.evidence[0].midova if ev.evidence else 0.0
    return (KIND_ORDER.index(ev.kind), top, ev.c1_classes, ev.c2_classes)


def _quote_list(labels: Sequence[str]) -> str:
    q = [f'"{x}"' for x in labels]
    return q[0] if len(q) == 1 else ", ".join(q[:-1]) + " and " + q[-1]


def sentence(ev: TrendEvent, labels: Mapping[str, str], period2: str) -> str:
    a = _quote_list([labels.get(x, x) for x in ev.c1_classes]) if ev.c1_classes else ""
    b = _quote_list([labels.get(x, x) for x in ev.c2_classes]) if ev.c2_classes else ""
    if ev.kind == CONTINUE:
        return f"In {period2}, class {a} remained stable as {b}."
    if ev.kind == SPLIT:
        return f"In {period2}, class {a} split into {b}."
    if ev.kind == MERGE:
        return f"In {period2}, classes {a} merged into {b}."
    if ev.kind == CROSS:
        return f"In {period2}, classes {a} were redistributed across {b}."
    if ev.kind == DIE:
        return f"Class {a} died out (no successor in {period2})."
    return f"In {period2}, a new class {b} emerged."


def render_report(events: Sequence[TrendEvent], labels: Mapping[str, str], period2: str) -> str:
    """One sentence per event, each followed by its rule lines (descending midova)."""
    lines = []
    n = 0
    for ev in events:
        lines.append(ev.sentence or sentence(ev, labels, period2))
        for p in ev.evidence:
            n += 1
            lines.append(p.rule().format(n))
    return "\n".join(lines) + ("\n" if lines else "")


def rule_dump(pairs: Sequence[ClassPair]) -> str:
    ordered = sorted(pairs, key=lambda p: (-p.midova, p.a, p.b))
    return "".join(p.rule().format(i) + "\n" for i, p in enumerate(ordered, start=1))
