"""Fuzzy itemsets and association rules with min-fusion.

Support of an itemset is the sum over objects of the minimum of its
variables' values, which reduces to the classical count on 0/1 data.
Itemsets are scored by ``midova``: how far the support sits from the
midpoint of the interval its subsets leave feasible (Frechet bounds).
Positive means the variables attract each other, negative that they repel,
zero that the subsets already pin the support down.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Mapping, Sequence

import numpy as np

from . import kernels
from .errors import InputError

log = logging.getLogger(__name__)

DEFAULT_MIN_SUPPORT = 2.0
DEFAULT_MIN_MIDOVA = 0.0
DEFAULT_MIN_CONFIDENCE = 0.5
DEFAULT_MAX_LEVEL = 5


class FuzzyContext:
    """Objects x variables matrix with values in [0, 1]."""

    def __init__(self, objects: Sequence[str], variables: Sequence[str], values):
        values = np.asarray(values, dtype=np.float64)
        if values.shape != (len(objects), len(variables)):
            raise ValueError(
                f"values shape {values.shape} does not match "
                f"{len(objects)} objects x {len(variables)} variables"
            )
        if values.size and (values.min() < 0.0 or values.max() > 1.0):
            raise ValueError("fuzzy values must lie in [0, 1]")
        if len(set(variables)) != len(variables):
            raise ValueError("duplicate variable labels")
        self.objects = list(objects)
        self.variables = list(variables)
        self.values = np.ascontiguousarray(values)
        self._col = {v: j for j, v in enumerate(self.variables)}

    @property
    def n(self) -> int:
        return len(self.objects)

    def columns(self, items: Iterable[str]) -> list[int]:
        try:
            return [self._col[i] for i in items]
        except KeyError as exc:
            raise InputError(f"unknown variable {exc.args[0]!r}") from None

    def supports(self, itemsets: Sequence[Sequence[str]]) -> np.ndarray:
        """Supports of many equal-size itemsets at once."""
        if not itemsets:
            return np.zeros(0)
        cand = np.array([self.columns(s) for s in itemsets], dtype=np.int64)
        return kernels.itemset_supports(self.values, cand)


@dataclass(frozen=True)
class Itemset:
    items: tuple[str, ...]
    support: float
    bounds: tuple[float, float]
    midova: float


@dataclass(frozen=True)
class Rule:
    premise: tuple[str, ...]
    conclusion: tuple[str, ...]
    support: float
    confidence: float
    midova: float

    def format(self, number: int) -> str:
        return (
            f"Rule({number}) {','.join(self.premise)}->{','.join(self.conclusion)} ; "
            f"support : {self.support:.2f}, MIDOVA : {self.midova:.2f}, "
            f"confidence : {self.confidence:.2f}"
        )


def fuse(values: Iterable[float]) -> float:
    """Min t-norm; logical AND on 0/1 inputs."""
    values = list(values)
    if not values:
        raise ValueError("fuse() needs at least one value")
    return min(values)


def support(ctx: FuzzyContext, items: Iterable[str]) -> float:
    items = tuple(items)
    if not items:
        raise ValueError("support() needs a non-empty itemset")
    return float(ctx.supports([items])[0])


def frechet_bounds(items: Sequence[str], subset_support: Mapping[frozenset, float], n: float):
    """Feasible support interval of ``items`` given its (k-1)- and (k-2)-subsets.

    ``subset_support`` maps frozensets to supports; the empty set defaults to ``n``.
    """
    if len(items) < 2:
        raise ValueError("frechet_bounds needs at least two items")
    full = frozenset(items)

    def s(sub: frozenset) -> float:
        if not sub:
            return subset_support.get(sub, n)
        try:
            return subset_support[sub]
        except KeyError:
            raise InputError(f"missing support for subset {sorted(sub)}") from None

    drop1 = {i: s(full - {i}) for i in items}
    hi = min(drop1.values())
    lo = 0.0
    for i, j in combinations(items, 2):
        lo = max(lo, drop1[i] + drop1[j] - s(full - {i, j}))
    return lo, hi


def midova_from(supp: float, bounds: tuple[float, float]) -> float:
    lo, hi = bounds
    if hi == lo:
        return 0.0
    return supp - (lo + hi) / 2.0


def _subset_supports(ctx: FuzzyContext, items: Sequence[str]) -> dict[frozenset, float]:
    out = {}
    for r in (len(items) - 1, len(items) - 2):
        for sub in combinations(items, r):
            if sub:
                out[frozenset(sub)] = support(ctx, sub)
    return out


def evaluate(ctx: FuzzyContext, items: Sequence[str]) -> Itemset:
    """Support, Frechet bounds and midova of one itemset, from scratch."""
    items = tuple(sorted(items))
    supp = support(ctx, items)
    if len(items) == 1:
        return Itemset(items, supp, (0.0, float(ctx.n)), 0.0)
    bounds = frechet_bounds(items, _subset_supports(ctx, items), ctx.n)
    return Itemset(items, supp, bounds, midova_from(supp, bounds))


def midova(ctx: FuzzyContext, items: Sequence[str]) -> float:
    if len(tuple(items)) < 2:
        raise ValueError("midova needs at least two items")
    return evaluate(ctx, items).midova


def _sort_key(it: Itemset):
    return (-it.midova, -it.support, it.items)


def levelwise_extract(
    ctx: FuzzyContext,
    max_level: int = DEFAULT_MAX_LEVEL,
    min_support: float = DEFAULT_MIN_SUPPORT,
    min_midova: float = DEFAULT_MIN_MIDOVA,
) -> list[Itemset]:
    """Apriori-style search for itemsets passing support and midova thresholds.

    Level-k candidates join two level-(k-1) survivors sharing k-2 items and
    need every (k-1)-subset to have survived. A candidate of size >= 2
    survives when ``support >= min_support``, ``midova > min_midova`` and its
    Frechet interval is not degenerate.
    """
    if max_level < 1:
        raise ValueError("max_level must be >= 1")
    known: dict[frozenset, float] = {}
    singles = sorted(ctx.variables)
    sup1 = ctx.supports([(v,) for v in singles])
    level = []
    for v, s in zip(singles, sup1):
        known[frozenset((v,))] = float(s)
        if s >= min_support:
            level.append(Itemset((v,), float(s), (0.0, float(ctx.n)), 0.0))
    out = list(level)
    k = 1
    while level and k < max_level:
        k += 1
        alive = {it.items for it in level}
        cands = []
        for a, b in combinations(sorted(alive), 2):
            if a[:-1] != b[:-1]:
                continue
            c = a + (b[-1],)
            if all(sub in alive for sub in combinations(c, k - 1)):
                cands.append(c)
        if not cands:
            break
        sups = ctx.supports(cands)
        for c, s in zip(cands, sups):
            known[frozenset(c)] = float(s)
        level = []
        for c, s in zip(cands, sups):
            s = float(s)
            if s < min_support:
                continue
            # (k-2)-subsets of a candidate were candidates (or singles) earlier
            missing = [sub for sub in combinations(c, k - 2) if sub and frozenset(sub) not in known]
            for sub in missing:
                known[frozenset(sub)] = support(ctx, sub)
            bounds = frechet_bounds(c, known, ctx.n)
            lo, hi = bounds
            m = midova_from(s, bounds)
            if hi > lo and m > min_midova:
                level.append(Itemset(c, s, bounds, m))
        out.extend(level)
    out.sort(key=_sort_key)
    return out


def derive_rules(itemsets: Sequence[Itemset], min_confidence: float = DEFAULT_MIN_CONFIDENCE) -> list[Rule]:
    """Split every itemset of size >= 2 into premise -> conclusion.

    Supports of premises are looked up among ``itemsets``; with the output
    of ``levelwise_extract`` every subset is present.
    """
    sup = {frozenset(it.items): it.support for it in itemsets}
    rules = []
    for it in sorted(itemsets, key=_sort_key):
        if len(it.items) < 2:
            continue
        for r in range(1, len(it.items)):
            for premise in combinations(it.items, r):
                key = frozenset(premise)
                if key not in sup:
                    raise InputError(f"support of {sorted(premise)} not available")
                if sup[key] <= 0.0:
                    log.info("skipping rule with zero-support premise %s", premise)
                    continue
                conf = it.support / sup[key]
                if conf >= min_confidence:
                    conclusion = tuple(i for i in it.items if i not in key)
                    rules.append(Rule(premise, conclusion, it.support, conf, it.midova))
    return rules
