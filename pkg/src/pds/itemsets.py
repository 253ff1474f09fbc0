"""Level-wise (Apriori) frequent-itemset mining over sensor-ID transactions."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from itertools import combinations

logger = logging.getLogger(__name__)


class EmptyTransactions(ValueError):
    pass


@dataclass(frozen=True)
class Transaction:
    items: frozenset
    source_activity_ref: object = None

    def __post_init__(self):
        object.__setattr__(self, "items", frozenset(self.items))
        if not self.items:
            raise ValueError("a transaction needs at least one item")


@dataclass(frozen=True)
class FrequentItemset:
    items: frozenset
    support_count: int
    support_ratio: float

    def __post_init__(self):
        object.__setattr__(self, "items", frozenset(self.items))
        if self.support_count < 1 or not 0 < self.support_ratio <= 1:
            raise ValueError("support must be positive")

    @property
    def size(self):
        return len(self.items)

    def sorted_items(self):
        return sorted(self.items)

    def to_dict(self):
        return {
            "items": self.sorted_items(),
            "support_count": self.support_count,
            "support_ratio": self.support_ratio,
        }


def _items_of(t):
    return frozenset(t.items if isinstance(t, Transaction) else t)


def meets_support(count, n, min_support) -> bool:
    # inclusive: 2 of 4 passes at 0.5
    return count / n >= min_support


def sort_itemsets(itemsets):
    return sorted(itemsets, key=lambda s: (-s.size, -s.support_count, s.sorted_items()))


def frequent_itemsets(transactions, min_support=0.5) -> list[FrequentItemset]:
    """Every itemset contained in at least ``min_support`` of the transactions."""
    if not 0 < min_support < 1:
        raise ValueError("min_support must lie strictly between 0 and 1")
    baskets = [_items_of(t) for t in transactions]
    if not baskets:
        raise EmptyTransactions("no transactions to mine")
    n = len(baskets)

    counts = {}
    for b in baskets:
        for item in b:
            key = frozenset((item,))
            counts[key] = counts.get(key, 0) + 1
    level = {k: c for k, c in counts.items() if meets_support(c, n, min_support)}
    found = dict(level)
    size = 1
    while level:
        size += 1
        prev = sorted(tuple(sorted(s)) for s in level)
        candidates = set()
        # join itemsets sharing their first size-2 items, then prune by downward closure
        for i, a in enumerate(prev):
            for b in prev[i + 1:]:
                if a[:-1] != b[:-1]:
                    break
                cand = frozenset(a) | {b[-1]}
                if all(frozenset(sub) in level for sub in combinations(sorted(cand), size - 1)):
                    candidates.add(cand)
        level = {}
        for cand in candidates:
            c = sum(1 for b in baskets if cand <= b)
            if meets_support(c, n, min_support):
                level[cand] = c
        found.update(level)
    return sort_itemsets(FrequentItemset(k, c, c / n) for k, c in found.items())


def select_target_set(itemsets) -> FrequentItemset | None:
    """Largest itemset, then highest support; remaining ties go to the lexicographically smallest."""
    itemsets = list(itemsets)
    if not itemsets:
        return None
    best = sort_itemsets(itemsets)
    top = best[0]
    ties = [s for s in best[1:] if s.size == top.size and s.support_count == top.support_count]
    if ties:
        logger.info("target set tie: chose %s over %s", top.sorted_items(),
                    [s.sorted_items() for s in ties])
    return top
