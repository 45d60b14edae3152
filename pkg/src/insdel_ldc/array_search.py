"""Median-sampled search in a nearly sorted array.

Indices are 0-based here. A search samples ``t`` positions of the current
interval, compares the target with the sample median and drops an eighth
of the interval on the side the target cannot be on.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

BASE_WIDTH = 64
SHRINK = 8


@dataclass
class NearlySortedArray:
    values: list
    reference: list
    corrupted_set: frozenset = field(default=frozenset())

    def __post_init__(self):
        if len(self.values) != len(self.reference):
            raise ValueError("values and reference differ in length")
        if len(set(self.values)) != len(self.values):
            raise ValueError("values must be distinct")
        if any(a >= b for a, b in zip(self.reference, self.reference[1:])):
            raise ValueError("reference must be strictly increasing")
        diff = frozenset(i for i, (v, r) in enumerate(zip(self.values, self.reference)) if v != r)
        if self.corrupted_set and diff != self.corrupted_set:
            raise ValueError("corrupted_set does not match the disagreeing positions")
        self.corrupted_set = diff

    def __len__(self) -> int:
        return len(self.values)


def random_instance(n: int, corruptions: int, rng: random.Random) -> NearlySortedArray:
    """Sorted distinct values with ``corruptions`` positions overwritten by fresh values."""
    if not 0 <= corruptions <= n:
        raise ValueError("corruptions must lie in [0, n]")
    pool = rng.sample(range(20 * n), n + corruptions)
    reference = sorted(pool[:n])
    values = list(reference)
    fresh = pool[n:]
    for pos, v in zip(rng.sample(range(n), corruptions), fresh):
        values[pos] = v
    return NearlySortedArray(values, reference)


def locally_good_indices(arr: NearlySortedArray, theta: float) -> set:
    """Indices i where every window ``[i, i+r]`` and ``[i-r, i]`` is at most theta corrupted."""
    if not 0 < theta < 1:
        raise ValueError("theta must lie in (0, 1)")
    n = len(arr)
    bad = np.zeros(n, dtype=np.int64)
    if arr.corrupted_set:
        bad[list(arr.corrupted_set)] = 1
    ps = np.concatenate(([0], np.cumsum(bad)))
    good = set()
    for i in range(n):
        if bad[i]:
            continue
        r = np.arange(n - i)
        if np.any(ps[i + r + 1] - ps[i] > theta * (r + 1) + 1e-12):
            continue
        r = np.arange(i + 1)
        if np.any(ps[i + 1] - ps[i - r] > theta * (r + 1) + 1e-12):
            continue
        good.add(i)
    return good


def census_bound(n: int, corruptions: int, theta: float) -> float:
    return n - 2 * corruptions / theta


class ArrayOracle:
    def __init__(self, values: Sequence):
        self.values = values
        self.queries = 0

    def __len__(self) -> int:
        return len(self.values)

    def __getitem__(self, i: int):
        self.queries += 1
        return self.values[i]


@dataclass
class SearchResult:
    index: Optional[int]
    rounds: list  # (i0, i1) before each sampling round
    queries: int


def default_samples(n: int) -> int:
    return math.ceil(math.log2(max(n, 2))) ** 2


def max_rounds(n: int, base: int = BASE_WIDTH, shrink: int = SHRINK) -> int:
    if n <= base:
        return 0
    return math.ceil(math.log(n / base) / math.log(shrink / (shrink - 1))) + 1


def noisy_search(oracle, x, theta: float, t: int, rng: random.Random,
                 *, base: int = BASE_WIDTH, shrink: int = SHRINK) -> SearchResult:
    """Index holding ``x`` or ``None``.

    ``theta`` is accepted for interface symmetry with the analysis; the
    search itself only depends on ``t`` and the shrink rule.
    """
    if t < 1:
        raise ValueError("t must be at least 1")
    del theta
    lo, hi = 0, len(oracle) - 1
    rounds = []
    while hi - lo + 1 > base:
        rounds.append((lo, hi))
        picks = [rng.randint(lo, hi) for _ in range(t)]
        samples = sorted((oracle[j], j) for j in picks)
        y_med, j_med = samples[(len(samples) - 1) // 2]
        if y_med == x:
            return SearchResult(j_med, rounds, oracle.queries)
        cut = math.ceil((hi - lo + 1) / shrink)
        if x > y_med:
            lo += cut
        else:
            hi -= cut
    for j in range(lo, hi + 1):
        if oracle[j] == x:
            return SearchResult(j, rounds, oracle.queries)
    return SearchResult(None, rounds, oracle.queries)
