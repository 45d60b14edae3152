"""Per-block corruption costs, good / locally-good classification and bound checks."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .bitstring import edit_distance
from .channel import BlockDecomposition, ChannelTrial
from .decoder import SearchTrace, WordOracle, block_decode
from .inner import InnerCodebook
from .params import CodeParams


class AnalysisError(ValueError):
    pass


def block_costs(c: str, trial: ChannelTrial, p: CodeParams) -> list:
    """``Delta_j``: edit distance of each corrupted region to its source block."""
    dec = trial.decomposition
    if len(c) != p.n or dec.d != p.d:
        raise AnalysisError(f"geometry mismatch: |c| = {len(c)}, d = {dec.d} vs n = {p.n}, d = {p.d}")
    if dec.n_prime != len(trial.corrupted):
        raise AnalysisError(f"decomposition covers {dec.n_prime} positions, word has {len(trial.corrupted)}")
    B = p.block_len
    return [edit_distance(dec.region(trial.corrupted, j), c[(j - 1) * B:j * B]) for j in range(1, p.d + 1)]


def classify_gamma_good(costs, p: CodeParams) -> list:
    thr = p.good_threshold
    return [cost <= thr + 1e-12 for cost in costs]


def interval_is_good(a: int, b: int, costs, flags, p: CodeParams) -> bool:
    """Blocks ``a..b`` (1-based, inclusive) have small total cost and few bad blocks."""
    if not 1 <= a <= b <= len(costs):
        raise ValueError(f"bad interval [{a}, {b}]")
    size = b - a + 1
    total = sum(costs[a - 1:b])
    good = sum(1 for f in flags[a - 1:b] if f)
    return total <= p.gamma * size * p.alpha_eff * p.tau + 1e-9 and good >= (1 - p.theta) * size - 1e-9


def classify_locally_good(costs, p: CodeParams, flags=None) -> list:
    """A block is locally good when every interval containing it is good.

    All O(d^2) intervals are tested from prefix sums; bad intervals are
    accumulated into a difference array.
    """
    d = len(costs)
    if d == 0:
        return []
    if flags is None:
        flags = classify_gamma_good(costs, p)
    cost_ps = np.concatenate(([0.0], np.cumsum(np.asarray(costs, dtype=float))))
    bad_ps = np.concatenate(([0], np.cumsum([0 if f else 1 for f in flags])))
    unit = p.gamma * p.alpha_eff * p.tau
    cover = np.zeros(d + 1, dtype=np.int64)
    for a in range(d):
        ends = np.arange(a, d)
        size = ends - a + 1
        total = cost_ps[ends + 1] - cost_ps[a]
        bad = bad_ps[ends + 1] - bad_ps[a]
        ok = (total <= unit * size + 1e-9) & ((size - bad) >= (1 - p.theta) * size - 1e-9)
        failing = np.flatnonzero(~ok)
        if failing.size:
            # failing intervals starting at a cover [a, last failing end]
            cover[a] += 1
            cover[ends[failing[-1]] + 1] -= 1
    return (np.cumsum(cover[:d]) == 0).tolist()


@dataclass
class BoundCheck:
    name: str
    measured: float
    bound: float

    @property
    def ok(self) -> bool:
        return self.measured <= self.bound + 1e-12


@dataclass
class GoodnessReport:
    costs: list
    gamma_good: list
    locally_good: list
    lengths: list
    delta: float
    bound_gamma: float
    bound_local: float

    @property
    def d(self) -> int:
        return len(self.costs)

    @property
    def fraction_gamma_bad(self) -> float:
        return self.gamma_good.count(False) / self.d

    @property
    def fraction_locally_bad(self) -> float:
        return self.locally_good.count(False) / self.d


def fraction_bounds(p: CodeParams, delta: float) -> tuple:
    """Upper bounds on the bad-block and locally-bad-block fractions at ``delta``."""
    ga = p.gamma * p.alpha_eff
    return 2 * p.beta_eff * delta / ga, (4 / ga) * (1 + 1 / p.theta) * delta * p.beta_eff


def analyze(c: str, trial: ChannelTrial, p: CodeParams, delta: Optional[float] = None) -> GoodnessReport:
    if delta is None:
        delta = p.delta
    costs = block_costs(c, trial, p)
    flags = classify_gamma_good(costs, p)
    local = classify_locally_good(costs, p, flags)
    bg, bl = fraction_bounds(p, delta)
    return GoodnessReport(costs, flags, local, list(trial.decomposition.lengths), delta, bg, bl)


def check_bounds(report: GoodnessReport, p: CodeParams) -> list:
    """Bad-fraction, locally-bad-fraction and good-block-length checks."""
    slack = p.alpha_eff * p.gamma * p.tau
    worst = 0.0
    for ln, good in zip(report.lengths, report.gamma_good):
        if good:
            worst = max(worst, abs(ln - p.block_len))
    return [
        BoundCheck("gamma_bad_fraction", report.fraction_gamma_bad, report.bound_gamma),
        BoundCheck("locally_bad_fraction", report.fraction_locally_bad, report.bound_local),
        BoundCheck("good_block_length_deviation", worst, slack),
    ]


def format_report(report: GoodnessReport, checks: list) -> str:
    lines = ["# j delta_j gamma_good locally_good"]
    for j, (cost, g, lg) in enumerate(zip(report.costs, report.gamma_good, report.locally_good), 1):
        lines.append(f"{j} {cost} {int(g)} {int(lg)}")
    lines.append(f"fraction_gamma_bad = {report.fraction_gamma_bad:.6g}")
    lines.append(f"fraction_locally_bad = {report.fraction_locally_bad:.6g}")
    lines.append(f"bound_gamma = {report.bound_gamma:.6g}")
    lines.append(f"bound_local = {report.bound_local:.6g}")
    for chk in checks:
        lines.append(f"check {chk.name} = {'pass' if chk.ok else 'fail'} measured={chk.measured:.6g} bound={chk.bound:.6g}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------- decoder-side audits


def index_mismatch(trial: ChannelTrial, j: int, p: CodeParams, cb: InnerCodebook) -> tuple:
    """Over every position of block j's region: (#decoded index != j, region size)."""
    oracle = WordOracle(trial.corrupted)
    lo, hi = trial.decomposition.interval(j)
    bad = 0
    for i in range(lo, hi):
        got = block_decode(oracle, i, p, cb)
        if got is None or got[0] != j:
            bad += 1
    return bad, hi - lo


def interval_mismatch(trial: ChannelTrial, l: int, r: int, p: CodeParams, cb: InnerCodebook) -> float:
    """Fraction of ``i`` in ``[l, r)`` whose decoded index differs from phi(i)."""
    if r <= l:
        return 0.0
    phi = trial.decomposition.phi_table()
    oracle = WordOracle(trial.corrupted)
    bad = 0
    for i in range(l, r):
        got = block_decode(oracle, i, p, cb)
        if got is None or got[0] != phi[i]:
            bad += 1
    return bad / (r - l)


def invariant_steps(trace: SearchTrace, dec: BlockDecomposition) -> list:
    """For each search step, whether the target's region lies in the next range."""
    lo, hi = dec.interval(trace.target)
    ranges = [(s.l, s.r) for s in trace.steps[1:]]
    if trace.base:
        ranges.append(trace.base)
    out = []
    for l, r in ranges[: len(trace.steps)]:
        out.append(l <= lo and hi <= r)
    return out
