"""Budgeted insdel adversaries with exact block attribution.

Every certified strategy edits one block region at a time, so the map
``phi`` from corrupted positions to blocks is known exactly: block ``j``
owns ``lengths[j-1]`` consecutive positions of the corrupted word.
"""

from __future__ import annotations

import bisect
import random
from dataclasses import dataclass, field
from itertools import accumulate
from typing import Optional

from .bitstring import BitString, Delete, EditScript, Insert, apply_edit_script, edit_distance, format_script, parse_op
from .outer import ConfigurationError
from .params import CodeParams

STRATEGIES = ("none", "uniform-random", "block-burst", "buffer-spoof", "buffer-erase", "freeform")
CERTIFIED = STRATEGIES[:-1]


class TraceError(ValueError):
    pass


@dataclass(frozen=True)
class BlockDecomposition:
    lengths: tuple

    def __post_init__(self):
        if any(x < 0 for x in self.lengths):
            raise TraceError("negative block length")

    @property
    def d(self) -> int:
        return len(self.lengths)

    @property
    def n_prime(self) -> int:
        return sum(self.lengths)

    @property
    def starts(self) -> list:
        """1-based first position of each block region."""
        return [1 + s for s in accumulate((0,) + self.lengths[:-1])]

    def interval(self, j: int) -> tuple:
        """``phi^{-1}(j)`` as a half-open ``[lo, hi)`` (empty when lo == hi)."""
        lo = self.starts[j - 1]
        return lo, lo + self.lengths[j - 1]

    def phi(self, i: int) -> int:
        if not 1 <= i <= self.n_prime:
            raise IndexError(f"position {i} outside [1, {self.n_prime}]")
        ends = list(accumulate(self.lengths))
        return bisect.bisect_left(ends, i) + 1

    def phi_table(self) -> list:
        """``phi(i)`` for every i in ``[1, n']`` (index 0 unused)."""
        out = [0]
        for j, ln in enumerate(self.lengths, 1):
            out.extend([j] * ln)
        return out

    def region(self, word: str, j: int) -> str:
        lo, hi = self.interval(j)
        return word[lo - 1:hi - 1]


@dataclass
class ChannelTrial:
    corrupted: BitString
    script: EditScript
    decomposition: BlockDecomposition
    strategy: str
    seed: object
    budget: int
    certified: bool = True
    flags: list = field(default_factory=list)

    @property
    def budget_used(self) -> int:
        return len(self.script)


def decomposition_lengths(script, p: CodeParams) -> BlockDecomposition:
    """Per-block region lengths after replaying a block-attributed script.

    Each operation must fall inside the current region of the block it is
    attributed to (an insertion may also sit at either end of it).
    """
    lengths = [p.block_len] * p.d
    for k, op in enumerate(script):
        j = op.block
        if j is None or not 1 <= j <= p.d:
            raise TraceError(f"op {k} has no valid block attribution")
        start = 1 + sum(lengths[: j - 1])
        if isinstance(op, Insert):
            if not start <= op.position <= start + lengths[j - 1]:
                raise TraceError(f"op {k}: insert at {op.position} outside block {j}")
            lengths[j - 1] += 1
        else:
            if not start <= op.position < start + lengths[j - 1]:
                raise TraceError(f"op {k}: delete at {op.position} outside block {j}")
            lengths[j - 1] -= 1
    return BlockDecomposition(tuple(lengths))


class _Blocks:
    """Mutable per-block bit lists used while generating a script."""

    def __init__(self, c: str, p: CodeParams):
        B = p.block_len
        self.p = p
        self.blocks = [list(c[i * B:(i + 1) * B]) for i in range(p.d)]
        self.ops: list = []

    def offset(self, j: int) -> int:
        return sum(len(b) for b in self.blocks[: j - 1])

    def insert(self, j: int, local: int, bit: int) -> None:
        """Insert so that ``bit`` becomes local position ``local`` (1-based) of block j."""
        blk = self.blocks[j - 1]
        blk.insert(local - 1, "1" if bit else "0")
        self.ops.append(Insert(self.offset(j) + local, bit, j))

    def delete(self, j: int, local: int) -> None:
        blk = self.blocks[j - 1]
        del blk[local - 1]
        self.ops.append(Delete(self.offset(j) + local, j))


def corrupt(
    c: str,
    p: CodeParams,
    strategy: str,
    seed,
    *,
    delta: Optional[float] = None,
    target: Optional[int] = None,
) -> ChannelTrial:
    """Corrupt codeword ``c`` with at most ``floor(2 n delta)`` operations."""
    if strategy not in STRATEGIES:
        raise ConfigurationError(f"unknown strategy {strategy!r}; known: {', '.join(STRATEGIES)}")
    if len(c) != p.n:
        raise ConfigurationError(f"codeword length {len(c)} != n = {p.n}")
    budget = p.budget(delta)
    rng = random.Random(f"channel:{strategy}:{seed}")
    if strategy == "freeform":
        return _freeform(c, p, budget, rng, seed)
    st = _Blocks(c, p)
    L = p.buffer_len
    flags = []
    if strategy == "uniform-random":
        for _ in range(budget):
            _random_op(st, rng.randint(1, p.d), rng)
    elif strategy == "block-burst":
        j = target if target is not None else rng.randint(1, p.d)
        flags.append(f"target={j}")
        for _ in range(budget):
            _random_op(st, j, rng)
    elif strategy == "buffer-spoof":
        # a run of window-many zeros inside a codeword region passes the buffer test
        W = p.buffer_window
        left = budget
        while left >= W:
            j = rng.randint(1, p.d)
            size = len(st.blocks[j - 1])
            if size < 2 * L + 2:
                continue
            pos = rng.randint(L + 2, size - L)
            for _ in range(W):
                st.insert(j, pos, 0)
            left -= W
            flags.append(f"spoof@block{j}")
    elif strategy == "buffer-erase":
        left = budget
        while left > 0:
            j = rng.randint(1, p.d)
            size = len(st.blocks[j - 1])
            if size < 2 * L:
                continue
            lead = rng.random() < 0.5
            local = rng.randint(1, L) if lead else rng.randint(size - L + 1, size)
            kind = rng.choice(("delete", "insert-one", "flip") if left >= 2 else ("delete", "insert-one"))
            if kind == "delete":
                st.delete(j, local)
                left -= 1
            elif kind == "insert-one":
                st.insert(j, local, 1)
                left -= 1
            else:
                st.delete(j, local)
                st.insert(j, local, 1)
                left -= 2
            flags.append(f"erase@block{j}")
    script = EditScript(tuple(st.ops))
    corrupted = apply_edit_script(c, script)
    dec = decomposition_lengths(script, p)
    if dec.n_prime != len(corrupted):
        raise TraceError("decomposition does not cover the corrupted word")
    return ChannelTrial(corrupted, script, dec, strategy, seed, budget, True, sorted(set(flags)))


def _random_op(st: _Blocks, j: int, rng: random.Random) -> None:
    size = len(st.blocks[j - 1])
    if size and rng.random() < 0.5:
        st.delete(j, rng.randint(1, size))
    else:
        st.insert(j, rng.randint(1, size + 1), rng.randrange(2))


def _freeform(c: str, p: CodeParams, budget: int, rng: random.Random, seed) -> ChannelTrial:
    ops = []
    cur = len(c)
    for _ in range(budget):
        if cur and rng.random() < 0.5:
            ops.append(Delete(rng.randint(1, cur)))
            cur -= 1
        else:
            ops.append(Insert(rng.randint(1, cur + 1), rng.randrange(2)))
            cur += 1
    script = EditScript(tuple(ops))
    corrupted = apply_edit_script(c, script)
    dec = align_decomposition(c, corrupted, p)
    return ChannelTrial(corrupted, script, dec, "freeform", seed, budget, False, ["non-certified"])


def align_decomposition(c: str, c_prime: str, p: CodeParams) -> BlockDecomposition:
    """Best-effort phi for unattributed edits from one optimal alignment.

    Matched positions inherit the block of their source symbol; inserted
    symbols join the block of the preceding source position.
    """
    n, m = len(c), len(c_prime)
    # full LCS table; freeform trials are meant for small words
    dp = [[0] * (m + 1) for _ in range(n + 1)]
    for i in range(n - 1, -1, -1):
        row, nxt = dp[i], dp[i + 1]
        ci = c[i]
        for j in range(m - 1, -1, -1):
            row[j] = nxt[j + 1] + 1 if ci == c_prime[j] else max(nxt[j], row[j + 1])
    owner = []
    i = j = 0
    B = p.block_len
    while j < m:
        if i < n and c[i] == c_prime[j] and dp[i][j] == dp[i + 1][j + 1] + 1:
            owner.append(i // B + 1)
            i += 1
            j += 1
        elif i < n and dp[i + 1][j] >= dp[i][j + 1]:
            i += 1
        else:
            owner.append(min(i // B + 1, p.d) if i < n else p.d)
            j += 1
    # force monotonicity so phi stays non-decreasing
    lengths = [0] * p.d
    cur = 1
    for b in owner:
        cur = max(cur, b)
        lengths[cur - 1] += 1
    return BlockDecomposition(tuple(lengths))


def per_block_audit(c: str, trial: ChannelTrial, p: CodeParams) -> list:
    """Edit distance between each corrupted region and its source block (DP)."""
    out = []
    for j in range(1, p.d + 1):
        lo = (j - 1) * p.block_len
        out.append(edit_distance(trial.decomposition.region(trial.corrupted, j), c[lo:lo + p.block_len]))
    return out


# ------------------------------------------------------------------ traces


def format_trace(trial: ChannelTrial) -> str:
    return format_script(trial.script) + "lengths: " + " ".join(map(str, trial.decomposition.lengths)) + "\n"


def parse_trace(text: str) -> tuple:
    ops, lengths = [], None
    for line in text.splitlines():
        if not line.strip():
            continue
        if line.startswith("lengths:"):
            lengths = tuple(int(v) for v in line[len("lengths:"):].split())
        else:
            ops.append(parse_op(line))
    if lengths is None:
        raise TraceError("trace has no lengths footer")
    return EditScript(tuple(ops)), BlockDecomposition(lengths)
