"""Local decoders for the buffered concatenated code.

Every bit of the received word is read through a :class:`WordOracle`, so
query counts are exact. Positions are 1-based and ranges ``[l, r)`` are
half-open, as in the rest of the package.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .encoder import inner_message, parse_inner_message
from .inner import InnerCodebook, dec_in, enc_in
from .outer import BOTTOM
from .params import CodeParams


class WordOracle:
    """Counting read access to a received word.

    Reads outside ``[1, n']`` answer ``'0'`` and are counted. A view made
    with :meth:`view` keeps its own counter and forwards every read to its
    parent, so the parent's count is the sum over its views.
    """

    def __init__(self, word: str, log: bool = False, parent: Optional["WordOracle"] = None):
        self.word = word if parent is None else parent.word
        self.n = len(self.word)
        self.queries = 0
        self.parent = parent
        self.log: Optional[list] = [] if log else None

    def view(self, log: bool = False) -> "WordOracle":
        return WordOracle(self.word, log=log, parent=self)

    def _count(self, k: int) -> None:
        node = self
        while node is not None:
            node.queries += k
            node = node.parent

    def read(self, lo: int, hi: int) -> str:
        """Bits ``lo..hi`` inclusive; an empty string when ``hi < lo``."""
        if hi < lo:
            return ""
        self._count(hi - lo + 1)
        if self.log is not None:
            self.log.append((lo, hi))
        a, b = max(lo, 1), min(hi, self.n)
        if a > b:
            return "0" * (hi - lo + 1)
        return "0" * (a - lo) + self.word[a - 1:b] + "0" * (hi - b)

    def bit(self, i: int) -> int:
        return int(self.read(i, i))


@dataclass(frozen=True)
class BufferPair:
    first: tuple
    second: tuple

    def __post_init__(self):
        (a, b), (a2, b2) = self.first, self.second
        if not a <= b < a2 <= b2:
            raise ValueError(f"buffers out of order: {self.first}, {self.second}")

    @property
    def span(self) -> tuple:
        """Positions strictly between the two buffers, inclusive bounds."""
        return self.first[1] + 1, self.second[0] - 1


def _light_windows(bits: str, offset: int, window: int, weight: int) -> list:
    """Start positions (absolute) of windows with at most ``weight`` ones."""
    if len(bits) < window:
        return []
    arr = np.frombuffer(bits.encode(), dtype=np.uint8) - 48
    cs = np.concatenate(([0], np.cumsum(arr, dtype=np.int64)))
    w = cs[window:] - cs[:-window]
    return (np.flatnonzero(w <= weight) + offset).tolist()


def _buff_find(oracle: WordOracle, i: int, p: CodeParams):
    W = p.buffer_window
    reach = p.eta * p.tau
    lo = max(1, i - reach)
    last = min(oracle.n - W + 1, i + reach)
    if last < lo:
        return None, "", lo
    seg = oracle.read(lo, last + W - 1)
    starts = _light_windows(seg, lo, W, p.buffer_weight)
    for a, a2 in zip(starts, starts[1:]):
        b = a + W - 1
        if b < i < a2:
            return BufferPair((a, b), (a2, a2 + W - 1)), seg, lo
    return None, seg, lo


def buff_find(oracle: WordOracle, i: int, p: CodeParams) -> Optional[BufferPair]:
    """Nearest pair of consecutive approximate buffers around ``i``, or None."""
    return _buff_find(oracle, i, p)[0]


def _decode_span(p: CodeParams, cb: InnerCodebook, span: str):
    msg = dec_in(cb, span)
    if msg is None:
        return None
    j, symbols = parse_inner_message(p, msg)
    if not 1 <= j <= p.d:
        return None
    return j, symbols


def block_decode(oracle: WordOracle, i: int, p: CodeParams, cb: InnerCodebook):
    """``(j, b_j)`` for the block around position ``i``, or None."""
    pair, seg, lo = _buff_find(oracle, i, p)
    if pair is None:
        return None
    s, e = pair.span
    # the span lies inside the segment already read
    return _decode_span(p, cb, seg[s - lo:e - lo + 1])


def _marked(bits: str, offset: int, p: CodeParams, reverse: bool) -> list:
    W, thr = p.buffer_window, p.buffer_weight
    light = set(_light_windows(bits, offset, W, thr))
    out = []
    first, last = offset, offset + len(bits) - W
    if not reverse:
        s = first
        while s <= last:
            if s in light:
                out.append((s, s + W - 1))
                s += W
            else:
                s += 1
    else:
        s = last
        while s >= first:
            if s in light:
                out.append((s, s + W - 1))
                s -= W
            else:
                s -= 1
        out.reverse()
    return out


def interval_decode(oracle: WordOracle, l: int, r: int, j: int, p: CodeParams, cb: InnerCodebook):
    """Symbols of block ``j`` found between approximate buffers in ``[l, r)``.

    Two greedy passes (left to right, right to left) mark non-overlapping
    light windows; every span between consecutive marks is inner-decoded.
    Returns the unique symbol tuple decoded with index ``j``, else None.
    """
    if r <= l:
        return None
    bits = oracle.read(l, r - 1)
    spans = set()
    for rev in (False, True):
        marks = _marked(bits, l, p, rev)
        for (_, b), (a2, _) in zip(marks, marks[1:]):
            if a2 - b > 1:
                spans.add((b + 1, a2 - 1))
    found = set()
    for s, e in sorted(spans):
        got = _decode_span(p, cb, bits[s - l:e - l + 1])
        if got is not None and got[0] == j:
            found.add(got[1])
    if len(found) == 1:
        return found.pop()
    return None


@dataclass
class SearchStep:
    l: int
    r: int
    median: Optional[int]
    valid: int
    samples: int


@dataclass
class SearchTrace:
    target: int
    steps: list = field(default_factory=list)
    base: tuple = ()
    result: object = None

    @property
    def depth(self) -> int:
        """Recursion levels including the base case."""
        return len(self.steps) + (1 if self.base else 0)


def _median_lower(vals: list) -> int:
    vals = sorted(vals)
    return vals[(len(vals) - 1) // 2]


def noisy_binary_search(
    oracle: WordOracle,
    l: int,
    r: int,
    j: int,
    p: CodeParams,
    cb: InnerCodebook,
    rng: random.Random,
    trace: Optional[SearchTrace] = None,
):
    """Locate block ``j`` in ``[l, r)`` by median-sampled bisection.

    Returns the block's symbol tuple or None.
    """
    if trace is None:
        trace = SearchTrace(j)
    N = p.sample_count(oracle.n)
    while r - l > p.C:
        w = r - l
        cut = math.ceil(p.rho * w)
        m1, m2 = l + cut, r - cut
        idx = []
        for _ in range(N):
            got = block_decode(oracle, rng.randrange(m1, m2), p, cb)
            if got is not None:
                idx.append(got[0])
        if not idx:
            trace.steps.append(SearchStep(l, r, None, 0, N))
            trace.result = None
            return None
        med = _median_lower(idx)
        trace.steps.append(SearchStep(l, r, med, len(idx), N))
        if j <= med:
            r = m2
        else:
            l = m1
    trace.base = (l, r)
    trace.result = interval_decode(oracle, l, r, j, p, cb)
    return trace.result


# ------------------------------------------------------------------ sessions


class DecodeSession:
    """One decoding session: its own oracle view, randomness and block memo."""

    def __init__(self, word: str, p: CodeParams, cb: InnerCodebook, outer, seed=0,
                 *, memoize: bool = True, oracle: Optional[WordOracle] = None, log: bool = False):
        self.p, self.cb, self.outer = p, cb, outer
        base = oracle if oracle is not None else WordOracle(word)
        self.oracle = base.view(log=log)
        self.rng = random.Random(f"decode:{seed}")
        self.memoize = memoize
        self.memo: dict = {}
        self.traces: list = []

    @property
    def queries(self) -> int:
        return self.oracle.queries

    @property
    def depth(self) -> int:
        return max((t.depth for t in self.traces), default=0)

    def search(self, block: int):
        if self.memoize and block in self.memo:
            return self.memo[block]
        tr = SearchTrace(block)
        got = noisy_binary_search(self.oracle, 1, self.oracle.n + 1, block, self.p, self.cb, self.rng, tr)
        self.traces.append(tr)
        if self.memoize:
            self.memo[block] = got
        return got

    def outer_symbol(self, q: int):
        """Answer to outer query ``q`` (1-based), or BOTTOM."""
        block, r = divmod(q - 1, self.p.tau)
        got = self.search(block + 1)
        return BOTTOM if got is None else got[r]

    def ldc(self, i: int) -> int:
        bit, _ = self.outer.decode(i, self.outer_symbol, self.rng)
        return bit

    def lcc(self, j: int) -> int:
        p = self.p
        if not 1 <= j <= p.n:
            raise IndexError(f"position {j} outside [1, {p.n}]")
        block, r_j = divmod(j - 1, p.block_len)
        width = p.lcc_buffer_width
        if r_j < width or r_j >= p.block_len - width:
            return 0
        block += 1
        syms = []
        for r in range(p.tau):
            s, _ = self.outer.correct((block - 1) * p.tau + r + 1, self.outer_symbol, self.rng)
            syms.append(s)
        cw = enc_in(self.cb, inner_message(p, block, syms))
        off = r_j - width
        return int(cw[off]) if 0 <= off < len(cw) else 0


def ldc_decode(oracle: WordOracle, i: int, p: CodeParams, cb: InnerCodebook, outer, seed=0, memoize=True) -> int:
    return DecodeSession(oracle.word, p, cb, outer, seed, memoize=memoize, oracle=oracle).ldc(i)


def lcc_decode(oracle: WordOracle, j: int, p: CodeParams, cb: InnerCodebook, outer, seed=0, memoize=True) -> int:
    return DecodeSession(oracle.word, p, cb, outer, seed, memoize=memoize, oracle=oracle).lcc(j)


