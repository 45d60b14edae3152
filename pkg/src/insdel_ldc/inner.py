"""Greedy insdel inner code with a window-density certificate.

What the rest of the construction needs from the inner code is (a) unique
decoding of any word within ``delta_in * 2 * n_in`` insdels of a codeword
and (b) every window of length ``2 * ceil(log2 t)`` having fractional
weight at least 2/5. Both are checked directly on the produced table.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from pathlib import Path
from typing import Optional

from .bitstring import BitString, edit_distance
from .lcsbank import LcsBank

DENSITY_THRESHOLD = Fraction(2, 5)


class CodebookCapacityError(RuntimeError):
    def __init__(self, msg: str, achieved: int):
        super().__init__(msg)
        self.achieved = achieved


class CodebookVerificationError(ValueError):
    pass


class LengthError(ValueError):
    pass


def density_window(t: int) -> int:
    return 2 * math.ceil(math.log2(t))


def decoding_radius(delta_in: float, n_in: int) -> int:
    """Largest integer edit count ``<= delta_in * 2 * n_in``."""
    return math.floor(Fraction(str(delta_in)) * 2 * n_in)


@dataclass
class InnerCodebook:
    t: int
    n_in: int
    table: dict  # message BitString -> codeword BitString
    min_pairwise_ed: int
    delta_in: float
    seed: int
    density_window: int
    density_threshold: Fraction = DENSITY_THRESHOLD
    buffer_window: Optional[int] = None
    buffer_weight: int = 0
    _reverse: dict = field(default_factory=dict, repr=False)
    _bank: Optional[LcsBank] = field(default=None, repr=False)
    _messages: list = field(default_factory=list, repr=False)
    _memo: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self._messages = sorted(self.table)
        self._reverse = {cw: msg for msg, cw in self.table.items()}
        self._bank = LcsBank(self.n_in)
        for msg in self._messages:
            self._bank.add(self.table[msg])

    @property
    def beta_in(self) -> int:
        return self.n_in // self.t

    @property
    def radius(self) -> int:
        return decoding_radius(self.delta_in, self.n_in)

    def __len__(self) -> int:
        return len(self.table)


def enc_in(cb: InnerCodebook, msg: str) -> BitString:
    if len(msg) != cb.t:
        raise LengthError(f"message length {len(msg)} != t = {cb.t}")
    return cb.table[BitString(msg)]


def dec_in(cb: InnerCodebook, word: str) -> Optional[BitString]:
    """Nearest-codeword decoding; None when out of radius or tied."""
    hit = cb._reverse.get(word)
    if hit is not None:
        return hit
    radius = cb.radius
    if abs(len(word) - cb.n_in) > radius:
        return None
    memo = cb._memo
    if word in memo:
        return memo[word]
    dist = cb._bank.distances(word)
    best = int(dist.min())
    result = None
    if best <= radius and int((dist == best).sum()) == 1:
        result = cb._messages[int(dist.argmin())]
    if len(memo) > 500_000:
        memo.clear()
    memo[word] = result
    return result


# ------------------------------------------------------------------ building


def _dense_enough(word: str, window: int) -> bool:
    if window > len(word):
        return True
    w = word[:window].count("1")
    if 5 * w < 2 * window:
        return False
    for k in range(window, len(word)):
        w += (word[k] == "1") - (word[k - window] == "1")
        if 5 * w < 2 * window:
            return False
    return True


def _looks_like_buffer(word: str, window: int, weight: int) -> bool:
    if window > len(word):
        return False
    w = word[:window].count("1")
    if w <= weight:
        return True
    for k in range(window, len(word)):
        w += (word[k] == "1") - (word[k - window] == "1")
        if w <= weight:
            return True
    return False


def _candidate(rng: random.Random, n: int, max_zero_run: Optional[int], edge_ones: bool,
               window: int = 0, min_ones: int = 0) -> str:
    """Random word; a 0 is replaced by 1 whenever it would break a constraint."""
    out = []
    run = 0
    ones = 0  # ones among the last window - 1 bits
    for k in range(n):
        if edge_ones and (k == 0 or k == n - 1):
            b = "1"
        elif max_zero_run is not None and run >= max_zero_run:
            b = "1"
        elif window and k >= window - 1 and ones < min_ones:
            b = "1"
        else:
            b = "1" if rng.random() < 0.5 else "0"
        run = run + 1 if b == "0" else 0
        out.append(b)
        if window:
            ones += b == "1"
            if k >= window - 1:
                ones -= out[k - window + 1] == "1"
    return "".join(out)


def _messages(t: int) -> list:
    return [BitString(format(v, f"0{t}b")) for v in range(2**t)]


def build_codebook(
    t: int,
    delta_in: float,
    beta_in_max: int,
    seed: int,
    *,
    beta_in_min: int = 1,
    buffer_window: Optional[int] = None,
    buffer_weight: int = 0,
    edge_ones: Optional[bool] = None,
    patience: int = 3000,
) -> InnerCodebook:
    """Greedily fill a ``2**t``-entry codebook from a seeded candidate stream.

    Lengths ``n_in = beta_in * t`` are tried from ``beta_in_min`` upward; a
    candidate is accepted when it meets the density rule, contains no window
    that would pass the buffer test (``buffer_window`` bits of weight at most
    ``buffer_weight``) and is at edit distance more than ``4 * delta_in * n_in``
    from every accepted codeword. A length is abandoned after ``patience``
    consecutive rejections.
    """
    if t < 2:
        raise ValueError("t must be at least 2")
    if not 0 < delta_in < 0.5:
        raise ValueError("delta_in must lie in (0, 1/2)")
    if edge_ones is None:
        edge_ones = buffer_window is not None
    window = density_window(t)
    need = 2**t
    best = 0
    min_ones = math.ceil(DENSITY_THRESHOLD * window)
    max_zero_run = buffer_window - 1 if buffer_window is not None and buffer_weight == 0 else None
    for beta_in in range(max(1, beta_in_min), beta_in_max + 1):
        n_in = beta_in * t
        floor_ed = 4 * Fraction(str(delta_in)) * n_in
        rng = random.Random(f"inner:{t}:{delta_in}:{n_in}:{seed}")
        bank = LcsBank(n_in)
        seen: set = set()
        misses = 0
        while len(bank) < need and misses < patience:
            cand = _candidate(rng, n_in, max_zero_run, edge_ones, window, min_ones)
            ok = cand not in seen and _dense_enough(cand, window)
            if ok and buffer_window is not None:
                ok = not _looks_like_buffer(cand, buffer_window, buffer_weight)
            seen.add(cand)
            if ok and len(bank):
                ok = int(bank.distances(cand).min()) > floor_ed
            if ok:
                bank.add(cand)
                misses = 0
            else:
                misses += 1
        best = max(best, len(bank))
        if len(bank) == need:
            table = {msg: BitString(cw) for msg, cw in zip(_messages(t), bank.words)}
            return InnerCodebook(
                t=t,
                n_in=n_in,
                table=table,
                min_pairwise_ed=min_pairwise_distance(bank.words),
                delta_in=delta_in,
                seed=seed,
                density_window=window,
                buffer_window=buffer_window,
                buffer_weight=buffer_weight,
            )
    raise CodebookCapacityError(
        f"could not fill {need} codewords with beta_in <= {beta_in_max} (best: {best})", best
    )


def min_pairwise_distance(words: list) -> int:
    if len(words) < 2:
        return 0
    bank = LcsBank(len(words[0]))
    best = None
    for w in words:
        if len(bank):
            d = int(bank.distances(w).min())
            best = d if best is None else min(best, d)
        bank.add(w)
    return best


def verify_codebook(cb: InnerCodebook, exhaustive_dp: bool = False) -> None:
    """Re-check every invariant of ``cb``; raises CodebookVerificationError."""
    words = [cb.table[m] for m in sorted(cb.table)]
    if len(words) != 2**cb.t or len(set(words)) != len(words):
        raise CodebookVerificationError("codewords missing or repeated")
    if any(len(w) != cb.n_in for w in words):
        raise CodebookVerificationError("codeword of wrong length")
    if exhaustive_dp:
        dmin = min(edit_distance(a, b) for a, b in combinations(words, 2))
    else:
        dmin = min_pairwise_distance(words)
    if dmin != cb.min_pairwise_ed:
        raise CodebookVerificationError(f"recorded dmin {cb.min_pairwise_ed} != measured {dmin}")
    if not dmin > 4 * Fraction(str(cb.delta_in)) * cb.n_in:
        raise CodebookVerificationError(f"dmin {dmin} <= 4 * delta_in * n_in")
    for w in words:
        if not _dense_enough(w, cb.density_window):
            raise CodebookVerificationError(f"density violated in {w}")
        if cb.buffer_window is not None and _looks_like_buffer(w, cb.buffer_window, cb.buffer_weight):
            raise CodebookVerificationError(f"codeword contains a buffer-like window: {w}")


def window_weights(word: str, window: int) -> list:
    return [word[k:k + window].count("1") for k in range(len(word) - window + 1)]


# --------------------------------------------------------------- cache files


def save_codebook(cb: InnerCodebook, path) -> None:
    head = f"t={cb.t} n={cb.n_in} dmin={cb.min_pairwise_ed} seed={cb.seed} delta_in={cb.delta_in}"
    if cb.buffer_window is not None:
        head += f" buffer_window={cb.buffer_window} buffer_weight={cb.buffer_weight}"
    lines = [head] + [f"{m} {cb.table[m]}" for m in sorted(cb.table)]
    Path(path).write_text("\n".join(lines) + "\n")


def load_codebook(path, delta_in: Optional[float] = None) -> InnerCodebook:
    lines = Path(path).read_text().splitlines()
    head = dict(tok.split("=", 1) for tok in lines[0].split())
    t, n_in = int(head["t"]), int(head["n"])
    if delta_in is None:
        delta_in = float(head["delta_in"])
    table = {}
    for ln in lines[1:]:
        if not ln.strip():
            continue
        msg, cw = ln.split()
        table[BitString(msg)] = BitString(cw)
    bw = head.get("buffer_window")
    cb = InnerCodebook(
        t=t,
        n_in=n_in,
        table=table,
        min_pairwise_ed=int(head["dmin"]),
        delta_in=delta_in,
        seed=int(head["seed"]),
        density_window=density_window(t),
        buffer_window=int(bw) if bw is not None else None,
        buffer_weight=int(head.get("buffer_weight", 0)),
    )
    verify_codebook(cb)
    return cb
