"""Bit strings, insertion/deletion edit distance and edit scripts.

Positions are 1-based and intervals are half-open ``[lo, hi)``, so that
``BitString.window(Interval(1, len(x) + 1))`` is the whole string.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Optional, Union


class RangeError(IndexError):
    pass


class ScriptError(ValueError):
    pass


class BitString(str):
    """An immutable string over ``{'0', '1'}`` with 1-based accessors.

    It is a ``str`` subclass, so slicing, hashing and comparison are the
    native (0-based) string operations; ``bit`` and ``window`` are the
    1-based views used by the coding algorithms.
    """

    __slots__ = ()

    def __new__(cls, bits: Union[str, Iterable[int]] = ""):
        if not isinstance(bits, str):
            bits = "".join("1" if b else "0" for b in bits)
        if bits.strip("01"):
            raise ValueError(f"not a bit string: {bits[:40]!r}")
        return super().__new__(cls, bits)

    @classmethod
    def zeros(cls, k: int) -> "BitString":
        return cls("0" * k)

    def bit(self, i: int) -> int:
        if not 1 <= i <= len(self):
            raise RangeError(f"position {i} outside [1, {len(self)}]")
        return 1 if self[i - 1] == "1" else 0

    def window(self, iv: "Interval") -> "BitString":
        check_window(iv, len(self))
        return BitString(str.__getitem__(self, slice(iv.lo - 1, iv.hi - 1)))

    def weight(self) -> int:
        return self.count("1")

    def to_list(self) -> list[int]:
        return [1 if c == "1" else 0 for c in self]


@dataclass(frozen=True)
class Interval:
    """Half-open index interval ``[lo, hi)``."""

    lo: int
    hi: int

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError(f"empty-reversed interval [{self.lo}, {self.hi})")

    def __len__(self) -> int:
        return self.hi - self.lo

    def __contains__(self, i: int) -> bool:
        return self.lo <= i < self.hi

    def __iter__(self) -> Iterator[int]:
        return iter(range(self.lo, self.hi))

    @property
    def empty(self) -> bool:
        return self.lo == self.hi


def check_window(iv: Interval, length: int) -> None:
    if iv.lo < 1 or iv.hi > length + 1:
        raise RangeError(f"window [{iv.lo}, {iv.hi}) not inside [1, {length + 1})")


def hamming_weight(x: str, window: Optional[Interval] = None) -> int:
    """Number of 1-bits of ``x`` inside ``window`` (the whole string if None)."""
    if window is None:
        return x.count("1")
    check_window(window, len(x))
    return x.count("1", window.lo - 1, window.hi - 1)


def edit_distance(x: str, y: str, bound: Optional[int] = None) -> int:
    """Insertion/deletion distance between ``x`` and ``y``.

    Substitutions are not primitive operations, so this equals
    ``|x| + |y| - 2 * LCS(x, y)``.

    With ``bound`` given, only the diagonal band of width ``bound`` is
    filled and the result is ``min(ED(x, y), bound + 1)``.
    """
    n, m = len(x), len(y)
    if x == y:
        return 0
    if bound is not None:
        if bound < 0:
            raise ValueError("bound must be non-negative")
        if abs(n - m) > bound:
            return bound + 1
        return _banded_distance(x, y, bound)
    if n == 0 or m == 0:
        return n + m
    prev = list(range(m + 1))
    for i in range(1, n + 1):
        xi = x[i - 1]
        cur = [i] + [0] * m
        for j in range(1, m + 1):
            if xi == y[j - 1]:
                cur[j] = prev[j - 1]
            else:
                a, b = prev[j], cur[j - 1]
                cur[j] = (a if a < b else b) + 1
        prev = cur
    return prev[m]


def _banded_distance(x: str, y: str, bound: int) -> int:
    n, m = len(x), len(y)
    cap = bound + 1
    # row i holds columns j in [i - bound, i + bound]; out-of-band cells are cap
    prev = {j: j for j in range(0, min(m, bound) + 1)}
    for i in range(1, n + 1):
        xi = x[i - 1]
        lo, hi = max(0, i - bound), min(m, i + bound)
        cur = {}
        for j in range(lo, hi + 1):
            if j == 0:
                cur[0] = i if i <= bound else cap
                continue
            if xi == y[j - 1]:
                v = prev.get(j - 1, cap)
            else:
                v = min(prev.get(j, cap), cur.get(j - 1, cap)) + 1
            cur[j] = v if v < cap else cap
        prev = cur
    return min(prev.get(m, cap), cap)


def lcs_length(x: str, y: str) -> int:
    """Length of a longest common subsequence (bit-parallel over ``y``)."""
    m = len(y)
    if m == 0 or not x:
        return 0
    full = (1 << m) - 1
    masks = {"0": 0, "1": 0}
    for pos, c in enumerate(y):
        masks[c] |= 1 << pos
    v = full
    for c in x:
        u = v & masks[c]
        v = ((v + u) | (v - u)) & full
    return m - bin(v).count("1")


# ---------------------------------------------------------------- edit scripts


@dataclass(frozen=True)
class Insert:
    position: int
    bit: int
    block: Optional[int] = None


@dataclass(frozen=True)
class Delete:
    position: int
    block: Optional[int] = None


EditOp = Union[Insert, Delete]


@dataclass(frozen=True)
class EditScript:
    """Sequentially interpreted insertions and deletions.

    ``Insert(p, b)`` makes ``b`` the new p-th symbol, ``p`` in ``[1, len+1]``;
    ``Delete(p)`` removes the p-th symbol, ``p`` in ``[1, len]``.
    """

    ops: tuple = ()

    def __len__(self) -> int:
        return len(self.ops)

    def __iter__(self) -> Iterator[EditOp]:
        return iter(self.ops)

    @property
    def inserts(self) -> int:
        return sum(isinstance(op, Insert) for op in self.ops)

    @property
    def deletes(self) -> int:
        return sum(isinstance(op, Delete) for op in self.ops)


def apply_edit_script(x: str, script: Iterable[EditOp]) -> BitString:
    buf = list(x)
    for k, op in enumerate(script):
        if isinstance(op, Insert):
            if not 1 <= op.position <= len(buf) + 1:
                raise ScriptError(f"op {k}: insert at {op.position} with length {len(buf)}")
            if op.bit not in (0, 1):
                raise ScriptError(f"op {k}: bad bit {op.bit!r}")
            buf.insert(op.position - 1, "1" if op.bit else "0")
        elif isinstance(op, Delete):
            if not 1 <= op.position <= len(buf):
                raise ScriptError(f"op {k}: delete at {op.position} with length {len(buf)}")
            del buf[op.position - 1]
        else:
            raise ScriptError(f"op {k}: unknown operation {op!r}")
    return BitString("".join(buf))


# ---------------------------------------------------------------- text formats


def format_bits(x: str) -> str:
    return f"{x}\n"


def parse_bits(text: str) -> BitString:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if len(lines) != 1:
        raise ValueError(f"expected one bit line, got {len(lines)}")
    return BitString(lines[0])


def format_op(op: EditOp) -> str:
    if isinstance(op, Insert):
        s = f"I {op.position} {op.bit}"
    else:
        s = f"D {op.position}"
    if op.block is not None:
        s += f" # block={op.block}"
    return s


def parse_op(line: str) -> EditOp:
    body, _, comment = line.partition("#")
    block = None
    comment = comment.strip()
    if comment:
        if not comment.startswith("block="):
            raise ScriptError(f"bad annotation: {line!r}")
        block = int(comment[len("block="):])
    parts = body.split()
    if parts and parts[0] == "I" and len(parts) == 3:
        return Insert(int(parts[1]), int(parts[2]), block)
    if parts and parts[0] == "D" and len(parts) == 2:
        return Delete(int(parts[1]), block)
    raise ScriptError(f"bad edit line: {line!r}")


def format_script(script: Iterable[EditOp]) -> str:
    return "".join(format_op(op) + "\n" for op in script)


def parse_script(text: str) -> EditScript:
    ops = [parse_op(ln) for ln in text.splitlines() if ln.strip()]
    return EditScript(tuple(ops))
