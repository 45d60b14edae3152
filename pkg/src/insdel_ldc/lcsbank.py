"""Vectorised LCS lengths of one query word against many fixed-length words.

Each stored word of length ``L`` is a row of ``ceil(L / 64)`` uint64 lanes;
the Allison-Dix / Hyyro bit-vector recurrence runs on all rows at once, one
step per query character.
"""

from __future__ import annotations

import numpy as np

_LANE = 64
_ONE = np.uint64(1)


class LcsBank:
    def __init__(self, length: int):
        if length < 1:
            raise ValueError("word length must be positive")
        self.length = length
        self.lanes = -(-length // _LANE)
        top_bits = length - _LANE * (self.lanes - 1)
        self._top_mask = np.uint64((1 << top_bits) - 1) if top_bits < _LANE else np.uint64(2**64 - 1)
        self._rows = 0
        self._cap = 16
        self._m0 = np.zeros((self._cap, self.lanes), dtype=np.uint64)
        self._m1 = np.zeros((self._cap, self.lanes), dtype=np.uint64)
        self.words: list[str] = []

    def __len__(self) -> int:
        return self._rows

    def _masks(self, word: str) -> tuple[np.ndarray, np.ndarray]:
        ones = int(word[::-1], 2)  # bit p set iff word[p] == '1'
        zeros = ones ^ ((1 << self.length) - 1)
        m0 = np.array([(zeros >> (_LANE * k)) & (2**64 - 1) for k in range(self.lanes)], dtype=np.uint64)
        m1 = np.array([(ones >> (_LANE * k)) & (2**64 - 1) for k in range(self.lanes)], dtype=np.uint64)
        return m0, m1

    def add(self, word: str) -> None:
        if len(word) != self.length:
            raise ValueError(f"word length {len(word)} != {self.length}")
        if self._rows == self._cap:
            self._cap *= 2
            self._m0 = np.resize(self._m0, (self._cap, self.lanes))
            self._m1 = np.resize(self._m1, (self._cap, self.lanes))
        m0, m1 = self._masks(word)
        self._m0[self._rows] = m0
        self._m1[self._rows] = m1
        self._rows += 1
        self.words.append(word)

    def lcs(self, query: str) -> np.ndarray:
        """LCS length between ``query`` and every stored word."""
        rows = self._rows
        if rows == 0:
            return np.zeros(0, dtype=np.int64)
        m0, m1 = self._m0[:rows], self._m1[:rows]
        v = np.full((rows, self.lanes), np.uint64(2**64 - 1), dtype=np.uint64)
        v[:, -1] = self._top_mask
        with np.errstate(over="ignore"):
            for c in query:
                u = v & (m1 if c == "1" else m0)
                # v + u with carries rippling across lanes; v - u == v ^ u since u is a subset of v
                s = np.empty_like(v)
                carry = np.zeros(rows, dtype=np.uint64)
                for k in range(self.lanes):
                    a = v[:, k] + u[:, k]
                    c1 = (a < v[:, k]).astype(np.uint64)
                    b = a + carry
                    c2 = (b < a).astype(np.uint64)
                    s[:, k] = b
                    carry = c1 | c2
                v = s | (v ^ u)
                v[:, -1] &= self._top_mask
        zeros_left = np.zeros(rows, dtype=np.int64)
        for k in range(self.lanes):
            zeros_left += _popcount(v[:, k])
        return self.length - zeros_left

    def distances(self, query: str) -> np.ndarray:
        """Insertion/deletion distance between ``query`` and every stored word."""
        return len(query) + self.length - 2 * self.lcs(query)


def _popcount(a: np.ndarray) -> np.ndarray:
    if hasattr(np, "bitwise_count"):
        return np.bitwise_count(a).astype(np.int64)
    a = a.copy()
    out = np.zeros(a.shape, dtype=np.int64)
    while a.any():
        out += (a & _ONE).astype(np.int64)
        a >>= _ONE
    return out
