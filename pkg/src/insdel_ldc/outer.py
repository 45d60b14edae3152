"""Hamming locally decodable/correctable outer codes.

Oracles map a 1-based codeword position to a symbol or to ``BOTTOM``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Callable, Sequence, Union


class _Bottom:
    __slots__ = ()

    def __repr__(self) -> str:
        return "BOTTOM"

    def __reduce__(self):
        return (_bottom, ())


def _bottom():
    return BOTTOM


BOTTOM = _Bottom()
SymbolOrBottom = Union[int, _Bottom]
Oracle = Callable[[int], SymbolOrBottom]


class ConfigurationError(ValueError):
    pass


@dataclass(frozen=True)
class OuterCodeSpec:
    k: int
    m: int
    sigma_bits: int
    locality: int
    delta_out: float
    epsilon_out: float

    def __post_init__(self):
        if self.locality < 1:
            raise ValueError("locality must be at least 1")
        if not self.delta_out > 0:
            raise ValueError("delta_out must be positive")
        if not 0 < self.epsilon_out <= 0.5:
            raise ValueError("epsilon_out must lie in (0, 1/2]")


class HadamardCode:
    """Binary Hadamard code: position ``a + 1`` carries ``<x, a> mod 2``.

    ``a`` runs over ``{0,1}^k`` in increasing binary order with ``x_1`` as
    the most significant coordinate, so ``101 -> 01011010``.
    """

    name = "hadamard"

    def __init__(self, k: int, delta_out: float = 0.1):
        if k < 1:
            raise ValueError("k must be positive")
        if not 0 < delta_out < 0.25:
            raise ValueError("Hadamard decoding needs 0 < delta_out < 1/4")
        self.spec = OuterCodeSpec(
            k=k, m=2**k, sigma_bits=1, locality=2, delta_out=delta_out, epsilon_out=0.5 - 2 * delta_out
        )

    @property
    def k(self) -> int:
        return self.spec.k

    @property
    def m(self) -> int:
        return self.spec.m

    def encode(self, x: Sequence[int]) -> list:
        k = self.k
        if len(x) != k:
            raise ValueError(f"message length {len(x)} != k = {k}")
        xv = 0
        for b in x:
            if b not in (0, 1):
                raise ValueError(f"not a bit: {b!r}")
            xv = (xv << 1) | b
        return [bin(xv & a).count("1") & 1 for a in range(self.m)]

    def _unit(self, i: int) -> int:
        return 1 << (self.k - i)

    def _two_queries(self, a: int, shift: int, oracle: Oracle, rng: random.Random):
        q1, q2 = a + 1, (a ^ shift) + 1
        s1, s2 = oracle(q1), oracle(q2)
        trace = [q1, q2]
        if s1 is BOTTOM or s2 is BOTTOM:
            return rng.randrange(2), trace
        return s1 ^ s2, trace

    def decode(self, i: int, oracle: Oracle, rng: random.Random):
        """Recover ``x_i`` (1-based) with two queries; returns ``(bit, queries)``."""
        if not 1 <= i <= self.k:
            raise ValueError(f"index {i} outside [1, {self.k}]")
        a = rng.randrange(self.m)
        return self._two_queries(a, self._unit(i), oracle, rng)

    def correct(self, q: int, oracle: Oracle, rng: random.Random):
        """Recover codeword position ``q`` (1-based) with two queries."""
        if not 1 <= q <= self.m:
            raise ValueError(f"position {q} outside [1, {self.m}]")
        a = rng.randrange(self.m)
        return self._two_queries(a, q - 1, oracle, rng)


OUTER_CODES = {"hadamard": HadamardCode}


def make_outer(name: str, k: int, delta_out: float):
    try:
        cls = OUTER_CODES[name]
    except KeyError:
        raise ConfigurationError(f"unknown outer code {name!r}; known: {sorted(OUTER_CODES)}") from None
    return cls(k, delta_out)


def format_symbols(symbols: Sequence[int], sigma_bits: int = 1) -> str:
    if sigma_bits == 1:
        return "".join(str(s) for s in symbols) + "\n"
    width = -(-sigma_bits // 4)
    return " ".join(format(s, f"0{width}x") for s in symbols) + "\n"


def parse_symbols(text: str, sigma_bits: int = 1) -> list:
    body = text.strip()
    if sigma_bits == 1:
        if body.strip("01"):
            raise ValueError("expected an ASCII bit line")
        return [int(c) for c in body]
    return [int(tok, 16) for tok in body.split()]
