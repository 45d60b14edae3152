"""Buffered concatenation encoder.

``c = (0^L Y_1 0^L) (0^L Y_2 0^L) ... (0^L Y_d 0^L)`` with
``Y_i = Enc_in(bin(i) + b_i)`` and ``b_i`` the i-th group of ``tau`` outer
symbols; ``L`` is the buffer length ``ceil(alpha * tau)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .bitstring import BitString
from .inner import InnerCodebook, build_codebook, enc_in
from .outer import ConfigurationError, make_outer
from .params import CodeParams, derive_params, plan_geometry


def pad_index(i: int, width: int) -> str:
    """Big-endian ``width``-bit encoding of the block index ``i``."""
    if not 0 <= i < 2**width:
        raise ValueError(f"index {i} does not fit in {width} bits")
    return format(i, f"0{width}b")


def inner_message(p: CodeParams, block: int, symbols: Sequence[int]) -> BitString:
    if len(symbols) != p.tau:
        raise ValueError(f"block carries {len(symbols)} symbols, expected {p.tau}")
    body = "".join(format(s, f"0{p.sigma_bits}b") for s in symbols)
    return BitString(pad_index(block, p.index_bits) + body)


def parse_inner_message(p: CodeParams, msg: str) -> tuple:
    """Split a decoded inner message into ``(block index, symbols)``."""
    j = int(msg[: p.index_bits], 2)
    body = msg[p.index_bits:]
    sb = p.sigma_bits
    return j, tuple(int(body[r * sb:(r + 1) * sb], 2) for r in range(p.tau))


def check_compatible(p: CodeParams, cb: InnerCodebook, outer) -> None:
    if cb.t != p.t or cb.n_in != p.n_in:
        raise ConfigurationError(f"codebook (t={cb.t}, n={cb.n_in}) does not match params (t={p.t}, n={p.n_in})")
    if outer.spec.m != p.m or outer.spec.k != p.k or outer.spec.sigma_bits != p.sigma_bits:
        raise ConfigurationError("outer code does not match params")


def outer_blocks(p: CodeParams, s: Sequence[int]) -> list:
    return [tuple(s[(i - 1) * p.tau:i * p.tau]) for i in range(1, p.d + 1)]


def encode(p: CodeParams, x: Sequence[int], cb: InnerCodebook, outer) -> BitString:
    check_compatible(p, cb, outer)
    s = outer.encode(x)
    buf = "0" * p.buffer_len
    parts = []
    for i, b in enumerate(outer_blocks(p, s), 1):
        parts.append(buf + enc_in(cb, inner_message(p, i, b)) + buf)
    return BitString("".join(parts))


def block_span(p: CodeParams, j: int) -> tuple:
    """1-based half-open ``[lo, hi)`` of block ``j`` in an uncorrupted codeword."""
    lo = (j - 1) * p.block_len + 1
    return lo, lo + p.block_len


# ------------------------------------------------------------------ bundles


@dataclass
class Code:
    params: CodeParams
    codebook: InnerCodebook
    outer: object

    def encode(self, x: Sequence[int]) -> BitString:
        return encode(self.params, x, self.codebook, self.outer)

    def blocks(self, x: Sequence[int]) -> list:
        """Outer symbol blocks ``b_1 .. b_d`` for message ``x``."""
        return outer_blocks(self.params, self.outer.encode(x))


_OVERRIDE_KEYS = ("gamma", "theta", "delta_b", "alpha", "tau", "eta", "C_mult", "N_mult",
                  "eps_fail", "buffer_window", "lcc_buffer_width", "seed", "strict")


def build_code(config: dict, codebook: Optional[InnerCodebook] = None) -> Code:
    """Codebook, outer code and parameters from a parameter-file dictionary."""
    cfg = dict(config)
    k = int(cfg["k"])
    sigma_bits = int(cfg.get("sigma_bits", 1))
    delta_in = float(cfg.get("delta_in", 0.05))
    delta_out = float(cfg.get("delta_out", 0.1))
    overrides = {key: cfg[key] for key in _OVERRIDE_KEYS if cfg.get(key) is not None}
    outer = make_outer(cfg.get("outer", "hadamard"), k, delta_out)
    if codebook is None:
        geo = plan_geometry(
            k, sigma_bits, delta_in=delta_in, gamma=float(cfg.get("gamma", 1 / 12)),
            delta_b=float(cfg.get("delta_b", 1 / 6)), alpha=cfg.get("alpha"), tau=cfg.get("tau"),
            buffer_window=cfg.get("buffer_window"),
        )
        beta_in = cfg.get("beta_in")
        codebook = build_codebook(
            geo.t,
            delta_in,
            int(beta_in if beta_in is not None else cfg.get("beta_in_max", 16)),
            int(cfg.get("seed", 0)),
            beta_in_min=int(beta_in if beta_in is not None else cfg.get("beta_in_min", 1)),
            buffer_window=geo.buffer_window,
            buffer_weight=geo.buffer_weight,
        )
    p = derive_params(delta_in, delta_out, sigma_bits, k, codebook.beta_in, overrides)
    code = Code(p, codebook, outer)
    check_compatible(p, codebook, outer)
    return code


def desk_config(k: int = 4, tau: Optional[int] = None, **extra) -> dict:
    """Parameter set that makes every component non-degenerate at small m.

    Three-bit buffers (so zero runs in codewords are capped at two), inner
    codewords of at least 66 bits so a block is mostly codeword, and the
    asymptotic constraints on alpha reported rather than enforced.
    """
    geo_tau = tau if tau is not None else (2**k).bit_length() - 1
    cfg = {
        "k": k,
        "sigma_bits": 1,
        "delta_in": 0.05,
        "delta_out": 0.1,
        "alpha": 3 / geo_tau,
        "tau": tau,
        "beta_in_min": None,
        "beta_in_max": 40,
        "strict": False,
        "seed": 7,
        "outer": "hadamard",
    }
    t = plan_geometry(k, 1, alpha=cfg["alpha"], tau=tau).t
    cfg["beta_in_min"] = -(-66 // t)
    cfg.update(extra)
    return cfg


def load_code(config: dict, codebook_path=None) -> Code:
    """Like :func:`build_code`, reading a cached codebook file when given."""
    if codebook_path is None:
        return build_code(config)
    from .inner import load_codebook

    return build_code(config, load_codebook(codebook_path, delta_in=float(config.get("delta_in", 0.05))))
