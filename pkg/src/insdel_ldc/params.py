"""Code parameters: geometry, constants and their admissibility constraints."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, fields, replace
from pathlib import Path
from typing import Optional

GAMMA = 1 / 12
THETA = 1 / 51
DELTA_B = 1 / 6
_EPS = 1e-12


class ParameterError(ValueError):
    pass


class GeometryError(ValueError):
    pass


@dataclass(frozen=True)
class Geometry:
    m: int
    tau: int
    d: int
    index_bits: int
    t: int
    buffer_len: int
    buffer_window: int
    buffer_weight: int


def plan_geometry(
    k: int,
    sigma_bits: int = 1,
    *,
    delta_in: float = 0.05,
    gamma: float = GAMMA,
    delta_b: float = DELTA_B,
    alpha: Optional[float] = None,
    tau: Optional[int] = None,
    m: Optional[int] = None,
    buffer_window: Optional[int] = None,
) -> Geometry:
    """Block layout implied by the outer length ``m`` (``2**k`` by default).

    Blocks hold ``tau = log2 m`` outer symbols unless ``tau`` is given; the
    index field is ``max(tau, bit_length(d))`` bits so that capped block sizes
    still carry every block index.
    """
    if sigma_bits < 1 or int(sigma_bits) != sigma_bits:
        raise GeometryError("sigma_bits must be a positive integer")
    if m is None:
        m = 2**k
    if tau is None:
        lg = math.log2(m)
        if lg != int(lg):
            raise GeometryError(f"m = {m} is not a power of two")
        tau = int(lg)
    if tau < 2:
        raise GeometryError(f"tau = {tau} < 2")
    if m % tau:
        raise GeometryError(f"tau = {tau} does not divide m = {m}")
    d = m // tau
    index_bits = max(tau, d.bit_length())
    if alpha is None:
        alpha = default_alpha(delta_in, gamma)
    buffer_len = max(1, math.ceil(alpha * tau - 1e-9))
    window = buffer_len if buffer_window is None else int(buffer_window)
    if window < 1:
        raise GeometryError("buffer window must be positive")
    # weight <= delta_b * buffer_len / 2 is the same test as ED(w, 0^W) <= delta_b * buffer_len
    weight = math.floor(delta_b * buffer_len / 2 + 1e-9)
    return Geometry(m, tau, d, index_bits, index_bits + sigma_bits * tau, buffer_len, window, weight)


def default_alpha(delta_in: float, gamma: float = GAMMA) -> float:
    return 2 * gamma * delta_in / (gamma + 6)


def shrink_factor(beta: float, gamma: float) -> float:
    return min(0.25 * (beta - gamma) / (beta + gamma), 1 - 0.75 * (beta + gamma) / (beta - gamma))


def insdel_fraction(delta_out: float, alpha: float, gamma: float, beta: float, theta: float) -> float:
    return delta_out * alpha * gamma / (2 * beta * (1 + 1 / theta))


@dataclass(frozen=True)
class CodeParams:
    # geometry
    k: int
    m: int
    sigma_bits: int
    tau: int
    d: int
    index_bits: int
    t: int
    beta_in: int
    n_in: int
    buffer_len: int
    block_len: int
    n: int
    # constants (alpha, beta are the nominal real-valued ones)
    alpha: float
    beta: float
    gamma: float
    theta: float
    delta_b: float
    delta_in: float
    delta_out: float
    # values used at run time, computed from the integer lengths
    alpha_eff: float
    beta_eff: float
    delta: float
    rho: float
    C: float
    C_mult: float
    eta: int
    buffer_window: int
    buffer_weight: int
    lcc_buffer_width: int
    N_mult: float
    eps_fail: float
    seed: int
    strict: bool
    violations: tuple = field(default=())

    def sample_count(self, n_prime: int) -> int:
        """Samples per noisy-binary-search round for a word of length ``n_prime``."""
        floor = 36 * math.ceil(math.log(1 / self.eps_fail))
        lg = math.log2(max(n_prime, 2))
        return max(floor, math.ceil(self.N_mult * math.ceil(lg * lg)))

    def budget(self, delta: Optional[float] = None) -> int:
        """Number of insdel operations allowed at fraction ``delta``: floor(2 n delta)."""
        if delta is None:
            delta = self.delta
        return math.floor(2 * self.n * delta + 1e-9)

    @property
    def good_threshold(self) -> float:
        return self.gamma * self.alpha_eff * self.tau

    def max_depth(self, n_prime: int) -> int:
        if n_prime <= self.C:
            return 1
        return math.ceil(math.log(n_prime / self.C) / math.log(1 / (1 - self.rho))) + 1

    def with_overrides(self, **kw) -> "CodeParams":
        return replace(self, **kw)


def check_constraints(p: "CodeParams") -> list:
    """Names of the violated admissibility inequalities, in a fixed order."""
    a, b, g, th, db, din = p.alpha, p.beta, p.gamma, p.theta, p.delta_b, p.delta_in
    checks = [
        ("gamma <= 1/12 and theta < 1/50", g <= 1 / 12 + _EPS and th < 1 / 50),
        ("(beta+gamma)/(beta-gamma) < 4/3", b > g and (b + g) / (b - g) < 4 / 3),
        ("alpha <= 2*gamma/(gamma+6)", a <= 2 * g / (g + 6) + _EPS),
        ("alpha*(1+3*gamma)/(beta-2*alpha) < delta_in", b > 2 * a and a * (1 + 3 * g) / (b - 2 * a) < din),
        ("gamma < delta_b < 1/2", g < db < 0.5),
        (
            "(5*delta_b+3*gamma)*alpha/(beta-2*alpha) <= delta_in",
            b > 2 * a and (5 * db + 3 * g) * a / (b - 2 * a) <= din + _EPS,
        ),
        ("rho > 0", p.rho > 0),
    ]
    return [name for name, ok in checks if not ok]


def derive_params(
    delta_in: float,
    delta_out: float,
    sigma_bits: int,
    k: int,
    beta_in: int,
    overrides: Optional[dict] = None,
) -> CodeParams:
    """Fill in every constant and check the admissibility inequalities.

    Recognised overrides: gamma, theta, delta_b, alpha, tau, m, eta, C_mult,
    N_mult, eps_fail, buffer_window, lcc_buffer_width, seed, strict. With
    ``strict`` (the default) a violated inequality raises ParameterError;
    otherwise it is recorded in ``violations``.
    """
    ov = dict(overrides or {})
    unknown = set(ov) - _OVERRIDES
    if unknown:
        raise ParameterError(f"unknown overrides: {sorted(unknown)}")
    if not (delta_in > 0 and delta_out > 0 and beta_in >= 1):
        raise ParameterError("delta_in, delta_out must be positive and beta_in >= 1")
    gamma = float(ov.get("gamma", GAMMA))
    theta = float(ov.get("theta", THETA))
    delta_b = float(ov.get("delta_b", DELTA_B))
    alpha = float(ov["alpha"]) if ov.get("alpha") is not None else default_alpha(delta_in, gamma)
    geo = plan_geometry(
        k,
        sigma_bits,
        delta_in=delta_in,
        gamma=gamma,
        delta_b=delta_b,
        alpha=alpha,
        tau=ov.get("tau"),
        m=ov.get("m"),
        buffer_window=ov.get("buffer_window"),
    )
    tau = geo.tau
    n_in = beta_in * geo.t
    block_len = 2 * geo.buffer_len + n_in
    beta = 2 * alpha + n_in / tau
    alpha_eff = geo.buffer_len / tau
    beta_eff = block_len / tau
    rho = shrink_factor(beta_eff, gamma)
    C_mult = float(ov.get("C_mult", 36))
    strict = _as_bool(ov.get("strict", True))
    p = CodeParams(
        k=k,
        m=geo.m,
        sigma_bits=sigma_bits,
        tau=tau,
        d=geo.d,
        index_bits=geo.index_bits,
        t=geo.t,
        beta_in=beta_in,
        n_in=n_in,
        buffer_len=geo.buffer_len,
        block_len=block_len,
        n=geo.d * block_len,
        alpha=alpha,
        beta=beta,
        gamma=gamma,
        theta=theta,
        delta_b=delta_b,
        delta_in=delta_in,
        delta_out=delta_out,
        alpha_eff=alpha_eff,
        beta_eff=beta_eff,
        delta=insdel_fraction(delta_out, alpha_eff, gamma, beta_eff, theta),
        rho=rho,
        C=C_mult * (beta_eff + gamma) * tau,
        C_mult=C_mult,
        eta=int(ov.get("eta", math.ceil(beta_eff) + 1)),
        buffer_window=geo.buffer_window,
        buffer_weight=geo.buffer_weight,
        lcc_buffer_width=int(ov.get("lcc_buffer_width", geo.buffer_len)),
        N_mult=float(ov.get("N_mult", 1)),
        eps_fail=float(ov.get("eps_fail", 1e-6)),
        seed=int(ov.get("seed", 0)),
        strict=strict,
    )
    bad = check_constraints(p)
    if bad and strict:
        raise ParameterError(f"violated: {bad[0]}" + (f" (and {len(bad) - 1} more)" if len(bad) > 1 else ""))
    return replace(p, violations=tuple(bad))


_OVERRIDES = {
    "gamma", "theta", "delta_b", "alpha", "tau", "m", "eta", "C_mult", "N_mult",
    "eps_fail", "buffer_window", "lcc_buffer_width", "seed", "strict",
}


def _as_bool(v) -> bool:
    if isinstance(v, str):
        return v.strip().lower() in ("1", "true", "yes", "on")
    return bool(v)


# ----------------------------------------------------------- parameter files

# keys read from a parameter file; everything else in it is an error
FILE_KEYS = {
    "delta_in": float, "delta_out": float, "gamma": float, "theta": float, "delta_b": float,
    "alpha": float, "beta_in": int, "sigma_bits": int, "k": int, "eta": int, "N_mult": float,
    "seed": int, "tau": int, "C_mult": float, "eps_fail": float, "buffer_window": int,
    "lcc_buffer_width": int, "strict": _as_bool, "beta_in_min": int, "beta_in_max": int,
    "outer": str,
}


def read_param_file(path) -> dict:
    out = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = (s.strip() for s in line.partition("="))
        if not sep or key not in FILE_KEYS:
            raise ParameterError(f"{path}:{lineno}: bad parameter line {raw!r}")
        out[key] = FILE_KEYS[key](value)
    return out


def write_param_file(values: dict, path) -> None:
    lines = [f"{k} = {v}" for k, v in values.items() if v is not None]
    Path(path).write_text("\n".join(lines) + "\n")


def params_summary(p: CodeParams) -> str:
    return "\n".join(f"{f.name} = {getattr(p, f.name)}" for f in fields(p))
