"""Trial harness: encode, corrupt, decode, analyze and aggregate."""

from __future__ import annotations

import csv
import io
import math
import random
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from .channel import STRATEGIES, corrupt
from .decoder import DecodeSession, SearchTrace, WordOracle, noisy_binary_search
from .encoder import Code, build_code, desk_config
from .goodness import analyze, invariant_steps
from .outer import ConfigurationError
from .params import read_param_file

CSV_FIELDS = ("trial", "seed", "strategy", "delta", "index", "expected", "decoded",
              "success", "queries", "depth", "locally_good")
MODES = ("ldc", "lcc", "both")


@dataclass
class ExperimentConfig:
    code: dict
    strategies: tuple = ("none",)
    deltas: tuple = (0.0,)
    trials: int = 200
    seed: int = 0
    mode: str = "ldc"
    targets: Optional[tuple] = None
    lcc_samples: int = 8
    allow_overbudget: bool = False
    csv_path: Optional[str] = None
    summary_path: Optional[str] = None

    def __post_init__(self):
        if self.trials < 1:
            raise ConfigurationError("trials must be at least 1")
        if self.mode not in MODES:
            raise ConfigurationError(f"unknown mode {self.mode!r}")
        for s in self.strategies:
            if s not in STRATEGIES:
                raise ConfigurationError(f"unknown strategy {s!r}")


@dataclass
class TrialRecord:
    trial: int
    seed: str
    strategy: str
    delta: float
    index: str
    expected: int
    decoded: int
    success: bool
    queries: int
    depth: int
    locally_good: bool

    def row(self) -> list:
        return [self.trial, self.seed, self.strategy, repr(self.delta), self.index, self.expected,
                self.decoded, int(self.success), self.queries, self.depth, int(self.locally_good)]


@dataclass
class ExperimentResult:
    records: list
    summary: dict
    oracle_total: int


def _targets(cfg: ExperimentConfig, code: Code, rng: random.Random) -> list:
    p = code.params
    out = []
    if cfg.mode in ("ldc", "both"):
        idx = cfg.targets if cfg.targets and cfg.mode == "ldc" else range(1, p.k + 1)
        out += [("ldc", int(i)) for i in idx]
    if cfg.mode in ("lcc", "both"):
        if cfg.targets and cfg.mode == "lcc":
            out += [("lcc", int(j)) for j in cfg.targets]
        else:
            out += [("lcc", j) for j in sorted(rng.sample(range(1, p.n + 1), min(cfg.lcc_samples, p.n)))]
    return out


def run_experiment(cfg: ExperimentConfig, code: Optional[Code] = None) -> ExperimentResult:
    if code is None:
        code = build_code(cfg.code)
    p = code.params
    for delta in cfg.deltas:
        if delta < 0:
            raise ConfigurationError("delta must be non-negative")
        if delta > p.delta + 1e-15 and not cfg.allow_overbudget:
            raise ConfigurationError(f"delta {delta} exceeds the derived fraction {p.delta:.3g}; "
                                     "set allow_overbudget to run it anyway")
    records = []
    oracle_total = 0
    for strategy in cfg.strategies:
        for delta in cfg.deltas:
            for t in range(cfg.trials):
                tseed = f"{cfg.seed}:{strategy}:{delta!r}:{t}"
                rng = random.Random(f"trial:{tseed}")
                x = [rng.randrange(2) for _ in range(p.k)]
                c = code.encode(x)
                trial = corrupt(c, p, strategy, tseed, delta=delta)
                report = analyze(c, trial, p, delta)
                root = WordOracle(trial.corrupted)
                for mode, target in _targets(cfg, code, rng):
                    sess = DecodeSession(trial.corrupted, p, code.codebook, code.outer,
                                         f"{tseed}:{mode}:{target}", oracle=root)
                    if mode == "ldc":
                        expected, got = x[target - 1], sess.ldc(target)
                        blocks = {tr.target for tr in sess.traces}
                    else:
                        expected, got = int(c[target - 1]), sess.lcc(target)
                        blocks = {(target - 1) // p.block_len + 1}
                    records.append(TrialRecord(
                        trial=t, seed=tseed, strategy=strategy, delta=delta,
                        index=f"{mode}:{target}", expected=expected, decoded=got,
                        success=expected == got, queries=sess.queries, depth=sess.depth,
                        locally_good=all(report.locally_good[b - 1] for b in blocks),
                    ))
                oracle_total += root.queries
    summary = summarize(records)
    summary["oracle_queries"] = oracle_total
    return ExperimentResult(records, summary, oracle_total)


def _rate(rs) -> float:
    return sum(r.success for r in rs) / len(rs) if rs else float("nan")


def summarize(records: list) -> dict:
    out: dict = {"records": len(records)}
    out["success_rate"] = _rate(records)
    good = [r for r in records if r.locally_good]
    out["locally_good_records"] = len(good)
    out["success_rate_locally_good"] = _rate(good)
    out["success_rate_not_locally_good"] = _rate([r for r in records if not r.locally_good])
    q = np.array([r.queries for r in records]) if records else np.array([0])
    for name, val in (("queries_p50", 50), ("queries_p90", 90), ("queries_p99", 99)):
        out[name] = float(np.percentile(q, val))
    out["queries_max"] = int(q.max())
    out["queries_total"] = int(q.sum())
    out["depth_max"] = max((r.depth for r in records), default=0)
    cells: dict = {}
    for r in records:
        cells.setdefault((r.strategy, r.delta), []).append(r)
    for (s, d), rs in sorted(cells.items(), key=lambda kv: (kv[0][0], kv[0][1])):
        out[f"success_rate[{s},{d!r}]"] = _rate(rs)
    return out


def records_csv(records: list) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_FIELDS)
    for r in records:
        w.writerow(r.row())
    return buf.getvalue()


def summary_text(summary: dict) -> str:
    lines = []
    for k, v in summary.items():
        lines.append(f"{k} = {v:.6g}" if isinstance(v, float) else f"{k} = {v}")
    return "\n".join(lines) + "\n"


def emit_reports(records: list, summary: dict, csv_path=None, summary_path=None) -> None:
    if csv_path is not None:
        Path(csv_path).write_text(records_csv(records))
    if summary_path is not None:
        Path(summary_path).write_text(summary_text(summary))


# ------------------------------------------------------------ config files

_EXP_KEYS = {"params", "strategies", "deltas", "trials", "seed", "mode", "targets",
             "lcc_samples", "allow_overbudget", "csv", "summary"}


def read_experiment_config(path) -> ExperimentConfig:
    path = Path(path)
    raw = {}
    for lineno, line in enumerate(path.read_text().splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = (s.strip() for s in line.partition("="))
        if not sep or key not in _EXP_KEYS:
            raise ConfigurationError(f"{path}:{lineno}: bad config line")
        raw[key] = value
    if "params" not in raw:
        raise ConfigurationError(f"{path}: missing params")
    code_cfg = read_param_file(path.parent / raw["params"])
    lst = lambda s: tuple(v.strip() for v in s.split(",") if v.strip())  # noqa: E731
    return ExperimentConfig(
        code=code_cfg,
        strategies=lst(raw.get("strategies", "none")),
        deltas=tuple(float(v) for v in lst(raw.get("deltas", "0"))),
        trials=int(raw.get("trials", 200)),
        seed=int(raw.get("seed", 0)),
        mode=raw.get("mode", "ldc"),
        targets=tuple(int(v) for v in lst(raw["targets"])) if "targets" in raw else None,
        lcc_samples=int(raw.get("lcc_samples", 8)),
        allow_overbudget=raw.get("allow_overbudget", "false").lower() in ("1", "true", "yes"),
        csv_path=raw.get("csv"),
        summary_path=raw.get("summary"),
    )


# ------------------------------------------------------ search-level runs


@dataclass
class SearchRecord:
    trial: int
    strategy: str
    target: int
    success: bool
    locally_good: bool
    queries: int
    trace: SearchTrace
    invariant: list = field(default_factory=list)


def run_search_trials(code: Code, strategy: str, delta: float, trials: int, seed=0,
                      only_locally_good: bool = True) -> list:
    """Run the noisy binary search directly on one target block per trial.

    Targets are drawn among locally-good blocks when any exist (or among all
    blocks when ``only_locally_good`` is False).
    """
    p = code.params
    out = []
    for t in range(trials):
        tseed = f"search:{seed}:{strategy}:{delta!r}:{t}"
        rng = random.Random(tseed)
        x = [rng.randrange(2) for _ in range(p.k)]
        c = code.encode(x)
        trial = corrupt(c, p, strategy, tseed, delta=delta)
        report = analyze(c, trial, p, delta)
        pool = [j for j in range(1, p.d + 1) if report.locally_good[j - 1] or not only_locally_good]
        if not pool:
            continue
        j = rng.choice(pool)
        oracle = WordOracle(trial.corrupted)
        tr = SearchTrace(j)
        got = noisy_binary_search(oracle, 1, oracle.n + 1, j, p, code.codebook, random.Random(f"nbs:{tseed}"), tr)
        want = code.blocks(x)[j - 1]
        out.append(SearchRecord(t, strategy, j, got == want, report.locally_good[j - 1], oracle.queries,
                                tr, invariant_steps(tr, trial.decomposition)))
    return out


def format_search_trace(rec: SearchRecord) -> str:
    parts = [f"trial={rec.trial} strategy={rec.strategy} target={rec.target}"]
    for s in rec.trace.steps:
        parts.append(f"  [{s.l},{s.r}) median={s.median} valid={s.valid}/{s.samples}")
    parts.append(f"  base={rec.trace.base} result={rec.trace.result}")
    return "\n".join(parts)


# --------------------------------------------------------------- scaling


def scaling_points(ks=(4, 6, 8), tau: int = 2, trials: int = 10, seed: int = 0, **extra) -> list:
    """Mean LDC-decode queries at each geometry: list of ``(n, mean_queries, max_depth)``."""
    pts = []
    for k in ks:
        code = build_code(desk_config(k, tau=tau, **extra))
        p = code.params
        rng = random.Random(f"scaling:{seed}:{k}")
        qs, depth = [], 0
        for t in range(trials):
            x = [rng.randrange(2) for _ in range(k)]
            c = code.encode(x)
            sess = DecodeSession(c, p, code.codebook, code.outer, f"scaling:{seed}:{k}:{t}")
            sess.ldc(rng.randint(1, k))
            qs.append(sess.queries)
            depth = max(depth, sess.depth)
        pts.append((p.n, float(np.mean(qs)), depth))
    return pts


def fitted_exponent(points) -> float:
    """Slope of log(queries) against log(log2 n)."""
    xs = np.log([math.log2(n) for n, *_ in points])
    ys = np.log([q for _, q, *_ in points])
    return float(np.polyfit(xs, ys, 1)[0])

