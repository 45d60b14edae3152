"""Command-line entry point: ``insdel-ldc <subcommand> ...``."""

from __future__ import annotations

import argparse
import random
import sys
from pathlib import Path

from .array_search import (
    ArrayOracle, census_bound, default_samples, locally_good_indices, noisy_search, random_instance,
)
from .bitstring import format_bits, parse_bits
from .channel import STRATEGIES, ChannelTrial, corrupt, format_trace, parse_trace
from .decoder import DecodeSession, WordOracle
from .encoder import load_code
from .experiment import emit_reports, read_experiment_config, run_experiment, summary_text
from .goodness import analyze, check_bounds, format_report
from .inner import build_codebook, load_codebook, save_codebook, verify_codebook
from .outer import parse_symbols
from .params import params_summary, plan_geometry, read_param_file


def _code(args):
    return load_code(read_param_file(args.params), getattr(args, "codebook", None))


def cmd_encode(args) -> int:
    code = _code(args)
    x = parse_symbols(Path(args.message).read_text(), code.params.sigma_bits)
    Path(args.out).write_text(format_bits(code.encode(x)))
    return 0


def cmd_corrupt(args) -> int:
    code = _code(args)
    c = parse_bits(Path(args.codeword).read_text())
    trial = corrupt(c, code.params, args.strategy, args.seed, delta=args.delta, target=args.target)
    Path(args.out).write_text(format_bits(trial.corrupted))
    if args.trace:
        Path(args.trace).write_text(format_trace(trial))
    print(f"strategy = {trial.strategy}\nbudget = {trial.budget}\nused = {trial.budget_used}")
    for flag in trial.flags:
        print(f"flag = {flag}")
    return 0


def cmd_decode(args) -> int:
    code = _code(args)
    word = parse_bits(Path(args.word).read_text())
    oracle = WordOracle(word)
    sess = DecodeSession(word, code.params, code.codebook, code.outer, args.seed, oracle=oracle)
    if args.index is not None:
        value = sess.ldc(args.index)
    else:
        value = sess.lcc(args.position)
    bottom = any(tr.result is None for tr in sess.traces)
    print(f"value = {value}")
    if args.count_queries:
        print(f"queries = {oracle.queries}")
        print(f"depth = {sess.depth}")
    if bottom:
        print("bottom = 1 (an outer query was answered with a random guess)")
    return 1 if bottom else 0


def cmd_analyze(args) -> int:
    code = _code(args)
    p = code.params
    c = parse_bits(Path(args.codeword).read_text())
    word = parse_bits(Path(args.word).read_text())
    script, dec = parse_trace(Path(args.trace).read_text())
    trial = ChannelTrial(word, script, dec, "replay", None, len(script))
    delta = args.delta if args.delta is not None else p.delta
    report = analyze(c, trial, p, delta)
    checks = check_bounds(report, p)
    sys.stdout.write(format_report(report, checks))
    return 0 if all(chk.ok for chk in checks) else 1


def cmd_experiment(args) -> int:
    cfg = read_experiment_config(args.config)
    if args.seed is not None:
        cfg.seed = args.seed
    if args.trials is not None:
        cfg.trials = args.trials
    res = run_experiment(cfg)
    csv_path = args.csv or cfg.csv_path
    summary_path = args.summary or cfg.summary_path
    emit_reports(res.records, res.summary, csv_path, summary_path)
    sys.stdout.write(summary_text(res.summary))
    return 0


def cmd_search_demo(args) -> int:
    rng = random.Random(f"search-demo:{args.seed}")
    t = args.samples or default_samples(args.n)
    found = good_trials = census_ok = 0
    for k in range(args.trials):
        arr = random_instance(args.n, args.corruptions, rng)
        good = sorted(locally_good_indices(arr, args.theta))
        ok = len(good) >= census_bound(args.n, args.corruptions, args.theta)
        census_ok += ok
        i = rng.choice(good) if good else rng.randrange(args.n)
        res = noisy_search(ArrayOracle(arr.values), arr.values[i], args.theta, t, rng)
        hit = res.index == i
        found += hit and bool(good)
        good_trials += bool(good)
        print(f"trial {k}: target={i} found={res.index} success={int(hit)} rounds={len(res.rounds)} "
              f"queries={res.queries} good={len(good)} census_ok={int(ok)}")
    print(f"census_pass = {census_ok}/{args.trials}")
    print(f"success_locally_good = {found}/{good_trials}")
    return 0


def cmd_codebook(args) -> int:
    if args.action == "build":
        cfg = read_param_file(args.params)
        geo = plan_geometry(
            int(cfg["k"]), int(cfg.get("sigma_bits", 1)), delta_in=float(cfg.get("delta_in", 0.05)),
            alpha=cfg.get("alpha"), tau=cfg.get("tau"), buffer_window=cfg.get("buffer_window"),
            **{k: float(cfg[k]) for k in ("gamma", "delta_b") if k in cfg},
        )
        lo = int(cfg.get("beta_in", cfg.get("beta_in_min", 1)))
        hi = int(cfg.get("beta_in", cfg.get("beta_in_max", 16)))
        cb = build_codebook(geo.t, float(cfg.get("delta_in", 0.05)), hi, int(cfg.get("seed", 0)),
                            beta_in_min=lo, buffer_window=geo.buffer_window, buffer_weight=geo.buffer_weight)
        save_codebook(cb, args.out)
        print(f"t = {cb.t}\nn_in = {cb.n_in}\ndmin = {cb.min_pairwise_ed}")
        return 0
    cb = load_codebook(args.codebook)
    verify_codebook(cb, exhaustive_dp=args.exhaustive_dp)
    print(f"ok: t = {cb.t}, n_in = {cb.n_in}, dmin = {cb.min_pairwise_ed}, radius = {cb.radius}")
    return 0


def cmd_params(args) -> int:
    print(params_summary(_code(args).params))
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="insdel-ldc", description="Insdel locally decodable code toolkit")
    sub = ap.add_subparsers(dest="command", required=True)

    def with_params(sp, codebook=True):
        sp.add_argument("--params", required=True, help="parameter file (key = value lines)")
        if codebook:
            sp.add_argument("--codebook", help="cached inner codebook (built from params when absent)")

    sp = sub.add_parser("encode", help="encode a message file")
    with_params(sp)
    sp.add_argument("--message", required=True)
    sp.add_argument("--out", required=True)
    sp.set_defaults(func=cmd_encode)

    sp = sub.add_parser("corrupt", help="apply a budgeted adversary to a codeword")
    with_params(sp)
    sp.add_argument("--codeword", required=True)
    sp.add_argument("--strategy", choices=STRATEGIES, default="uniform-random")
    sp.add_argument("--seed", default="0")
    sp.add_argument("--delta", type=float, help="corruption fraction (default: derived delta)")
    sp.add_argument("--target", type=int, help="block for block-burst")
    sp.add_argument("--out", required=True)
    sp.add_argument("--trace")
    sp.set_defaults(func=cmd_corrupt)

    sp = sub.add_parser("decode", help="locally decode one message symbol or codeword bit")
    with_params(sp)
    sp.add_argument("--word", required=True)
    grp = sp.add_mutually_exclusive_group(required=True)
    grp.add_argument("--index", type=int, help="message index (LDC mode)")
    grp.add_argument("--position", type=int, help="codeword position (LCC mode)")
    sp.add_argument("--seed", default="0")
    sp.add_argument("--count-queries", action="store_true")
    sp.set_defaults(func=cmd_decode)

    sp = sub.add_parser("analyze", help="per-block goodness report for a corrupted word")
    with_params(sp)
    sp.add_argument("--codeword", required=True)
    sp.add_argument("--word", required=True)
    sp.add_argument("--trace", required=True)
    sp.add_argument("--delta", type=float)
    sp.set_defaults(func=cmd_analyze)

    sp = sub.add_parser("experiment", help="run a trial sweep from a config file")
    sp.add_argument("--config", required=True)
    sp.add_argument("--seed", type=int)
    sp.add_argument("--trials", type=int)
    sp.add_argument("--csv")
    sp.add_argument("--summary")
    sp.set_defaults(func=cmd_experiment)

    sp = sub.add_parser("search-demo", help="noisy search in a nearly sorted array")
    sp.add_argument("--n", type=int, default=1024)
    sp.add_argument("--corruptions", type=int, default=10)
    sp.add_argument("--theta", type=float, default=0.1)
    sp.add_argument("--samples", type=int)
    sp.add_argument("--trials", type=int, default=20)
    sp.add_argument("--seed", type=int, default=0)
    sp.set_defaults(func=cmd_search_demo)

    sp = sub.add_parser("codebook", help="build or verify an inner codebook")
    cs = sp.add_subparsers(dest="action", required=True)
    b = cs.add_parser("build")
    b.add_argument("--params", required=True)
    b.add_argument("--out", required=True)
    v = cs.add_parser("verify")
    v.add_argument("--codebook", required=True)
    v.add_argument("--exhaustive-dp", action="store_true")
    sp.set_defaults(func=cmd_codebook)

    sp = sub.add_parser("params", help="print every derived parameter")
    with_params(sp)
    sp.set_defaults(func=cmd_params)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
