import pytest

from insdel_ldc.encoder import desk_config
from insdel_ldc.experiment import (
    CSV_FIELDS, ExperimentConfig, emit_reports, fitted_exponent, read_experiment_config, records_csv,
    run_experiment, run_search_trials, summarize,
)
from insdel_ldc.outer import ConfigurationError
from insdel_ldc.params import write_param_file


def test_zero_delta_sweep_is_perfect(code4):
    cfg = ExperimentConfig(desk_config(4), strategies=("none", "uniform-random", "buffer-spoof"),
                           deltas=(0.0,), trials=3, mode="both")
    res = run_experiment(cfg, code4)
    assert res.summary["success_rate"] == 1.0
    assert all(v == 1.0 for k, v in res.summary.items() if k.startswith("success_rate["))
    assert sum(r.queries for r in res.records) == res.oracle_total == res.summary["oracle_queries"]


def test_row_counts(code4):
    cfg = ExperimentConfig(desk_config(4), trials=10, mode="ldc", targets=(2,))
    res = run_experiment(cfg, code4)
    lines = records_csv(res.records).splitlines()
    assert lines[0] == ",".join(CSV_FIELDS)
    assert len(lines) == 11


def test_empty_records_header_only():
    assert records_csv([]) == ",".join(CSV_FIELDS) + "\n"


def test_overbudget_rejected(code4):
    cfg = ExperimentConfig(desk_config(4), deltas=(0.01,), trials=1)
    with pytest.raises(ConfigurationError):
        run_experiment(cfg, code4)
    cfg.allow_overbudget = True
    run_experiment(cfg, code4)


def test_config_validation():
    with pytest.raises(ConfigurationError):
        ExperimentConfig({}, trials=0)
    with pytest.raises(ConfigurationError):
        ExperimentConfig({}, strategies=("gremlin",))


def test_conditioning_on_local_goodness(code4):
    cfg = ExperimentConfig(desk_config(4), strategies=("uniform-random", "block-burst"), deltas=(0.02,),
                           trials=15, mode="ldc", allow_overbudget=True)
    s = run_experiment(cfg, code4).summary
    if s["locally_good_records"]:
        assert s["success_rate_locally_good"] >= s["success_rate"]


def test_deterministic_outputs(tmp_path, code4):
    cfg = ExperimentConfig(desk_config(4), strategies=("uniform-random",), deltas=(0.01,), trials=4,
                           mode="both", allow_overbudget=True, seed=11)
    paths = []
    for run in range(2):
        res = run_experiment(cfg, code4)
        csv_path, summ = tmp_path / f"r{run}.csv", tmp_path / f"r{run}.txt"
        emit_reports(res.records, res.summary, csv_path, summ)
        paths.append((csv_path.read_bytes(), summ.read_bytes()))
    assert paths[0] == paths[1]


def test_config_file(tmp_path):
    cfg = desk_config(4)
    write_param_file({k: v for k, v in cfg.items() if k != "tau"}, tmp_path / "p.params")
    (tmp_path / "e.exp").write_text("params = p.params\nstrategies = none, block-burst\ndeltas = 0\ntrials = 2\n")
    exp = read_experiment_config(tmp_path / "e.exp")
    assert exp.strategies == ("none", "block-burst") and exp.trials == 2 and exp.code["k"] == 4
    (tmp_path / "bad.exp").write_text("colour = red\n")
    with pytest.raises(ConfigurationError):
        read_experiment_config(tmp_path / "bad.exp")


def test_summary_of_nothing():
    s = summarize([])
    assert s["records"] == 0


def test_search_trials_record_invariants(code6):
    recs = run_search_trials(code6, "none", 0.0, 3, seed=2)
    assert len(recs) == 3 and all(r.success and r.locally_good for r in recs)
    assert all(all(r.invariant) for r in recs)


def test_exponent_fit():
    pts = [(2**6, 6.0**3), (2**10, 10.0**3), (2**14, 14.0**3)]
    assert fitted_exponent(pts) == pytest.approx(3.0)
