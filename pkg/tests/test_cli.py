import shutil
from pathlib import Path

import pytest

from insdel_ldc.cli import main

CONFIGS = Path(__file__).resolve().parent.parent / "configs"


@pytest.fixture
def work(tmp_path, monkeypatch):
    shutil.copy(CONFIGS / "desk_k4.params", tmp_path / "p.params")
    monkeypatch.chdir(tmp_path)
    (tmp_path / "msg.txt").write_text("1011\n")
    assert main(["codebook", "build", "--params", "p.params", "--out", "cb.txt"]) == 0
    return tmp_path


def run(*args):
    return main(list(args))


def test_pipeline(work, capsys):
    base = ["--params", "p.params", "--codebook", "cb.txt"]
    assert run("codebook", "verify", "--codebook", "cb.txt") == 0
    assert run("encode", *base, "--message", "msg.txt", "--out", "c.txt") == 0
    assert len((work / "c.txt").read_text().strip()) == 312
    assert run("corrupt", *base, "--codeword", "c.txt", "--strategy", "none", "--out", "w.txt",
               "--trace", "t.txt") == 0
    assert (work / "t.txt").read_text().strip() == "lengths: 78 78 78 78"
    capsys.readouterr()
    for i, want in zip(range(1, 5), "1011"):
        assert run("decode", *base, "--word", "w.txt", "--index", str(i), "--count-queries") == 0
        out = capsys.readouterr().out
        assert f"value = {want}" in out and "queries = " in out
    assert run("decode", *base, "--word", "w.txt", "--position", "2") == 0
    assert "value = 0" in capsys.readouterr().out
    assert run("analyze", *base, "--codeword", "c.txt", "--word", "w.txt", "--trace", "t.txt") == 0
    assert "fraction_gamma_bad = 0" in capsys.readouterr().out


def test_bottom_exit_code(work):
    (work / "ones.txt").write_text("1" * 312 + "\n")
    assert run("decode", "--params", "p.params", "--codebook", "cb.txt", "--word", "ones.txt", "--index", "1") == 1


def test_errors_are_reported(work, capsys):
    (work / "c.txt").write_text("0101\n")
    assert run("corrupt", "--params", "p.params", "--codeword", "c.txt", "--out", "w.txt") == 2
    assert "error:" in capsys.readouterr().err


def test_experiment_and_demo(work, capsys):
    (work / "e.exp").write_text("params = p.params\nstrategies = none\ndeltas = 0\ntrials = 2\nmode = ldc\n")
    assert run("experiment", "--config", "e.exp", "--csv", "o.csv", "--summary", "o.txt") == 0
    assert (work / "o.csv").read_text().count("\n") == 1 + 2 * 4
    assert "success_rate = 1" in (work / "o.txt").read_text()
    assert run("search-demo", "--n", "256", "--corruptions", "3", "--trials", "2") == 0
    assert "census_pass = 2/2" in capsys.readouterr().out
