import random

import pytest
from hypothesis import given, settings, strategies as st

from insdel_ldc.bitstring import Delete, EditScript, Insert, apply_edit_script, edit_distance
from insdel_ldc.channel import (
    CERTIFIED, BlockDecomposition, TraceError, align_decomposition, corrupt, decomposition_lengths,
    format_trace, parse_trace, per_block_audit,
)
from insdel_ldc.outer import ConfigurationError


@pytest.fixture(scope="module")
def word(code4):
    return code4.encode((1, 0, 1, 1))


def test_none_is_identity(code4, word):
    tr = corrupt(word, code4.params, "none", 0, delta=0.05)
    assert tr.corrupted == word and tr.budget_used == 0
    assert tr.decomposition.lengths == (code4.params.block_len,) * code4.params.d


@pytest.mark.parametrize("strategy", CERTIFIED)
@pytest.mark.parametrize("seed", range(6))
def test_certified_trials_are_consistent(code4, word, strategy, seed):
    p = code4.params
    delta = 0.02
    tr = corrupt(word, p, strategy, seed, delta=delta)
    assert tr.budget_used <= tr.budget == p.budget(delta)
    assert tr.corrupted == apply_edit_script(word, tr.script)
    assert tr.decomposition.n_prime == len(tr.corrupted)
    assert decomposition_lengths(tr.script, p) == tr.decomposition
    audit = per_block_audit(word, tr, p)
    assert sum(audit) <= tr.budget_used
    assert edit_distance(word, tr.corrupted) <= sum(audit)


def test_block_burst_stays_in_target(code4, word):
    tr = corrupt(word, code4.params, "block-burst", 1, delta=0.03, target=3)
    audit = per_block_audit(word, tr, code4.params)
    assert audit[2] <= tr.budget_used and audit[0] == audit[1] == audit[3] == 0
    assert {op.block for op in tr.script} == {3}


def test_flags(code4, word):
    assert any(f.startswith("spoof@") for f in corrupt(word, code4.params, "buffer-spoof", 2, delta=0.03).flags)
    assert any(f.startswith("erase@") for f in corrupt(word, code4.params, "buffer-erase", 2, delta=0.03).flags)


def test_reproducible(code4, word):
    a = corrupt(word, code4.params, "uniform-random", "s", delta=0.05)
    b = corrupt(word, code4.params, "uniform-random", "s", delta=0.05)
    assert a.corrupted == b.corrupted and a.script == b.script


def test_unknown_strategy(code4, word):
    with pytest.raises(ConfigurationError):
        corrupt(word, code4.params, "gremlin", 0)


def test_decomposition_examples(code4):
    p = code4.params
    assert decomposition_lengths(EditScript(()), p).lengths == (78,) * 4
    one = EditScript((Delete(80, 2),))
    assert decomposition_lengths(one, p).lengths == (78, 77, 78, 78)


def test_misattributed_script(code4):
    with pytest.raises(TraceError):
        decomposition_lengths(EditScript((Delete(5, 2),)), code4.params)
    with pytest.raises(TraceError):
        decomposition_lengths(EditScript((Insert(5, 1),)), code4.params)


def test_phi_is_monotone():
    dec = BlockDecomposition((2, 0, 3))
    assert [dec.phi(i) for i in range(1, 6)] == [1, 1, 3, 3, 3]
    assert dec.phi_table()[1:] == [1, 1, 3, 3, 3]
    assert dec.interval(2) == (3, 3)


def test_trace_roundtrip(code4, word):
    tr = corrupt(word, code4.params, "uniform-random", 9, delta=0.02)
    script, dec = parse_trace(format_trace(tr))
    assert script == tr.script and dec == tr.decomposition
    with pytest.raises(TraceError):
        parse_trace("D 3\n")


def test_freeform_is_flagged(code4, word):
    tr = corrupt(word, code4.params, "freeform", 4, delta=0.02)
    assert not tr.certified and tr.decomposition.n_prime == len(tr.corrupted)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6))
def test_alignment_decomposition_is_total(code4, seed):
    p = code4.params
    rng = random.Random(seed)
    c = code4.encode([rng.randrange(2) for _ in range(4)])
    tr = corrupt(c, p, "uniform-random", seed, delta=0.02)
    dec = align_decomposition(c, tr.corrupted, p)
    assert dec.n_prime == len(tr.corrupted) and dec.d == p.d
