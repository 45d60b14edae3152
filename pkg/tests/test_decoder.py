import itertools
import random

import pytest

from insdel_ldc.bitstring import Delete, EditScript, apply_edit_script, edit_distance
from insdel_ldc.channel import corrupt, decomposition_lengths
from insdel_ldc.decoder import (
    BufferPair, DecodeSession, SearchTrace, WordOracle, _light_windows, block_decode, buff_find,
    interval_decode, noisy_binary_search,
)
from insdel_ldc.goodness import index_mismatch, invariant_steps


def test_oracle_counts_and_pads():
    o = WordOracle("0110")
    assert o.read(0, 5) == "001100"
    assert o.queries == 6
    v1, v2 = o.view(), o.view()
    v1.read(1, 2)
    v2.bit(4)
    assert (v1.queries, v2.queries, o.queries) == (2, 1, 9)
    assert o.read(3, 2) == "" and o.queries == 9


def test_view_log():
    v = WordOracle("0101").view(log=True)
    v.read(1, 2)
    v.read(4, 4)
    assert v.log == [(1, 2), (4, 4)]


@pytest.mark.parametrize("W", range(1, 13))
def test_weight_test_equals_distance_test(W):
    delta_b = 1 / 6
    thr = int(delta_b * W / 2 + 1e-9)
    for w in itertools.product("01", repeat=W):
        w = "".join(w)
        light = bool(_light_windows(w, 1, W, thr))
        assert light == (edit_distance(w, "0" * W) <= delta_b * W)


def test_buffer_pair_order():
    with pytest.raises(ValueError):
        BufferPair((3, 5), (5, 7))


def expected_pair(p, i):
    """Flanking buffers when i lies inside a codeword region of an uncorrupted word."""
    B, L, W = p.block_len, p.buffer_len, p.buffer_window
    j, off = divmod(i - 1, B)
    if not L <= off < B - L:
        return None
    lo = j * B + 1
    return BufferPair((lo + L - W, lo + L - 1), (lo + L + p.n_in, lo + L + p.n_in + W - 1))


def test_buff_find_exhaustive_sweep(code4):
    p = code4.params
    c = code4.encode((0, 1, 1, 0))
    o = WordOracle(c)
    for i in range(1, p.n + 1):
        assert buff_find(o, i, p) == expected_pair(p, i)


def test_buff_find_all_ones(code4):
    o = WordOracle("1" * 200)
    assert all(buff_find(o, i, code4.params) is None for i in range(1, 201))


def test_block_decode_uncorrupted(code4):
    p = code4.params
    x = (1, 1, 0, 1)
    c, blocks = code4.encode(x), code4.blocks(x)
    o = WordOracle(c)
    for i in range(1, p.n + 1):
        got = block_decode(o, i, p, code4.codebook)
        if expected_pair(p, i) is None:
            assert got is None
        else:
            j = (i - 1) // p.block_len + 1
            assert got == (j, blocks[j - 1])


def test_obliterated_block_never_decodes(code4):
    p = code4.params
    c = code4.encode((0, 0, 1, 1))
    B = p.block_len
    ops = EditScript(tuple(Delete(B + 1, 2) for _ in range(B)))
    word = apply_edit_script(c, ops)
    assert decomposition_lengths(ops, p).lengths == (B, 0, B, B)
    o = WordOracle(word)
    hits = [block_decode(o, i, p, code4.codebook) for i in range(1, len(word) + 1)]
    assert all(h is None or h[0] != 2 for h in hits)


def test_interval_decode_full_range(code4):
    p = code4.params
    for x in itertools.product((0, 1), repeat=4):
        c, blocks = code4.encode(x), code4.blocks(x)
        o = WordOracle(c)
        for j in range(1, p.d + 1):
            assert interval_decode(o, 1, p.n + 1, j, p, code4.codebook) == blocks[j - 1]


def test_interval_decode_without_the_block(code4):
    p = code4.params
    c = code4.encode((1, 0, 0, 1))
    o = WordOracle(c)
    assert interval_decode(o, 1, p.block_len, 3, p, code4.codebook) is None
    assert interval_decode(o, 5, 5, 1, p, code4.codebook) is None


def test_interval_decode_mid_word_start(code4):
    # starting inside block 1 still finds block 2 via its own buffers
    p = code4.params
    x = (0, 1, 0, 1)
    c = code4.encode(x)
    assert interval_decode(WordOracle(c), 30, 3 * p.block_len, 2, p, code4.codebook) == code4.blocks(x)[1]


def test_search_zero_noise_recurses(code6):
    p = code6.params
    assert p.n > p.C
    x = (1, 0, 1, 1, 0, 0)
    c, blocks = code6.encode(x), code6.blocks(x)
    trial = corrupt(c, p, "none", 0)
    rng = random.Random(0)
    for j in range(1, p.d + 1, 5):
        o = WordOracle(c)
        tr = SearchTrace(j)
        assert noisy_binary_search(o, 1, p.n + 1, j, p, code6.codebook, rng, tr) == blocks[j - 1]
        assert 1 < tr.depth <= p.max_depth(p.n)
        assert all(invariant_steps(tr, trial.decomposition))


def test_search_all_bottom_returns_none(code6):
    p = code6.params
    o = WordOracle("1" * p.n)
    tr = SearchTrace(3)
    assert noisy_binary_search(o, 1, p.n + 1, 3, p, code6.codebook, random.Random(1), tr) is None
    assert tr.steps[-1].valid == 0


def test_ldc_lcc_zero_noise(code4):
    p = code4.params
    for x in [(0, 0, 0, 0), (1, 0, 1, 1), (1, 1, 1, 1)]:
        c = code4.encode(x)
        for seed in range(3):
            sess = DecodeSession(c, p, code4.codebook, code4.outer, seed)
            assert [sess.ldc(i) for i in range(1, 5)] == list(x)
            assert "".join(str(sess.lcc(j)) for j in range(1, p.n + 1)) == c


def test_lcc_buffer_positions_cost_nothing(code4):
    p = code4.params
    c = code4.encode((1, 0, 1, 0))
    sess = DecodeSession(c, p, code4.codebook, code4.outer, 0)
    for j in (1, 2, 3, p.block_len, p.block_len + 1):
        assert sess.lcc(j) == 0
    assert sess.queries == 0


def test_memo_reuses_searches(code4):
    p = code4.params
    c = code4.encode((1, 0, 1, 0))
    on = DecodeSession(c, p, code4.codebook, code4.outer, 0)
    off = DecodeSession(c, p, code4.codebook, code4.outer, 0, memoize=False)
    for j in range(p.buffer_len + 1, p.buffer_len + 6):
        assert on.lcc(j) == off.lcc(j)
    assert on.queries < off.queries


def test_memo_does_not_change_outcome_rates(code6):
    p = code6.params
    x = (0, 1, 1, 0, 1, 0)
    c = code6.encode(x)
    word = corrupt(c, p, "uniform-random", 5, delta=0.004).corrupted
    rates = []
    for memo in (True, False):
        hits = sum(DecodeSession(word, p, code6.codebook, code6.outer, s, memoize=memo).ldc(2) == x[1]
                   for s in range(12))
        rates.append(hits / 12)
    assert abs(rates[0] - rates[1]) <= 0.34


def test_uncorrupted_blocks_mismatch_within_gamma(code4):
    p = code4.params
    c = code4.encode((0, 1, 1, 1))
    trial = corrupt(c, p, "none", 0)
    for j in range(1, p.d + 1):
        bad, size = index_mismatch(trial, j, p, code4.codebook)
        assert bad == 2 * p.buffer_len and bad / size <= p.gamma
