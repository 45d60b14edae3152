import random

import pytest

from insdel_ldc.bitstring import edit_distance, lcs_length
from insdel_ldc.lcsbank import LcsBank


@pytest.mark.parametrize("n", [5, 63, 64, 65, 130])
def test_bank_matches_dp(n):
    rng = random.Random(n)
    bank = LcsBank(n)
    words = ["".join(rng.choice("01") for _ in range(n)) for _ in range(6)]
    for w in words:
        bank.add(w)
    for _ in range(4):
        q = "".join(rng.choice("01") for _ in range(n + rng.randint(-3, 3)))
        assert bank.lcs(q).tolist() == [lcs_length(w, q) for w in words]
        assert bank.distances(q).tolist() == [edit_distance(w, q) for w in words]
