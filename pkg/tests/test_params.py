import math

import pytest

from insdel_ldc.params import (
    DELTA_B, GAMMA, THETA, GeometryError, ParameterError, check_constraints, default_alpha, derive_params,
    plan_geometry, read_param_file, shrink_factor, write_param_file,
)


def test_default_constants():
    assert (GAMMA, THETA) == (1 / 12, 1 / 51)
    assert GAMMA < DELTA_B < 0.5


def test_alpha_formula():
    assert default_alpha(0.05) == pytest.approx(2 * (1 / 12) * 0.05 / (1 / 12 + 6))
    assert default_alpha(0.05) == pytest.approx(1.3699e-3, rel=1e-4)


def test_shrink_factor_example():
    g = 1 / 12
    a = 0.25 * (4 - g) / (4 + g)
    b = 1 - 0.75 * (4 + g) / (4 - g)
    assert (a, b) == pytest.approx((0.239796, 0.218085), abs=1e-6)
    assert shrink_factor(4, g) == pytest.approx(min(a, b))


@pytest.mark.parametrize("k,tau,d,index_bits,t", [(4, None, 4, 4, 8), (4, 2, 8, 4, 6), (6, 2, 32, 6, 8), (8, 2, 128, 8, 10)])
def test_geometry(k, tau, d, index_bits, t):
    g = plan_geometry(k, alpha=0.75, tau=tau)
    assert (g.d, g.index_bits, g.t) == (d, index_bits, t)
    assert g.d * g.tau == 2**k


def test_geometry_errors():
    with pytest.raises(GeometryError):
        plan_geometry(4, tau=3)
    with pytest.raises(GeometryError):
        plan_geometry(4, m=12)


def test_buffer_weight_threshold():
    # weight <= delta_b * L / 2 is the buffer test
    g = plan_geometry(4, alpha=3.0, delta_b=1 / 6)  # L = 12
    assert g.buffer_len == 12 and g.buffer_weight == 1


def test_strict_derivation_names_violation():
    with pytest.raises(ParameterError, match="violated"):
        derive_params(0.05, 0.1, 1, 4, 9, {"alpha": 0.75})


def test_relaxed_derivation_records_violations():
    p = derive_params(0.05, 0.1, 1, 4, 9, {"alpha": 0.75, "strict": False})
    assert p.violations and "alpha <= 2*gamma/(gamma+6)" in p.violations
    assert p.block_len == 2 * p.buffer_len + p.n_in == 78
    assert p.n == 4 * 78


def test_default_alpha_is_admissible_for_large_beta():
    p = derive_params(0.05, 0.1, 1, 4, 40, {"strict": False})
    assert "alpha <= 2*gamma/(gamma+6)" not in check_constraints(p)
    assert p.buffer_len == 1
    assert p.budget() == 0


def test_sample_count_and_depth():
    p = derive_params(0.05, 0.1, 1, 4, 9, {"alpha": 0.75, "strict": False})
    assert p.sample_count(312) == max(36 * math.ceil(math.log(1e6)), math.ceil(math.log2(312)) ** 2)
    assert p.sample_count(312) == 504
    assert p.max_depth(100) == 1
    big = p.C * 10
    assert p.max_depth(big) == math.ceil(math.log(10) / math.log(1 / (1 - p.rho))) + 1


def test_budget_rounding():
    p = derive_params(0.05, 0.1, 1, 4, 9, {"alpha": 0.75, "strict": False})
    assert p.budget(0.01) == math.floor(2 * 312 * 0.01)
    assert p.budget(0.0) == 0


def test_unknown_override():
    with pytest.raises(ParameterError):
        derive_params(0.05, 0.1, 1, 4, 9, {"colour": 1})


def test_param_file_roundtrip(tmp_path):
    path = tmp_path / "p.params"
    write_param_file({"k": 4, "delta_in": 0.05, "strict": False, "outer": "hadamard"}, path)
    assert read_param_file(path) == {"k": 4, "delta_in": 0.05, "strict": False, "outer": "hadamard"}
    path.write_text("bogus = 1\n")
    with pytest.raises(ParameterError):
        read_param_file(path)
