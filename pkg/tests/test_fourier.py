import math

import numpy as np
import pytest

from core import BitVector, BudgetExceededError, ValidationError
from fourier import (
    FourierExpansion,
    decompose_prop1,
    expand,
    level_mass,
    level_masses,
    mass_bound,
    max_level_mass_sampled,
    parseval_check,
)
from robp import parity_program, permute_order, random_program, truth_table


def test_expansion_reconstructs_table():
    bp = random_program(5, 3, rng_seed=0)
    expansion = expand(bp)
    assert np.allclose(expansion.table(), truth_table(bp))
    for x in (0, 7, 30):
        assert np.allclose(expansion.evaluate(x), truth_table(bp)[x])
    assert np.allclose(expansion.evaluate(BitVector.from_int(7, 5)), truth_table(bp)[7])


def test_parity_has_single_top_coefficient():
    expansion = expand(parity_program(4))
    assert set(expansion.coefficients) == {0, 0b1111}
    assert expansion.degree() == 4
    assert np.allclose(expansion.coefficient(0b1111), [[0.5, -0.5], [-0.5, 0.5]])
    assert np.allclose(expansion.coefficient(0b0011), 0)


@pytest.mark.slow
@pytest.mark.parametrize("seed", range(200))
def test_parseval(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 11))
    w = int(rng.integers(2, 5))
    lhs, rhs = parseval_check(random_program(n, w, rng_seed=seed))
    assert rhs == pytest.approx(w)
    assert abs(lhs - w) <= 1e-9


def test_level_masses():
    bp = random_program(6, 2, rng_seed=3)
    masses = level_masses(bp)
    assert masses.shape == (7,)
    assert masses[0] == pytest.approx(np.linalg.norm(expand(bp).coefficient(0)))
    assert level_mass(bp, 2) == pytest.approx(masses[2])
    assert level_mass(expand(bp), 2) == pytest.approx(masses[2])
    assert level_mass(bp, 9) == 0.0


def test_expansion_frame(tmp_path):
    expansion = expand(parity_program(2))
    df = expansion.to_frame()
    assert df.columns == ["alpha", "row", "col", "value"]
    assert df.height == 2 * 4
    assert set(df["alpha"]) == {"00", "11"}
    expansion.write_csv(tmp_path / "coefficients.csv")
    assert (tmp_path / "coefficients.csv").exists()


def test_exhaustive_budget():
    with pytest.raises(BudgetExceededError):
        expand(random_program(8, 2, rng_seed=0), budget=6)


# ----------------------------------------------------------------------
# Mass bounds
# ----------------------------------------------------------------------
def test_trivial_mass_bound_level_one():
    assert mass_bound(16, 2, 1, mode="trivial").value == pytest.approx(4 * math.sqrt(2))


def test_mass_bound_caps_levels_at_n():
    assert mass_bound(4, 2, 10, mode="trivial").value == pytest.approx(mass_bound(4, 2, 4, mode="trivial").value)


def test_chrt_mass_bound_and_overflow():
    assert mass_bound(16, 2, 1, mode="chrt", c=1.0).value == pytest.approx(16.0)
    huge = mass_bound(2**20, 64, 200, mode="chrt", c=1.0)
    assert huge.overflow and math.isinf(huge.value)
    with pytest.raises(ValidationError):
        mass_bound(4, 2, 1, mode="nonsense")


def test_sampled_mass_below_trivial_bound():
    n, w, k = 6, 2, 3
    sampled = max_level_mass_sampled(n, w, k, count=30, rng_seed=1)
    assert 0 < sampled <= mass_bound(n, w, k, mode="trivial").value + 1e-9


# ----------------------------------------------------------------------
# High / low decomposition
# ----------------------------------------------------------------------
@pytest.mark.slow
@pytest.mark.parametrize("seed", range(100))
def test_decomposition_reconstructs_program(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 9))
    w = int(rng.integers(1, 4))
    bp = permute_order(random_program(n, w, rng_seed=seed), rng.permutation(n))
    for k in range(1, n + 1):
        assert decompose_prop1(bp, k).max_reconstruction_error() <= 1e-9


def test_high_parts_live_on_level_k_with_top_bit():
    bp = random_program(6, 3, rng_seed=12)
    k = 2
    decomposition = decompose_prop1(bp, k)
    assert len(decomposition.high) == 6
    for part in decomposition.high:
        assert part.suffix.n == 6 - part.i
        for alpha in part.coefficients:
            assert alpha.bit_count() == k
            assert alpha >> (part.i - 1) == 1
    assert all(0 < a.bit_count() < k for a in decomposition.low.coefficients)
    assert np.allclose(decomposition.reconstruct(13), truth_table(bp)[13])


def test_parity_high_part_is_last_prefix():
    n = 4
    decomposition = decompose_prop1(parity_program(n), n)
    nonzero = decomposition.nonzero_high()
    assert [h.i for h in nonzero] == [n]
    assert set(nonzero[0].coefficients) == {(1 << n) - 1}
    assert decomposition.low.coefficients == {}


def test_decomposition_above_n_has_no_high_parts():
    decomposition = decompose_prop1(random_program(4, 2, rng_seed=1), 6)
    assert decomposition.nonzero_high() == []
    assert decomposition.max_reconstruction_error() <= 1e-9
    with pytest.raises(ValidationError):
        decompose_prop1(random_program(4, 2, rng_seed=1), 0)


def test_high_part_expansion():
    decomposition = decompose_prop1(random_program(5, 2, rng_seed=4), 2)
    for part in decomposition.nonzero_high():
        expansion = part.expansion(2)
        assert isinstance(expansion, FourierExpansion)
        assert expansion.n == part.i
        assert np.allclose(part.stack(2)[sorted(part.coefficients)[0]], expansion.coefficient(sorted(part.coefficients)[0]))
