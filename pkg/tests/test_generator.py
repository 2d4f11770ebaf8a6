import math
from fractions import Fraction

import numpy as np
import pytest

from core import BitVector, BudgetExceededError, ParameterError, SeedError, ValidationError
from generator import (
    GeneratorSpec,
    Role,
    Variant,
    check_sampling_budget,
    derive_params_exact,
    derive_params_star,
    exact_output_distribution,
    exact_spec,
    expand_seed,
    expand_seed_word,
    level_distributions,
    mask_distribution,
    random_seed,
    sample_generator_outputs,
    seed_enumeration_histogram,
    seed_from_hex,
    seed_length,
    seed_to_hex,
    star_spec,
    step_distribution,
)
from primitives import ExactDistribution, exact_counts, kwise, sample_word


# ----------------------------------------------------------------------
# Parameters
# ----------------------------------------------------------------------
@pytest.mark.parametrize("n, w, k, r", [
    (256, 256, 56, 20),
    (2, 1, 5, 2),
    (1024, 1024, 70, 25),
])
def test_exact_parameters(n, w, k, r):
    assert derive_params_exact(n, w) == (k, r)


def test_star_parameters():
    params = derive_params_star(16, 2, 0.5)
    assert (params.r, params.k) == (4, 18)
    assert params.gamma == pytest.approx(64.0**-9)
    assert 0 < params.delta < 1
    assert params.mass > 0

    small = derive_params_star(2, 1, 0.5)
    assert (small.r, small.k) == (1, 6)


@pytest.mark.parametrize("n, w, epsilon, r, k, gamma, delta, m_d, m_t", [
    (2, 1, 0.5, 1, 6, 2.0**-18, 1 / (64 * (7 + 5 * math.sqrt(2))), 11, 22),
    (4, 1, 0.5, 2, 9, 2.0**-27, 1 / (512 * (215 + 81 * math.sqrt(6))), 20, 34),
    (2, 2, 0.25, 1, 12, 2.0**-36, 1 / (4096 * (20 + 14 * math.sqrt(2))), 19, 43),
    (3, 1, 0.75, 2, 6, 2.0**-18, 1 / (64 * (37 + 30 * math.sqrt(3))), 15, 23),
])
def test_star_parameters_by_hand(n, w, epsilon, r, k, gamma, delta, m_d, m_t):
    params = derive_params_star(n, w, epsilon)
    assert (params.r, params.k) == (r, k)
    assert params.gamma == pytest.approx(gamma)
    assert params.delta == pytest.approx(delta)
    spec = star_spec(n, w, epsilon=epsilon)
    assert all(d.m == m_d for d in spec.d)
    assert all(t.m == m_t for t in spec.t)


def test_star_spec_beyond_the_field_table_cannot_be_sampled():
    spec = star_spec(4, 2, epsilon=0.5)
    assert max(t.m for t in spec.t) == 44
    with pytest.raises(BudgetExceededError, match=r"GF\(2\^44\)"):
        check_sampling_budget(spec)
    with pytest.raises(BudgetExceededError):
        sample_generator_outputs(spec, np.random.default_rng(0), 4)
    check_sampling_budget(star_spec(2, 1, epsilon=0.5))


def test_star_parameters_reject_bad_epsilon():
    with pytest.raises(ParameterError):
        derive_params_star(16, 2, 1.5)
    with pytest.raises(ParameterError):
        derive_params_exact(1, 4)


def test_star_parameters_overflow_in_chrt_mode():
    with pytest.raises(ParameterError):
        derive_params_star(2**20, 64, 0.01, mass_mode="chrt", chrt_constant=1.0)


# ----------------------------------------------------------------------
# Specs and layouts
# ----------------------------------------------------------------------
def test_exact_seed_length_at_full_scale():
    spec = exact_spec(256, 256)
    assert (spec.k, spec.r, spec.mode) == (56, 20, "derived")
    assert seed_length(spec) == 26880


def test_layout_is_disjoint_and_ordered():
    spec = star_spec(8, 2, k=2, r=3, delta=0.25, gamma=0.5)
    offsets = [(e.offset, e.length) for e in spec.layout]
    assert offsets[0][0] == 0
    for (offset, length), (next_offset, _) in zip(offsets, offsets[1:]):
        assert offset + length == next_offset
    assert [(e.level, e.role) for e in spec.layout] == [
        (0, Role.BASE), (3, Role.D), (3, Role.T), (2, Role.D), (2, Role.T), (1, Role.D), (1, Role.T),
    ]
    assert spec.seed_bits == sum(length for _, length in offsets)
    assert spec.base == kwise(8, 640)
    assert spec.mode == "override"


@pytest.mark.parametrize("spec", [
    exact_spec(16, 4, k=6, r=3),
    exact_spec(8, 2),
    star_spec(8, 2, k=3, r=2, delta=2.0**-10, gamma=2.0**-10),
])
def test_spec_text_roundtrip(spec):
    assert GeneratorSpec.from_text(spec.to_text()) == spec


def test_spec_text_example():
    assert exact_spec(16, 4, k=6, r=3).to_text() == "gen variant=exact n=16 w=4 k=6 r=3 layout=v1"
    with pytest.raises(ValidationError):
        GeneratorSpec.from_text("gen variant=exact n=16 w=4 k=6 r=3 layout=v9")
    with pytest.raises(ValidationError):
        GeneratorSpec.from_text("generator n=16")


def test_star_spec_needs_parameters():
    with pytest.raises(ParameterError):
        star_spec(8, 2, k=2)
    spec = star_spec(4, 2, epsilon=0.5)
    assert spec.variant == Variant.STAR and spec.mode == "derived"


def test_r_zero_is_all_ones():
    spec = exact_spec(5, 2, k=2, r=0)
    assert spec.seed_bits == 0
    assert str(expand_seed(spec, BitVector.zeros(0))) == "11111"


# ----------------------------------------------------------------------
# Seeds and expansion
# ----------------------------------------------------------------------
def test_seed_hex_roundtrip():
    spec = exact_spec(8, 2, k=2, r=2)
    seed = random_seed(spec, np.random.default_rng(0))
    assert seed.length == spec.seed_bits
    assert seed_from_hex(spec, seed_to_hex(seed)) == seed
    with pytest.raises(SeedError):
        seed_from_hex(spec, "xyz")
    with pytest.raises(SeedError):
        expand_seed(spec, BitVector("1"))


def test_expansion_follows_recursion():
    spec = exact_spec(6, 2, k=1, r=2)
    (d1, t1), (d2, t2) = spec.level_descriptors(1), spec.level_descriptors(2)

    def part(seed, level, role):
        entry = spec.slice_of(level, role)
        return (seed >> entry.offset) & ((1 << entry.length) - 1)

    for seed in range(0, 1 << spec.seed_bits, 97):
        g = (1 << 6) - 1
        g = sample_word(d1, part(seed, 1, Role.D)) ^ (sample_word(t1, part(seed, 1, Role.T)) & g)
        g = sample_word(d2, part(seed, 2, Role.D)) ^ (sample_word(t2, part(seed, 2, Role.T)) & g)
        assert expand_seed_word(spec, seed) == g


# ----------------------------------------------------------------------
# Exact output distributions
# ----------------------------------------------------------------------
@pytest.mark.parametrize("n, w, k, r", [(4, 1, 1, 1), (6, 2, 2, 1), (4, 2, 1, 2)])
def test_dp_matches_seed_histogram(n, w, k, r):
    spec = exact_spec(n, w, k=k, r=r)
    assert exact_output_distribution(spec) == seed_enumeration_histogram(spec)


def test_star_dp_matches_seed_histogram():
    spec = star_spec(3, 2, k=1, r=1, delta=0.5, gamma=0.5, base_factor=1)
    assert exact_output_distribution(spec) == seed_enumeration_histogram(spec)


def test_uniform_collapse():
    spec = exact_spec(6, 2, k=3, r=1)
    assert exact_output_distribution(spec) == ExactDistribution.uniform(6)


def test_level_distributions_chain():
    spec = exact_spec(5, 2, k=1, r=3)
    levels = level_distributions(spec)
    assert len(levels) == 4
    assert levels[0] == ExactDistribution.point_mass(5, 31)
    assert levels[-1] == exact_output_distribution(spec)


def test_step_distribution_with_all_ones_mask_is_xor():
    g = exact_counts(kwise(4, 1))
    d = ExactDistribution.point_mass(4, 0b0101)
    t = ExactDistribution.point_mass(4, 0b1111)
    out = step_distribution(g, d, t)
    for v in range(16):
        assert out.probability(v) == g.probability(v ^ 0b0101)


def test_mask_coordinates_halve_per_level():
    spec = exact_spec(6, 2, k=2, r=3)
    y = mask_distribution(spec)
    for j in range(6):
        mass = sum(y.probability(v) for v in range(64) if v >> j & 1)
        assert mass == Fraction(1, 8)


def test_exact_budget():
    with pytest.raises(BudgetExceededError):
        exact_output_distribution(exact_spec(20, 2, k=2, r=1))
    with pytest.raises(BudgetExceededError):
        seed_enumeration_histogram(exact_spec(8, 2, k=3, r=2))


def test_sampled_outputs_follow_exact_pmf():
    spec = exact_spec(4, 2, k=1, r=2)
    outputs = sample_generator_outputs(spec, np.random.default_rng(0), 20000)
    freq = np.bincount(outputs.astype(np.int64), minlength=16) / 20000
    assert np.allclose(freq, exact_output_distribution(spec).probabilities(), atol=0.02)
