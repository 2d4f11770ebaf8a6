"""Seed expansion: G_0 = base, G_i = D_i XOR (T_i AND G_{i-1})."""

import logging

import numpy as np
from numpy.typing import NDArray

from core.bitvector import BitVector
from generator.spec import GeneratorSpec, Role, check_seed
from primitives.samplers import check_sampling, sample_outputs, sample_word

logger = logging.getLogger(__name__)


def _slice(seed: int, offset: int, length: int) -> int:
    return (seed >> offset) & ((1 << length) - 1)


def expand_seed_word(spec: GeneratorSpec, seed: int) -> int:
    base = spec.slice_of(0, Role.BASE)
    g = sample_word(spec.base, _slice(seed, base.offset, base.length))
    for level in range(1, spec.r + 1):
        d_desc, t_desc = spec.level_descriptors(level)
        d_slice = spec.slice_of(level, Role.D)
        t_slice = spec.slice_of(level, Role.T)
        d = sample_word(d_desc, _slice(seed, d_slice.offset, d_slice.length))
        t = sample_word(t_desc, _slice(seed, t_slice.offset, t_slice.length))
        g = d ^ (t & g)
    return g


def expand_seed(spec: GeneratorSpec, seed: BitVector) -> BitVector:
    check_seed(spec, seed)
    return BitVector.from_int(expand_seed_word(spec, seed.word), spec.n)


def check_sampling_budget(spec: GeneratorSpec) -> None:
    """Raises BudgetExceededError when some stage of spec cannot be sampled vectorized."""
    for desc in (spec.base, *spec.d, *spec.t):
        check_sampling(desc)


def sample_generator_outputs(spec: GeneratorSpec, rng: np.random.Generator, count: int) -> NDArray[np.uint64]:
    """`count` outputs of the generator on independent uniform seeds (vectorized per level)."""
    check_sampling_budget(spec)
    g = sample_outputs(spec.base, rng, count)
    for level in range(1, spec.r + 1):
        d_desc, t_desc = spec.level_descriptors(level)
        d = sample_outputs(d_desc, rng, count)
        t = sample_outputs(t_desc, rng, count)
        g = d ^ (t & g)
    return g
