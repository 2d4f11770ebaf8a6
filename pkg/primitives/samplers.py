"""
Seeded samplers for k-wise independent, small-bias and almost k-wise independent spaces.

Each construction has a word-level sampler (seed word in, output word out) used by the
`BitVector` entry points, and a vectorized variant over numpy uint64 arrays used by the
exhaustive auditors and the Monte Carlo estimators.
"""

import logging
from typing import Iterator

import numpy as np
from numpy.typing import NDArray

from config import config
from core.bitvector import BitVector
from core.errors import BudgetExceededError, DimensionError, SeedError
from core.field import MAX_DEGREE, FieldContext
from primitives.descriptor import (
    DistributionDescriptor,
    Kind,
    almost_kwise,
    kwise,
    small_bias,
)

logger = logging.getLogger(__name__)

settings = config('robpgen:primitives')

ENUMERATION_BUDGET_BITS = settings.getint("ENUMERATION_BUDGET_BITS", fallback=26)
AUDIT_CHUNK_BITS = settings.getint("AUDIT_CHUNK_BITS", fallback=16)

# outputs are packed in uint64 words
MAX_VECTOR_N = 64


# ----------------------------------------------------------------------
# Word-level samplers
# ----------------------------------------------------------------------
def kwise_word(ctx: FieldContext, n: int, k: int, seed: int) -> int:
    """Bit j of the result is the low bit of p(j), p(t) = sum_i c_i t^i, c_i = seed word i."""
    m = ctx.m
    mask = (1 << m) - 1
    coeffs = [(seed >> (i * m)) & mask for i in range(k)]
    out = 0
    for j in range(n):
        acc = 0
        for c in reversed(coeffs):
            acc = ctx.multiply(acc, j) ^ c
        out |= (acc & 1) << j
    return out


def small_bias_word(ctx: FieldContext, n: int, seed: int) -> int:
    """Bit i of the result is <x^(i+1), y> mod 2 for x = low seed word, y = high seed word."""
    m = ctx.m
    x = seed & ((1 << m) - 1)
    y = seed >> m
    out = 0
    power = x
    for i in range(n):
        out |= ((power & y).bit_count() & 1) << i
        power = ctx.multiply(power, x)
    return out


def sample_word(desc: DistributionDescriptor, seed: int) -> int:
    if desc.kind == Kind.KWISE:
        return kwise_word(desc.ctx, desc.n, desc.k, seed)
    if desc.kind in (Kind.SMALL_BIAS, Kind.ALMOST_KWISE):
        return small_bias_word(desc.ctx, desc.n, seed)
    if desc.kind == Kind.POINT_MASS:
        return desc.point
    return seed


# ----------------------------------------------------------------------
# BitVector entry points
# ----------------------------------------------------------------------
def _check_seed(desc: DistributionDescriptor, seed: BitVector) -> None:
    if seed.length != desc.seed_bits:
        raise SeedError(f"{desc} expects a {desc.seed_bits}-bit seed, got {seed.length} bits")


def sample(desc: DistributionDescriptor, seed: BitVector) -> BitVector:
    _check_seed(desc, seed)
    return BitVector.from_int(sample_word(desc, seed.word), desc.n)


def sample_kwise(n: int, k: int, seed: BitVector) -> BitVector:
    return sample(kwise(n, k), seed)


def sample_small_bias(n: int, delta: float, seed: BitVector) -> BitVector:
    return sample(small_bias(n, delta), seed)


def sample_almost_kwise(n: int, k: int, gamma: float, seed: BitVector) -> BitVector:
    return sample(almost_kwise(n, k, gamma), seed)


# ----------------------------------------------------------------------
# Vectorized outputs
# ----------------------------------------------------------------------
def _kwise_outputs(ctx: FieldContext, n: int, coeffs: list[NDArray[np.uint64]]) -> NDArray[np.uint64]:
    out = np.zeros(coeffs[0].shape, dtype=np.uint64)
    one = np.uint64(1)
    for j in range(n):
        point = np.uint64(j)
        acc = np.zeros_like(out)
        for c in reversed(coeffs):
            acc = ctx.multiply_array(acc, point) ^ c
        out |= (acc & one) << np.uint64(j)
    return out


def _small_bias_outputs(
    ctx: FieldContext, n: int, x: NDArray[np.uint64], y: NDArray[np.uint64]
) -> NDArray[np.uint64]:
    out = np.zeros(x.shape, dtype=np.uint64)
    one = np.uint64(1)
    power = x.copy()
    for i in range(n):
        out |= (np.bitwise_count(power & y).astype(np.uint64) & one) << np.uint64(i)
        power = ctx.multiply_array(power, x)
    return out


def outputs_from_seeds(desc: DistributionDescriptor, seeds: NDArray[np.uint64]) -> NDArray[np.uint64]:
    """Output words for an array of seed words (seed_bits <= 64)."""
    if desc.n > MAX_VECTOR_N:
        raise DimensionError(f"vectorized sampling supports n <= {MAX_VECTOR_N}, got {desc.n}")
    if desc.seed_bits > 64:
        raise SeedError(f"{desc} has {desc.seed_bits}-bit seeds, packed seeds hold at most 64")
    seeds = np.asarray(seeds, dtype=np.uint64)

    if desc.kind == Kind.POINT_MASS:
        return np.full(seeds.shape, desc.point, dtype=np.uint64)
    if desc.kind == Kind.UNIFORM:
        return seeds.copy()

    m = desc.m
    mask = np.uint64((1 << m) - 1)
    if desc.kind == Kind.KWISE:
        coeffs = [(seeds >> np.uint64(i * m)) & mask for i in range(desc.k)]
        return _kwise_outputs(desc.ctx, desc.n, coeffs)
    return _small_bias_outputs(desc.ctx, desc.n, seeds & mask, (seeds >> np.uint64(m)) & mask)


def random_words(rng: np.random.Generator, bits: int, count: int) -> NDArray[np.uint64]:
    """`count` uniform words of `bits` bits (bits <= 64)."""
    if bits > 64:
        raise DimensionError(f"cannot pack {bits} random bits into a uint64")
    out = np.zeros(count, dtype=np.uint64)
    done = 0
    while done < bits:
        take = min(32, bits - done)
        chunk = rng.integers(0, 1 << take, size=count, dtype=np.uint64)
        out |= chunk << np.uint64(done)
        done += take
    return out


def check_sampling(desc: DistributionDescriptor) -> None:
    """Refuses what the vectorized sampler cannot draw: outputs over 64 bits, fields above GF(2^MAX_DEGREE)."""
    if desc.n > MAX_VECTOR_N:
        raise BudgetExceededError(f"packing {desc.n}-bit outputs of {desc} into uint64 words", desc.n, MAX_VECTOR_N)
    if desc.m > MAX_DEGREE:
        raise BudgetExceededError(f"sampling {desc} over GF(2^{desc.m})", desc.m, MAX_DEGREE)


def sample_outputs(desc: DistributionDescriptor, rng: np.random.Generator, count: int) -> NDArray[np.uint64]:
    """`count` independent samples of desc, drawn field word by field word."""
    if desc.n > MAX_VECTOR_N:
        raise DimensionError(f"vectorized sampling supports n <= {MAX_VECTOR_N}, got {desc.n}")
    check_sampling(desc)
    if desc.kind == Kind.POINT_MASS:
        return np.full(count, desc.point, dtype=np.uint64)
    # k >= n: the output is exactly uniform
    if desc.covers_all_bits():
        return random_words(rng, desc.n, count)
    m = desc.m
    if desc.kind == Kind.KWISE:
        coeffs = [random_words(rng, m, count) for _ in range(desc.k)]
        return _kwise_outputs(desc.ctx, desc.n, coeffs)
    x = random_words(rng, m, count)
    y = random_words(rng, m, count)
    return _small_bias_outputs(desc.ctx, desc.n, x, y)


# ----------------------------------------------------------------------
# Exhaustive enumeration
# ----------------------------------------------------------------------
def check_budget(desc: DistributionDescriptor, budget_bits: int | None = None) -> int:
    budget = ENUMERATION_BUDGET_BITS if budget_bits is None else budget_bits
    if desc.seed_bits > budget:
        raise BudgetExceededError(f"enumerating seeds of {desc}", desc.seed_bits, budget)
    return budget


def iter_output_chunks(
    desc: DistributionDescriptor,
    budget_bits: int | None = None,
    chunk_bits: int | None = None,
) -> Iterator[NDArray[np.uint64]]:
    """Yields the outputs of every seed in increasing seed order, in chunks."""
    check_budget(desc, budget_bits)
    chunk = 1 << (AUDIT_CHUNK_BITS if chunk_bits is None else chunk_bits)
    total = 1 << desc.seed_bits
    for start in range(0, total, chunk):
        seeds = np.arange(start, min(start + chunk, total), dtype=np.uint64)
        yield outputs_from_seeds(desc, seeds)


def enumerate_outputs(desc: DistributionDescriptor, budget_bits: int | None = None) -> NDArray[np.uint64]:
    """Output word of every seed; entry s is the output of seed s."""
    logger.debug(f"Enumerating 2^{desc.seed_bits} seeds of {desc}")
    return np.concatenate(list(iter_output_chunks(desc, budget_bits)))
