"""Exhaustive auditors: bias of characters, k-wise deviation and mask-kill probabilities."""

import logging
from fractions import Fraction
from itertools import combinations

import numpy as np

from core.bitvector import BitVector
from core.errors import DimensionError, ValidationError
from core.transforms import walsh_hadamard
from primitives.descriptor import DistributionDescriptor
from primitives.distribution import exact_counts
from primitives.samplers import iter_output_chunks

logger = logging.getLogger(__name__)


def _alpha_word(desc: DistributionDescriptor, alpha: BitVector | int) -> int:
    if isinstance(alpha, BitVector):
        if alpha.length != desc.n:
            raise DimensionError(f"character of length {alpha.length} on {desc.n}-bit outputs")
        return alpha.word
    if alpha < 0 or alpha >> desc.n:
        raise DimensionError(f"character {alpha:#x} does not fit in {desc.n} bits")
    return alpha


def exact_bias(desc: DistributionDescriptor, alpha: BitVector | int, budget_bits: int | None = None) -> Fraction:
    """E_seed chi_alpha(sample(desc, seed)), summed over every seed."""
    a = np.uint64(_alpha_word(desc, alpha))
    total = 0
    for outputs in iter_output_chunks(desc, budget_bits):
        odd = int(np.sum(np.bitwise_count(outputs & a) & 1))
        total += outputs.size - 2 * odd
    return Fraction(total, 1 << desc.seed_bits)


def measure_bias(desc: DistributionDescriptor, alpha: BitVector | int, budget_bits: int | None = None) -> float:
    return float(exact_bias(desc, alpha, budget_bits))


def max_bias(desc: DistributionDescriptor, budget_bits: int | None = None) -> tuple[Fraction, int]:
    """
    Largest |bias| over all nonzero characters, from the exact pmf.

    Returns:
        tuple[Fraction, int]: The bias and a character attaining it.
    """
    if desc.n == 0:
        return Fraction(0), 0
    pmf = exact_counts(desc, budget_bits)
    spectrum = np.abs(walsh_hadamard(pmf.numerators))
    spectrum[0] = 0
    worst = int(np.argmax(spectrum))
    return Fraction(int(spectrum[worst]), 1 << pmf.log2_denominator), worst


def audit_kwise(desc: DistributionDescriptor, k: int, budget_bits: int | None = None) -> Fraction:
    """
    Max over k-subsets S and patterns p of |Pr[out_S = p] - 2^-k|, counted over every seed.

    Args:
        desc (DistributionDescriptor): The distribution to audit.
        k (int): Subset size, 1 <= k <= n.
        budget_bits (int | None): Enumeration budget override.

    Returns:
        Fraction: The exact deviation; 0 means k-wise independent.
    """
    if not 1 <= k <= desc.n:
        raise ValidationError(f"audit level k={k} outside 1..{desc.n}")
    subsets = list(combinations(range(desc.n), k))
    table = np.zeros((len(subsets), 1 << k), dtype=np.int64)

    for outputs in iter_output_chunks(desc, budget_bits):
        words = outputs.astype(np.int64)
        for row, subset in enumerate(subsets):
            pattern = np.zeros_like(words)
            for j, pos in enumerate(subset):
                pattern |= ((words >> pos) & 1) << j
            table[row] += np.bincount(pattern, minlength=1 << k)

    total = 1 << desc.seed_bits
    worst = int(np.max(np.abs(table * (1 << k) - total)))
    deviation = Fraction(worst, total << k)
    logger.debug(f"k-wise audit of {desc} at k={k}: deviation {float(deviation):.3g}")
    return deviation


def mask_kill_probability(desc: DistributionDescriptor, alpha: BitVector | int, budget_bits: int | None = None) -> Fraction:
    """Exact Pr[alpha AND T = 0] for T drawn from desc."""
    a = _alpha_word(desc, alpha)
    pmf = exact_counts(desc, budget_bits)
    support = pmf.support()
    hit = support[(support & a) == 0]
    return Fraction(int(sum(pmf.numerators[hit])), 1 << pmf.log2_denominator)
