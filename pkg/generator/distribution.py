"""
Exact output distributions of a generator.

Level by level, Pr[G_i = v] = sum over (d, t, g) with d XOR (t AND g) = v of
Pr[D_i = d] Pr[T_i = t] Pr[G_{i-1} = g]. The inner sum over (t, g) is an AND-convolution and
the outer one over d an XOR-convolution, both exact on integer numerators.
"""

import logging
from math import gcd

import numpy as np

from config import config
from core.errors import BudgetExceededError
from core.transforms import and_convolve, xor_convolve
from generator.expand import expand_seed_word
from generator.spec import GeneratorSpec
from primitives.distribution import ExactDistribution, exact_counts
from primitives.samplers import ENUMERATION_BUDGET_BITS

logger = logging.getLogger(__name__)

settings = config('robpgen:generator')

MAX_EXACT_N = settings.getint("MAX_EXACT_N", fallback=14)
HISTOGRAM_BUDGET_BITS = settings.getint("HISTOGRAM_BUDGET_BITS", fallback=20)


def _reduced(n: int, numerators: np.ndarray, log2_denominator: int) -> ExactDistribution:
    common = 0
    for c in numerators:
        common = gcd(common, int(c))
    shift = min((common & -common).bit_length() - 1, log2_denominator) if common else 0
    if shift:
        numerators = numerators // (1 << shift)
    return ExactDistribution(n, numerators, log2_denominator - shift)


def check_exact_budget(spec: GeneratorSpec, max_n: int | None = None) -> None:
    limit = MAX_EXACT_N if max_n is None else max_n
    if spec.n > limit:
        raise BudgetExceededError(f"exact output pmf of {spec}", spec.n, limit)


def step_distribution(g: ExactDistribution, d: ExactDistribution, t: ExactDistribution) -> ExactDistribution:
    """pmf of D XOR (T AND G) for independent D, T, G."""
    masked = and_convolve(t.numerators, g.numerators)
    out = xor_convolve(d.numerators, masked)
    return _reduced(g.n, out, g.log2_denominator + t.log2_denominator + d.log2_denominator)


def exact_output_distribution(spec: GeneratorSpec, max_n: int | None = None,
                              budget_bits: int | None = None) -> ExactDistribution:
    """
    Exact pmf of G_r over F_2^n.

    Args:
        spec (GeneratorSpec): The generator.
        max_n (int | None): Largest n accepted.
        budget_bits (int | None): Seed enumeration budget for the per-level pmfs.

    Returns:
        ExactDistribution: Dyadic masses.
    """
    check_exact_budget(spec, max_n)
    g = exact_counts(spec.base, budget_bits)
    for level in range(1, spec.r + 1):
        d_desc, t_desc = spec.level_descriptors(level)
        g = step_distribution(g, exact_counts(d_desc, budget_bits), exact_counts(t_desc, budget_bits))
        logger.debug(f"level {level}: support {len(g.support())} of {1 << spec.n}")
    return g


def level_distributions(spec: GeneratorSpec, max_n: int | None = None,
                        budget_bits: int | None = None) -> list[ExactDistribution]:
    """[pmf of G_0, pmf of G_1, ..., pmf of G_r]."""
    check_exact_budget(spec, max_n)
    levels = [exact_counts(spec.base, budget_bits)]
    for level in range(1, spec.r + 1):
        d_desc, t_desc = spec.level_descriptors(level)
        levels.append(step_distribution(levels[-1], exact_counts(d_desc, budget_bits),
                                        exact_counts(t_desc, budget_bits)))
    return levels


def mask_distribution(spec: GeneratorSpec, max_n: int | None = None,
                      budget_bits: int | None = None) -> ExactDistribution:
    """pmf of Y = T_1 AND ... AND T_r (all ones when r = 0)."""
    check_exact_budget(spec, max_n)
    y = ExactDistribution.point_mass(spec.n, (1 << spec.n) - 1)
    for level in range(1, spec.r + 1):
        t = exact_counts(spec.level_descriptors(level)[1], budget_bits)
        y = _reduced(spec.n, and_convolve(t.numerators, y.numerators), t.log2_denominator + y.log2_denominator)
    return y


def seed_enumeration_histogram(spec: GeneratorSpec, budget_bits: int | None = None) -> ExactDistribution:
    """The output pmf counted over every seed by calling the seed expansion directly."""
    budget = min(HISTOGRAM_BUDGET_BITS, ENUMERATION_BUDGET_BITS) if budget_bits is None else budget_bits
    if spec.seed_bits > budget:
        raise BudgetExceededError(f"enumerating seeds of {spec}", spec.seed_bits, budget)
    counts = np.zeros(1 << spec.n, dtype=np.int64)
    for seed in range(1 << spec.seed_bits):
        counts[expand_seed_word(spec, seed)] += 1
    return ExactDistribution.from_counts(spec.n, counts)
