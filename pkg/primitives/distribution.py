"""
Exact output distributions.

Every seeded construction here is GF(2)-linear in (part of) its seed, and the image of a
uniform vector under a linear map is uniform on a subspace. So the pmf of a descriptor can be
written down from a few basis vectors instead of enumerating 2^seed_bits seeds:

    kwise      linear in all k*m seed bits: uniform on the span of the k*m unit-seed outputs
    smallbias  for fixed x, linear in y: mixture over x of uniform-on-span(columns(x))

Masses are kept as Python ints over a power-of-two denominator, so equality is exact.
"""

from __future__ import annotations

import logging
from collections import Counter
from fractions import Fraction
from functools import lru_cache

import numpy as np
from numpy.typing import NDArray

from core.errors import BudgetExceededError, DimensionError
from core.gf2 import reduced_basis, span
from primitives.descriptor import DistributionDescriptor, Kind
from primitives.samplers import ENUMERATION_BUDGET_BITS, iter_output_chunks, sample_word

logger = logging.getLogger(__name__)


class ExactDistribution:
    """
    A pmf on F_2^n with dyadic masses: Pr[v] = numerators[v] / 2^log2_denominator.

    Args:
        n (int): Number of bits.
        numerators (NDArray[object]): Length-2^n array of non-negative Python ints.
        log2_denominator (int): Exponent of the common denominator.
    """

    def __init__(self, n: int, numerators: NDArray, log2_denominator: int):
        numerators = np.asarray(numerators, dtype=object)
        if numerators.shape != (1 << n,):
            raise DimensionError(f"pmf over {n} bits needs {1 << n} masses, got {numerators.shape}")
        total = int(sum(numerators))
        if total != 1 << log2_denominator:
            raise DimensionError(f"masses sum to {total}, expected 2^{log2_denominator}")
        numerators.setflags(write=False)
        self.n = n
        self.numerators = numerators
        self.log2_denominator = log2_denominator

    @classmethod
    def point_mass(cls, n: int, word: int) -> ExactDistribution:
        nums = np.zeros(1 << n, dtype=object)
        nums[:] = 0
        nums[word] = 1
        return cls(n, nums, 0)

    @classmethod
    def uniform(cls, n: int) -> ExactDistribution:
        nums = np.empty(1 << n, dtype=object)
        nums[:] = 1
        return cls(n, nums, n)

    @classmethod
    def from_counts(cls, n: int, counts: NDArray) -> ExactDistribution:
        """From integer hit counts whose total is a power of two."""
        nums = np.array([int(c) for c in counts], dtype=object)
        total = int(sum(nums))
        if total & (total - 1):
            raise DimensionError(f"count total {total} is not a power of two")
        return cls(n, nums, total.bit_length() - 1)

    def probability(self, word: int) -> Fraction:
        return Fraction(int(self.numerators[word]), 1 << self.log2_denominator)

    def probabilities(self) -> NDArray[np.float64]:
        return np.array([float(Fraction(int(c), 1 << self.log2_denominator)) for c in self.numerators])

    def support(self) -> NDArray[np.int64]:
        return np.flatnonzero(self.numerators != 0).astype(np.int64)

    def rescaled(self, log2_denominator: int) -> NDArray:
        """Numerators over the larger denominator 2^log2_denominator."""
        shift = log2_denominator - self.log2_denominator
        if shift < 0:
            raise DimensionError("cannot rescale to a smaller denominator")
        return self.numerators * (1 << shift)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ExactDistribution) or other.n != self.n:
            return False
        den = max(self.log2_denominator, other.log2_denominator)
        return bool(np.all(self.rescaled(den) == other.rescaled(den)))

    def __repr__(self) -> str:
        return f"ExactDistribution(n={self.n}, support={len(self.support())}, den=2^{self.log2_denominator})"


def _uniform_on_span(n: int, basis: tuple[int, ...]) -> ExactDistribution:
    nums = np.zeros(1 << n, dtype=object)
    nums[:] = 0
    nums[span(basis)] = 1
    return ExactDistribution(n, nums, len(basis))


def _kwise_counts(desc: DistributionDescriptor) -> ExactDistribution:
    columns = [sample_word(desc, 1 << b) for b in range(desc.seed_bits)]
    return _uniform_on_span(desc.n, reduced_basis(columns))


def _small_bias_counts(desc: DistributionDescriptor) -> ExactDistribution:
    ctx, m, n = desc.ctx, desc.m, desc.n
    groups: Counter[tuple[int, ...]] = Counter()
    for x in range(1 << m):
        columns = [0] * m
        power = x
        for i in range(n):
            for b in range(m):
                columns[b] |= ((power >> b) & 1) << i
            power = ctx.multiply(power, x)
        groups[reduced_basis(columns)] += 1

    nums = np.zeros(1 << n, dtype=object)
    nums[:] = 0
    for basis, count in groups.items():
        nums[span(basis)] += count << (m - len(basis))
    logger.debug(f"{desc}: {len(groups)} distinct output subspaces over 2^{m} values of x")
    return ExactDistribution(n, nums, 2 * m)


@lru_cache(maxsize=256)
def exact_counts(desc: DistributionDescriptor, budget_bits: int | None = None) -> ExactDistribution:
    """
    Exact output pmf of a descriptor, cached per (descriptor, budget).

    Args:
        desc (DistributionDescriptor): The distribution.
        budget_bits (int | None): Limit on n and on the field size m a small-bias tabulation walks.

    Returns:
        ExactDistribution: Masses over a power-of-two denominator.
    """
    budget = ENUMERATION_BUDGET_BITS if budget_bits is None else budget_bits
    if desc.n > budget:
        raise BudgetExceededError(f"tabulating the pmf of {desc}", desc.n, budget)
    if desc.kind == Kind.POINT_MASS:
        return ExactDistribution.point_mass(desc.n, desc.point)
    if desc.covers_all_bits():
        return ExactDistribution.uniform(desc.n)
    if desc.kind == Kind.KWISE:
        return _kwise_counts(desc)
    if desc.m > budget:
        raise BudgetExceededError(f"tabulating the pmf of {desc} over every x", desc.m, budget)
    return _small_bias_counts(desc)


def enumerated_counts(desc: DistributionDescriptor, budget_bits: int | None = None) -> ExactDistribution:
    """The same pmf by brute force over every seed; an oracle for `exact_counts`."""
    counts = np.zeros(1 << desc.n, dtype=np.int64)
    for outputs in iter_output_chunks(desc, budget_bits):
        counts += np.bincount(outputs.astype(np.int64), minlength=1 << desc.n)
    return ExactDistribution.from_counts(desc.n, counts)
