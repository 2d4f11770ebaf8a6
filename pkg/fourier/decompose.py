"""
High/low decomposition of a branching program at Fourier level k.

In layer-read coordinates y (bit i is the bit read by layer i):

    F(y) = F^_0 + L(y) + sum_{i=1..n} H_i(y_1..y_i) F^{>i}(y_{i+1}..y_n)

where L collects the coefficients of F with 0 < |alpha| < k, and H_i collects the level-k
coefficients of the prefix F^{<=i} whose highest variable is y_i.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from core.errors import ValidationError
from core.matrix import DenseMatrix
from core.transforms import popcount, walsh_hadamard
from fourier.expansion import FourierExpansion, check_budget, coefficient_stack
from robp.program import BranchingProgram, read_order_input, split, truth_table

logger = logging.getLogger(__name__)


@dataclass
class HighPart:
    """H_i (1-indexed i) as a sparse expansion over F_2^i, paired with the suffix program."""

    i: int
    coefficients: dict[int, DenseMatrix]
    suffix: BranchingProgram

    def expansion(self, w: int) -> FourierExpansion:
        return FourierExpansion(self.i, w, dict(self.coefficients))

    def stack(self, w: int) -> np.ndarray:
        dense = np.zeros((1 << self.i, w, w))
        for a, c in self.coefficients.items():
            dense[a] = c
        return dense


@dataclass
class Prop1Decomposition:
    program: BranchingProgram
    k: int
    constant: DenseMatrix
    low: FourierExpansion
    high: list[HighPart] = field(default_factory=list)

    def nonzero_high(self) -> list[HighPart]:
        return [h for h in self.high if h.coefficients]

    def reconstruct_table(self) -> np.ndarray:
        """The right-hand side for every input, indexed by layer-read word y."""
        n, w = self.program.n, self.program.w
        words = np.arange(1 << n)
        out = self.constant[None, :, :] + self.low.table()
        for h in self.nonzero_high():
            prefix_values = walsh_hadamard(h.stack(w))
            suffix_values = truth_table(h.suffix)
            lo = words & ((1 << h.i) - 1)
            hi = words >> h.i
            out += prefix_values[lo] @ suffix_values[hi]
        return out

    def reconstruct(self, x: int) -> DenseMatrix:
        """Right-hand side at the input word x (in the program's own coordinates)."""
        return self.reconstruct_table()[read_order_input(self.program, x)]

    def max_reconstruction_error(self) -> float:
        """Largest entry-wise gap between the decomposition and F over all inputs."""
        layered = BranchingProgram(self.program.successors, w=self.program.w)
        return float(np.max(np.abs(self.reconstruct_table() - truth_table(layered))))


def decompose_prop1(bp: BranchingProgram, k: int, budget: int | None = None,
                    tolerance: float | None = None) -> Prop1Decomposition:
    """
    Splits F into constant, low-degree and high-degree-times-suffix parts.

    Args:
        bp (BranchingProgram): The program; its layer-read coordinates are used.
        k (int): Level threshold, k >= 1. k > n is allowed: every high part is then empty.
        budget (int | None): Largest n the exact expansions may use.
        tolerance (float | None): Pruning tolerance for the stored coefficients.

    Returns:
        Prop1Decomposition: The parts, with each H_i supported on |alpha| = k, alpha_i = 1.
    """
    if k < 1:
        raise ValidationError(f"decomposition level k={k} must be at least 1")
    check_budget(bp.n, budget)
    layered = BranchingProgram(bp.successors, w=bp.w)
    stack = coefficient_stack(truth_table(layered), budget)
    levels = popcount(np.arange(1 << bp.n))

    full = FourierExpansion.from_stack(stack, tolerance)
    constant = stack[0].copy()
    low = FourierExpansion(bp.n, bp.w, {a: c for a, c in full.coefficients.items() if 0 < a.bit_count() < k})

    high: list[HighPart] = []
    for i in range(1, bp.n + 1):
        prefix, suffix = split(layered, i)
        prefix_expansion = FourierExpansion.from_stack(coefficient_stack(truth_table(prefix), budget), tolerance)
        top_bit = 1 << (i - 1)
        coefficients = {
            a: c for a, c in prefix_expansion.coefficients.items()
            if a.bit_count() == k and a & top_bit
        }
        high.append(HighPart(i, coefficients, suffix))

    logger.debug(f"decomposed n={bp.n} w={bp.w} at k={k}: {int(np.sum(levels >= k))} high-level characters, "
                 f"{sum(1 for h in high if h.coefficients)} nonzero high parts")
    return Prop1Decomposition(bp, k, constant, low, high)
