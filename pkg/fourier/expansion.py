"""
Fourier expansions of matrix-valued functions on F_2^n.

A function F: F_2^n -> R^{w x w} is given by its truth table, an array of shape (2^n, w, w)
indexed by input word. Its coefficients are

    F^_alpha = E_x F(x) chi_alpha(x),        F(x) = sum_alpha F^_alpha chi_alpha(x),

computed entry-wise with one Walsh-Hadamard transform along the input axis.
"""

from __future__ import annotations

import logging
from pathlib import Path

import numpy as np
import polars as pl
from numpy.typing import NDArray

from config import config
from core.bitvector import BitVector
from core.errors import BudgetExceededError, DimensionError
from core.matrix import DenseMatrix, frobenius_norm
from core.transforms import popcount, walsh_hadamard
from robp.program import BranchingProgram, truth_table

logger = logging.getLogger(__name__)

settings = config('robpgen:fourier')

EXHAUSTIVE_BUDGET = settings.getint("EXHAUSTIVE_BUDGET", fallback=16)
PRUNE_TOLERANCE = settings.getfloat("PRUNE_TOLERANCE", fallback=1e-12)

MatrixFunction = NDArray[np.float64]


def table_bits(table: MatrixFunction) -> int:
    table = np.asarray(table)
    if table.ndim != 3 or table.shape[1] != table.shape[2]:
        raise DimensionError(f"truth table must have shape (2^n, w, w), got {table.shape}")
    size = table.shape[0]
    if size < 1 or size & (size - 1):
        raise DimensionError(f"truth table length {size} is not a power of two")
    return size.bit_length() - 1


def check_budget(n: int, budget: int | None = None) -> None:
    budget = EXHAUSTIVE_BUDGET if budget is None else budget
    if n > budget:
        raise BudgetExceededError(f"exact Fourier expansion over {n} bits", n, budget)


def coefficient_stack(table: MatrixFunction, budget: int | None = None) -> NDArray[np.float64]:
    """Dense coefficients, shape (2^n, w, w); entry alpha is F^_alpha."""
    n = table_bits(table)
    check_budget(n, budget)
    return walsh_hadamard(np.asarray(table, dtype=np.float64)) / (1 << n)


class FourierExpansion:
    """
    Sparse Fourier expansion: coefficients below the pruning tolerance are dropped.

    Args:
        n (int): Number of input bits.
        w (int): Matrix dimension.
        coefficients (dict[int, DenseMatrix]): alpha word -> coefficient matrix.
    """

    def __init__(self, n: int, w: int, coefficients: dict[int, DenseMatrix]):
        self.n = n
        self.w = w
        self.coefficients = coefficients

    @classmethod
    def from_stack(cls, stack: NDArray[np.float64], tolerance: float | None = None) -> FourierExpansion:
        tol = PRUNE_TOLERANCE if tolerance is None else tolerance
        n = table_bits(stack)
        norms = frobenius_norm(stack)
        keep = np.flatnonzero(norms >= tol)
        return cls(n, stack.shape[1], {int(a): stack[a].copy() for a in keep})

    def coefficient(self, alpha: int | BitVector) -> DenseMatrix:
        a = alpha.word if isinstance(alpha, BitVector) else alpha
        return self.coefficients.get(a, np.zeros((self.w, self.w)))

    def level(self, k: int) -> dict[int, DenseMatrix]:
        return {a: c for a, c in self.coefficients.items() if a.bit_count() == k}

    def degree(self) -> int:
        return max((a.bit_count() for a in self.coefficients), default=0)

    def stack(self) -> NDArray[np.float64]:
        dense = np.zeros((1 << self.n, self.w, self.w))
        for a, c in self.coefficients.items():
            dense[a] = c
        return dense

    def table(self) -> MatrixFunction:
        """sum_alpha F^_alpha chi_alpha(x) for every x."""
        return walsh_hadamard(self.stack())

    def evaluate(self, x: int | BitVector) -> DenseMatrix:
        word = x.word if isinstance(x, BitVector) else x
        out = np.zeros((self.w, self.w))
        for a, c in self.coefficients.items():
            out += -c if (a & word).bit_count() & 1 else c
        return out

    def squared_mass(self) -> float:
        return float(sum(np.sum(c * c) for c in self.coefficients.values()))

    def to_frame(self) -> pl.DataFrame:
        rows = [
            (str(BitVector.from_int(a, self.n)), r, c, float(coef[r, c]))
            for a, coef in sorted(self.coefficients.items())
            for r in range(self.w)
            for c in range(self.w)
        ]
        return pl.DataFrame(
            rows,
            schema={"alpha": pl.Utf8, "row": pl.Int64, "col": pl.Int64, "value": pl.Float64},
            orient="row",
        )

    def write_csv(self, path: str | Path) -> None:
        self.to_frame().write_csv(path)
        logger.info(f"Wrote {len(self.coefficients)} coefficients to {path}")

    def __repr__(self) -> str:
        return f"FourierExpansion(n={self.n}, w={self.w}, terms={len(self.coefficients)})"


def as_table(F: MatrixFunction | BranchingProgram) -> MatrixFunction:
    if isinstance(F, BranchingProgram):
        check_budget(F.n)
        return truth_table(F)
    return np.asarray(F, dtype=np.float64)


def expand(F: MatrixFunction | BranchingProgram, budget: int | None = None,
           tolerance: float | None = None) -> FourierExpansion:
    """
    Exact Fourier expansion of a truth table (or of a program's truth table).

    Args:
        F (MatrixFunction | BranchingProgram): Shape (2^n, w, w) truth table, or a program.
        budget (int | None): Largest n accepted.
        tolerance (float | None): Coefficients with smaller Frobenius norm are dropped.

    Returns:
        FourierExpansion: The non-negligible coefficients.
    """
    stack = coefficient_stack(as_table(F), budget)
    expansion = FourierExpansion.from_stack(stack, tolerance)
    logger.debug(f"Expanded n={expansion.n} w={expansion.w}: {len(expansion.coefficients)} coefficients")
    return expansion


def parseval_check(F: MatrixFunction | BranchingProgram, budget: int | None = None) -> tuple[float, float]:
    """(sum_alpha ||F^_alpha||^2, E_x ||F(x)||^2), computed independently."""
    table = as_table(F)
    stack = coefficient_stack(table, budget)
    lhs = float(np.sum(stack * stack))
    rhs = float(np.mean(np.sum(table * table, axis=(1, 2))))
    return lhs, rhs


def level_masses(F: MatrixFunction | BranchingProgram, budget: int | None = None) -> NDArray[np.float64]:
    """Entry k is L_k(F) = sum over |alpha| = k of ||F^_alpha||, for k = 0..n."""
    stack = coefficient_stack(as_table(F), budget)
    n = table_bits(stack)
    levels = popcount(np.arange(1 << n))
    return np.bincount(levels, weights=frobenius_norm(stack), minlength=n + 1)


def level_mass(F: MatrixFunction | BranchingProgram | FourierExpansion, k: int, budget: int | None = None) -> float:
    if isinstance(F, FourierExpansion):
        return float(sum(frobenius_norm(c) for c in F.level(k).values()))
    masses = level_masses(F, budget)
    return float(masses[k]) if 0 <= k < len(masses) else 0.0
