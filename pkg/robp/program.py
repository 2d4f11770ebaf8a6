"""
Read-once oblivious branching programs in the matrix-product encoding.

A program of length n and width w is stored as a successor table `successors[i, b, s]`: the
state reached from state s when layer i reads bit b. The transition matrix A_{i,b} has a single
1 in row s at column successors[i, b, s]. Layer i reads input position `order[i]` (0-indexed),
so

    F(x) = A_{0, x[order[0]]} A_{1, x[order[1]]} ... A_{n-1, x[order[n-1]]}

and the program accepts x when the path from state 0 ends in state 0 (the [0, 0] entry of F(x)).
"""

from __future__ import annotations

import logging
from typing import Sequence

import numpy as np
from numpy.typing import NDArray

from core.bitvector import BitVector
from core.errors import DimensionError, ValidationError
from core.matrix import DenseMatrix, identity, successors_of, transition_matrix

logger = logging.getLogger(__name__)


def check_permutation(sigma: Sequence[int], n: int) -> tuple[int, ...]:
    sigma = tuple(int(s) for s in sigma)
    if sorted(sigma) != list(range(n)):
        raise ValidationError(f"{sigma} is not a permutation of 0..{n - 1}")
    return sigma


class BranchingProgram:
    """
    Immutable read-once branching program.

    Args:
        successors (NDArray[np.int64]): Shape (n, 2, w), entries in [0, w).
        order (Sequence[int] | None): Input position read by each layer; identity when omitted.
    """

    __slots__ = ("_successors", "_order")

    def __init__(self, successors: NDArray, order: Sequence[int] | None = None, w: int | None = None):
        succ = np.array(successors, dtype=np.int64)
        if succ.size == 0:
            if w is None:
                raise DimensionError("an empty program needs an explicit width")
            succ = np.zeros((0, 2, w), dtype=np.int64)
        if succ.ndim != 3 or succ.shape[1] != 2:
            raise DimensionError(f"successor table must have shape (n, 2, w), got {succ.shape}")
        n, _, width = succ.shape
        if width < 1:
            raise ValidationError("width must be at least 1")
        if np.any(succ < 0) or np.any(succ >= width):
            raise ValidationError(f"successor outside 0..{width - 1}")
        succ.setflags(write=False)
        self._successors = succ
        self._order = check_permutation(range(n) if order is None else order, n)

    # ------------------------------------------------------------------
    # Constructors
    # ------------------------------------------------------------------
    @classmethod
    def from_matrices(cls, layers: Sequence[tuple[DenseMatrix, DenseMatrix]], order: Sequence[int] | None = None,
                      w: int | None = None) -> BranchingProgram:
        succ = [[successors_of(a0), successors_of(a1)] for a0, a1 in layers]
        return cls(np.array(succ, dtype=np.int64), order, w=w)

    # ------------------------------------------------------------------
    # Accessors
    # ------------------------------------------------------------------
    @property
    def n(self) -> int:
        return self._successors.shape[0]

    @property
    def w(self) -> int:
        return self._successors.shape[2]

    @property
    def successors(self) -> NDArray[np.int64]:
        return self._successors

    @property
    def order(self) -> tuple[int, ...]:
        return self._order

    @property
    def layers(self) -> list[tuple[DenseMatrix, DenseMatrix]]:
        return [(transition_matrix(s[0]), transition_matrix(s[1])) for s in self._successors]

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, BranchingProgram)
            and self._order == other._order
            and self._successors.shape == other._successors.shape
            and bool(np.all(self._successors == other._successors))
        )

    def __hash__(self) -> int:
        return hash((self._order, self._successors.tobytes()))

    def __repr__(self) -> str:
        return f"BranchingProgram(n={self.n}, w={self.w})"


# ----------------------------------------------------------------------
# Evaluation
# ----------------------------------------------------------------------
def _input_word(bp: BranchingProgram, x: BitVector | int) -> int:
    if isinstance(x, BitVector):
        if x.length != bp.n:
            raise DimensionError(f"program reads {bp.n} bits, input has {x.length}")
        return x.word
    if x < 0 or x >> bp.n:
        raise DimensionError(f"input {x:#x} does not fit in {bp.n} bits")
    return x


def final_states(bp: BranchingProgram, x: BitVector | int) -> NDArray[np.int64]:
    """Entry s is the state reached from start state s on input x."""
    word = _input_word(bp, x)
    states = np.arange(bp.w)
    for i, pos in enumerate(bp.order):
        states = bp.successors[i, (word >> pos) & 1, states]
    return states


def product_matrix(bp: BranchingProgram, x: BitVector | int) -> DenseMatrix:
    return transition_matrix(final_states(bp, x))


def evaluate(bp: BranchingProgram, x: BitVector | int) -> int:
    return int(final_states(bp, x)[0] == 0)


def all_final_states(bp: BranchingProgram, words: NDArray | None = None) -> NDArray[np.int64]:
    """Shape (len(words), w): final state from each start state; every input word by default."""
    words = np.arange(1 << bp.n, dtype=np.int64) if words is None else np.asarray(words).astype(np.int64)
    states = np.broadcast_to(np.arange(bp.w), (words.size, bp.w))
    for i, pos in enumerate(bp.order):
        bits = (words >> pos) & 1
        states = bp.successors[i][bits[:, None], states]
    return np.array(states)


def truth_table(bp: BranchingProgram) -> NDArray[np.float64]:
    """Shape (2^n, w, w): F(x) for every input word x."""
    finals = all_final_states(bp)
    table = np.zeros((finals.shape[0], bp.w, bp.w), dtype=np.float64)
    rows = np.arange(bp.w)
    table[np.arange(finals.shape[0])[:, None], rows[None, :], finals] = 1.0
    return table


def accepted(bp: BranchingProgram) -> NDArray[np.int64]:
    """0/1 acceptance of every input word."""
    return (all_final_states(bp)[:, 0] == 0).astype(np.int64)


def uniform_expectation(bp: BranchingProgram) -> DenseMatrix:
    """E_U F(U) as the product of the averaged layers (A_{i,0} + A_{i,1}) / 2."""
    result = identity(bp.w)
    for a0, a1 in bp.layers:
        result = result @ ((a0 + a1) / 2)
    return result


# ----------------------------------------------------------------------
# Structural operations
# ----------------------------------------------------------------------
def read_order_input(bp: BranchingProgram, x: BitVector | int) -> int:
    """The input rearranged into layer order: bit i is the bit read by layer i."""
    word = _input_word(bp, x)
    out = 0
    for i, pos in enumerate(bp.order):
        out |= ((word >> pos) & 1) << i
    return out


def split(bp: BranchingProgram, i: int) -> tuple[BranchingProgram, BranchingProgram]:
    """
    Prefix (first i layers) and suffix (remaining layers), both reading their bits in layer order.

    For y = read_order_input(bp, x): F(x) = F_prefix(y[:i]) F_suffix(y[i:]).
    """
    if not 0 <= i <= bp.n:
        raise DimensionError(f"split index {i} outside 0..{bp.n}")
    prefix = BranchingProgram(bp.successors[:i], w=bp.w)
    suffix = BranchingProgram(bp.successors[i:], w=bp.w)
    return prefix, suffix


def permute_order(bp: BranchingProgram, sigma: Sequence[int]) -> BranchingProgram:
    """The program x -> F(x o sigma), where (x o sigma)[j] = x[sigma[j]] (0-indexed)."""
    sigma = check_permutation(sigma, bp.n)
    return BranchingProgram(bp.successors, [sigma[p] for p in bp.order])


def restrict(bp: BranchingProgram, d: BitVector | int, t: BitVector | int) -> BranchingProgram:
    """The program x -> F(d XOR (t AND x)); positions with t = 0 are fixed to d."""
    d_word = _input_word(bp, d)
    t_word = _input_word(bp, t)
    succ = np.empty_like(bp.successors)
    for i, pos in enumerate(bp.order):
        d_bit = (d_word >> pos) & 1
        if (t_word >> pos) & 1:
            succ[i, 0] = bp.successors[i, d_bit]
            succ[i, 1] = bp.successors[i, 1 - d_bit]
        else:
            succ[i, 0] = succ[i, 1] = bp.successors[i, d_bit]
    return BranchingProgram(succ, bp.order, w=bp.w)


# ----------------------------------------------------------------------
# Program families
# ----------------------------------------------------------------------
def identity_program(n: int, w: int) -> BranchingProgram:
    succ = np.broadcast_to(np.arange(w), (n, 2, w))
    return BranchingProgram(np.array(succ), w=w)


def parity_program(n: int) -> BranchingProgram:
    """Width 2; accepts inputs of even parity."""
    succ = np.array([[[0, 1], [1, 0]]] * n, dtype=np.int64).reshape(n, 2, 2)
    return BranchingProgram(succ, w=2)


def random_program(n: int, w: int, rng_seed: int | None = None) -> BranchingProgram:
    """Every transition row picks an independent uniform successor; identity order."""
    if w < 1:
        raise ValidationError("width must be at least 1")
    rng = np.random.default_rng(rng_seed)
    return BranchingProgram(rng.integers(0, w, size=(n, 2, w)), w=w)


def random_order(n: int, rng_seed: int | None = None) -> tuple[int, ...]:
    rng = np.random.default_rng(rng_seed)
    return tuple(int(p) for p in rng.permutation(n))


def restricted_expectations(bp: BranchingProgram, a_words: NDArray, b_words: NDArray) -> NDArray[np.float64]:
    """
    E_U F(a XOR (b AND U)) for each pair (a_words[j], b_words[j]), shape (P, w, w).

    The bits of U are independent, so each layer contributes A_{i, a_p} where b_p = 0 and the
    average (A_{i,0} + A_{i,1}) / 2 where b_p = 1.
    """
    a_words = np.asarray(a_words, dtype=np.int64)
    b_words = np.asarray(b_words, dtype=np.int64)
    if a_words.shape != b_words.shape:
        raise DimensionError(f"pair arrays differ in shape: {a_words.shape} vs {b_words.shape}")
    result = np.broadcast_to(identity(bp.w), a_words.shape + (bp.w, bp.w)).copy()
    for (a0, a1), pos in zip(bp.layers, bp.order):
        avg = (a0 + a1) / 2
        choices = np.stack([a0, a1, avg, avg])
        codes = 2 * ((b_words >> pos) & 1) + ((a_words >> pos) & 1)
        result = result @ choices[codes]
    return result
