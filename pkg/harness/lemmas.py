"""
Exact checks of the inequalities behind the generator's analysis.

All expectations over D and T are taken over the exact pmfs of their descriptors, so every
check is an exact computation up to float rounding.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from numpy.typing import NDArray

from config import config
from core.errors import BudgetExceededError, ValidationError
from core.matrix import DenseMatrix, frobenius_norm
from core.transforms import popcount, xor_convolve
from fourier.expansion import FourierExpansion
from generator.distribution import exact_output_distribution, mask_distribution
from generator.spec import GeneratorSpec, Variant
from harness.fooling import StepParams, expectation_under, pair_support
from primitives.descriptor import kwise
from primitives.distribution import ExactDistribution, exact_counts
from robp.program import BranchingProgram, restricted_expectations, uniform_expectation

logger = logging.getLogger(__name__)

settings = config('robpgen:harness')
generator_settings = config('robpgen:generator')

TOLERANCE = settings.getfloat("TOLERANCE", fallback=1e-9)
MAX_PROFILE_N = generator_settings.getint("MAX_PROFILE_N", fallback=10)


# ----------------------------------------------------------------------
# High-level part bound
# ----------------------------------------------------------------------
@dataclass(frozen=True)
class HBoundCheck:
    lhs: float
    rhs: float
    diagonal: float

    @property
    def passed(self) -> bool:
        return self.lhs <= self.rhs + TOLERANCE

    @property
    def cross_terms(self) -> float:
        return self.lhs - self.diagonal


def lemma_h_bound_check(H: FourierExpansion, step: StepParams, budget_bits: int | None = None) -> HBoundCheck:
    """
    E_{D,T} ||E_U H(D + T AND U)||^2 against its bound, for H supported on level k only.

    E_U chi_alpha(D + T AND U) = chi_alpha(D) 1{alpha AND T = 0}, so the inner expectation is
    sum_alpha H^_alpha chi_alpha(d) 1{alpha AND t = 0} for every (d, t) in the supports.

    Args:
        H (FourierExpansion): Coefficients, all at level step.k.
        step (StepParams): Distributions of D and T.
        budget_bits (int | None): Seed enumeration budget for the pmfs.

    Returns:
        HBoundCheck: lhs, rhs and the diagonal (alpha = beta) part of lhs.
    """
    bad = [a for a in H.coefficients if a.bit_count() != step.k]
    if bad:
        raise ValidationError(f"H has coefficients off level {step.k}: {[bin(a) for a in bad[:4]]}")

    alphas = np.array(sorted(H.coefficients), dtype=np.int64)
    squared = sum(float(np.sum(H.coefficients[a] ** 2)) for a in H.coefficients)
    total_norm = sum(frobenius_norm(H.coefficients[a]) for a in H.coefficients)
    if step.kind == "exact":
        rhs = 2.0**-step.k * squared
    else:
        rhs = (2.0**-step.k + step.gamma) * (step.delta * total_norm**2 + squared)
    if alphas.size == 0:
        return HBoundCheck(0.0, rhs, 0.0)

    d_desc, t_desc = step.descriptors(H.n)
    d = exact_counts(d_desc, budget_bits)
    t = exact_counts(t_desc, budget_bits)
    dd, tt, weights = pair_support(d, t)

    coeffs = np.stack([H.coefficients[int(a)] for a in alphas]).reshape(len(alphas), -1)
    signs = 1 - 2 * (popcount(dd[:, None] & alphas[None, :]) & 1)
    alive = (tt[:, None] & alphas[None, :]) == 0
    inner = (signs * alive) @ coeffs
    lhs = float(np.sum(weights * np.sum(inner * inner, axis=1)))

    t_words = t.support()
    t_probs = t.probabilities()[t_words]
    kill = np.array([t_probs[(t_words & a) == 0].sum() for a in alphas])
    diagonal = float(np.sum(kill * np.sum(coeffs * coeffs, axis=1)))

    logger.debug(f"H bound ({step.kind}, k={step.k}): lhs={lhs:.6g} rhs={rhs:.6g}")
    return HBoundCheck(lhs, rhs, diagonal)


# ----------------------------------------------------------------------
# Character kill under masks
# ----------------------------------------------------------------------
@dataclass(frozen=True)
class CharacterKill:
    value: float
    uniform_value: float
    bound: float

    @property
    def passed(self) -> bool:
        return self.value <= self.bound + TOLERANCE and abs(self.uniform_value) <= TOLERANCE


def character_kill_check(alpha: int, g_table: NDArray, k: int, budget_bits: int | None = None) -> CharacterKill:
    """
    |E f(T AND U)| for f = chi_alpha * g with T k-wise independent and g blind to supp(alpha).

    Args:
        alpha (int): Character word, |alpha| >= k.
        g_table (NDArray): Values of g on every input word, length 2^n.
        k (int): Independence of T.
        budget_bits (int | None): Seed enumeration budget for the pmf of T.

    Returns:
        CharacterKill: The value, E_U f(U) and the bound 2^-k.
    """
    g = np.asarray(g_table, dtype=np.float64)
    size = g.shape[0]
    n = size.bit_length() - 1
    if g.ndim != 1 or size != 1 << n:
        raise ValidationError(f"g must be a table of length 2^n, got shape {g.shape}")
    if alpha.bit_count() < k:
        raise ValidationError(f"character weight {alpha.bit_count()} is below k={k}")
    words = np.arange(size)
    if not np.array_equal(g, g[words & ~alpha]):
        raise ValidationError("g depends on coordinates inside the support of alpha")

    f = g * (1 - 2 * (popcount(words & alpha) & 1))
    t = exact_counts(kwise(n, k), budget_bits)
    t_words = t.support()
    t_probs = t.probabilities()[t_words]
    per_mask = np.array([f[tw & words].mean() for tw in t_words])
    value = abs(float(np.dot(t_probs, per_mask)))
    return CharacterKill(value, float(f.mean()), 2.0**-k)


# ----------------------------------------------------------------------
# Per-level error profile
# ----------------------------------------------------------------------
@dataclass
class LevelProfile:
    """
    Triangle decomposition of the generator's error.

    Attributes:
        total (float): ||E F(G_r) - E F(U)||.
        contributions (list[float]): c_1 .. c_r, the single-step error of level i averaged over
            the restrictions the levels above i induce.
        base_residual (float): Error left at the base distribution G_0.
    """

    total: float
    contributions: list[float] = field(default_factory=list)
    base_residual: float = 0.0

    @property
    def bound(self) -> float:
        return sum(self.contributions) + self.base_residual

    @property
    def passed(self) -> bool:
        return self.total <= self.bound + TOLERANCE


def _push_pair_pmf(pairs: NDArray[np.float64], d: ExactDistribution, t: ExactDistribution,
                   cache: dict[int, tuple[NDArray, NDArray]]) -> NDArray[np.float64]:
    """(a, b) -> (a XOR (b AND D), b AND T) on a dense pair pmf indexed [a, b]."""
    size = pairs.shape[0]
    d_words, d_probs = d.support(), d.probabilities()[d.support()]
    t_words, t_probs = t.support(), t.probabilities()[t.support()]
    out = np.zeros_like(pairs)
    for b in np.flatnonzero(pairs.any(axis=0)):
        if b not in cache:
            cache[b] = (
                np.bincount(d_words & b, weights=d_probs, minlength=size),
                np.bincount(t_words & b, weights=t_probs, minlength=size),
            )
        q_b, r_b = cache[b]
        shifted = xor_convolve(pairs[:, b], q_b)
        out += np.outer(shifted, r_b)
    return out


def _pair_expectation(bp: BranchingProgram, pairs: NDArray[np.float64]) -> DenseMatrix:
    a_words, b_words = np.nonzero(pairs)
    weights = pairs[a_words, b_words]
    return np.tensordot(weights, restricted_expectations(bp, a_words, b_words), axes=1)


def level_error_profile(bp: BranchingProgram, spec: GeneratorSpec, max_n: int | None = None,
                        budget_bits: int | None = None) -> LevelProfile:
    """
    Splits ||E F(G_r) - E F(U)|| level by level.

    With G_r = A_j XOR (B_j AND G_j) for the pair (A_j, B_j) built from levels r .. j+1, let
    X_j = E F(A_j XOR (B_j AND U)). Then X_r = E F(U) and

        E F(G_r) - E F(U) = (E F(G_r) - X_0) + sum_{j=1..r} (X_{j-1} - X_j),

    so the total error is at most the base residual plus the contributions ||X_{j-1} - X_j||.
    """
    limit = MAX_PROFILE_N if max_n is None else max_n
    if bp.n > limit:
        raise BudgetExceededError(f"level profile over pairs of {bp.n}-bit words", 2 * bp.n, 2 * limit)
    if spec.n != bp.n:
        raise ValidationError(f"generator outputs {spec.n} bits, program reads {bp.n}")

    size = 1 << bp.n
    pairs = np.zeros((size, size))
    pairs[0, size - 1] = 1.0
    x_prev = uniform_expectation(bp)
    contributions: list[float] = []
    for level in range(spec.r, 0, -1):
        d_desc, t_desc = spec.level_descriptors(level)
        pairs = _push_pair_pmf(pairs, exact_counts(d_desc, budget_bits), exact_counts(t_desc, budget_bits), {})
        x_next = _pair_expectation(bp, pairs)
        contributions.append(frobenius_norm(x_next - x_prev))
        x_prev = x_next
    contributions.reverse()

    generated = expectation_under(bp, exact_output_distribution(spec, budget_bits=budget_bits))
    total = frobenius_norm(generated - uniform_expectation(bp))
    profile = LevelProfile(total, contributions, frobenius_norm(generated - x_prev))
    logger.debug(f"level profile: total={total:.4g} contributions={contributions} base={profile.base_residual:.4g}")
    return profile


# ----------------------------------------------------------------------
# Noise mask
# ----------------------------------------------------------------------
@dataclass(frozen=True)
class NoiseProfile:
    """
    Distribution of the mask Y = T_1 AND ... AND T_r.

    Attributes:
        per_coordinate (list[Fraction]): Pr[Y_j = 1] for every coordinate j.
        bound (float): 2^-r, the per-coordinate bound for exact k-wise T.
        threshold (int): Weight threshold of the tail diagnostic.
        tail (Fraction): Pr[|Y| >= threshold].
        asserted (bool): Whether the per-coordinate bound applies (exact variant).
    """

    per_coordinate: list[Fraction]
    bound: float
    threshold: int
    tail: Fraction
    asserted: bool

    @property
    def passed(self) -> bool:
        return not self.asserted or all(p <= self.bound + TOLERANCE for p in self.per_coordinate)


def noise_mask_profile(spec: GeneratorSpec, budget_bits: int | None = None) -> NoiseProfile:
    y = mask_distribution(spec, budget_bits=budget_bits)
    support = y.support()
    den = 1 << y.log2_denominator
    per_coordinate = [
        Fraction(int(sum(y.numerators[support[(support >> j) & 1 == 1]])), den) for j in range(spec.n)
    ]
    threshold = 1 if spec.variant == Variant.EXACT else spec.base.k
    heavy = support[popcount(support) >= threshold]
    tail = Fraction(int(sum(y.numerators[heavy])), den)
    return NoiseProfile(per_coordinate, 2.0**-spec.r, threshold, tail, spec.variant == Variant.EXACT)
