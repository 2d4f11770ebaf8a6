"""
Fooling-error measurement: exact (from an exact output pmf) and Monte Carlo.

The error of a distribution G against a program F is the matrix E F(G) - E F(U); reports carry
its Frobenius norm and the scalar |[0, 0] entry|, which is the acceptance-probability gap.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray
from scipy import stats

from config import config
from core.errors import ValidationError
from core.matrix import DenseMatrix, frobenius_norm
from generator.distribution import exact_output_distribution
from generator.expand import sample_generator_outputs
from generator.spec import GeneratorSpec
from harness.bounds import step_bound_exact, step_bound_star
from fourier.mass import mass_bound
from primitives.descriptor import DistributionDescriptor, almost_kwise, kwise, small_bias
from primitives.distribution import ExactDistribution, exact_counts
from robp.program import BranchingProgram, all_final_states, restricted_expectations, uniform_expectation

logger = logging.getLogger(__name__)

settings = config('robpgen:harness')

CONFIDENCE = settings.getfloat("CONFIDENCE", fallback=0.99)


@dataclass(frozen=True)
class FoolingError:
    frobenius: float
    scalar: float

    @classmethod
    def of(cls, error: DenseMatrix) -> FoolingError:
        return cls(frobenius_norm(error), float(abs(error[0, 0])))


@dataclass(frozen=True)
class SampledError:
    estimate: float
    half_width: float
    scalar: float
    samples: int


@dataclass(frozen=True)
class StepParams:
    """
    One step D + T AND U.

    Attributes:
        kind (str): "exact" (2k-wise D, k-wise T) or "star" (delta-biased D, gamma-almost k-wise T).
        k (int): Independence parameter.
        delta (float | None): Bias of D (star).
        gamma (float | None): Distance of T from k-wise independence (star).
    """

    kind: str
    k: int
    delta: float | None = None
    gamma: float | None = None

    def __post_init__(self):
        if self.kind not in ("exact", "star"):
            raise ValidationError(f"unknown step kind {self.kind!r}")
        if self.kind == "star" and (self.delta is None or self.gamma is None):
            raise ValidationError("star steps need delta and gamma")

    def descriptors(self, n: int) -> tuple[DistributionDescriptor, DistributionDescriptor]:
        if self.kind == "exact":
            return kwise(n, 2 * self.k), kwise(n, self.k)
        return small_bias(n, self.delta), almost_kwise(n, self.k, self.gamma)

    def bound(self, n: int, w: int, mass_mode: str | None = None) -> float:
        if self.kind == "exact":
            return step_bound_exact(n, w, self.k)
        mass = mass_bound(n, w, self.k, mode=mass_mode).value
        return step_bound_star(n, w, self.k, self.delta, self.gamma, mass)


def expectation_under(bp: BranchingProgram, pmf: ExactDistribution) -> DenseMatrix:
    """E F(G) for G distributed as pmf."""
    if pmf.n != bp.n:
        raise ValidationError(f"distribution over {pmf.n} bits, program reads {bp.n}")
    support = pmf.support()
    weights = pmf.probabilities()[support]
    finals = all_final_states(bp, support)
    out = np.zeros((bp.w, bp.w))
    for s in range(bp.w):
        out[s] = np.bincount(finals[:, s], weights=weights, minlength=bp.w)
    return out


def exact_fooling_error(bp: BranchingProgram, spec: GeneratorSpec | ExactDistribution) -> FoolingError:
    """
    Exact error of the generator (or of any exact distribution) against bp.

    Args:
        bp (BranchingProgram): The program.
        spec (GeneratorSpec | ExactDistribution): The generator, or its output pmf if already known.

    Returns:
        FoolingError: Frobenius and scalar error.
    """
    pmf = spec if isinstance(spec, ExactDistribution) else exact_output_distribution(spec)
    error = expectation_under(bp, pmf) - uniform_expectation(bp)
    return FoolingError.of(error)


def _z(confidence: float) -> float:
    return float(stats.norm.ppf(0.5 + confidence / 2))


def sampled_error_from_outputs(bp: BranchingProgram, outputs: NDArray[np.uint64],
                               confidence: float | None = None) -> SampledError:
    """Monte Carlo error from explicit generator outputs; Wilson score half-width per entry, combined in quadrature."""
    count = len(outputs)
    if count < 2:
        raise ValidationError("sampled estimates need at least 2 samples")
    z = _z(CONFIDENCE if confidence is None else confidence)
    finals = all_final_states(bp, outputs)
    mean = np.zeros((bp.w, bp.w))
    for s in range(bp.w):
        mean[s] = np.bincount(finals[:, s], minlength=bp.w) / count
    # positive even when an entry is 0 or 1 on every sample
    per_entry = z / (1 + z**2 / count) * np.sqrt(mean * (1 - mean) / count + z**2 / (4 * count**2))
    half_width = float(np.sqrt(np.sum(per_entry**2)))
    error = mean - uniform_expectation(bp)
    return SampledError(frobenius_norm(error), half_width, float(abs(error[0, 0])), count)


def sampled_fooling_error(bp: BranchingProgram, spec: GeneratorSpec, samples: int, rng_seed: int,
                          confidence: float | None = None) -> SampledError:
    """Monte Carlo over uniform seeds; E F(U) is exact."""
    rng = np.random.default_rng(rng_seed)
    outputs = sample_generator_outputs(spec, rng, samples)
    result = sampled_error_from_outputs(bp, outputs, confidence)
    logger.debug(f"sampled error {result.estimate:.4g} +/- {result.half_width:.3g} over {samples} samples")
    return result


def pair_support(d: ExactDistribution, t: ExactDistribution) -> tuple[NDArray, NDArray, NDArray]:
    """All (d, t) in supp(D) x supp(T) with their joint probabilities."""
    d_words, t_words = d.support(), t.support()
    weights = np.outer(d.probabilities()[d_words], t.probabilities()[t_words]).ravel()
    dd, tt = np.meshgrid(d_words, t_words, indexing="ij")
    return dd.ravel(), tt.ravel(), weights


def single_step_expectation(bp: BranchingProgram, d: ExactDistribution, t: ExactDistribution) -> DenseMatrix:
    """E_{D,T,U} F(D XOR (T AND U)), one product of per-layer averages per (d, t)."""
    dd, tt, weights = pair_support(d, t)
    return np.tensordot(weights, restricted_expectations(bp, dd, tt), axes=1)


def single_step_error(bp: BranchingProgram, step: StepParams, budget_bits: int | None = None) -> FoolingError:
    """
    Exact error of D + T AND U against bp.

    Args:
        bp (BranchingProgram): The program.
        step (StepParams): Which D and T.
        budget_bits (int | None): Seed enumeration budget for the pmfs of D and T.

    Returns:
        FoolingError: Frobenius and scalar error.
    """
    d_desc, t_desc = step.descriptors(bp.n)
    d = exact_counts(d_desc, budget_bits)
    t = exact_counts(t_desc, budget_bits)
    error = single_step_expectation(bp, d, t) - uniform_expectation(bp)
    return FoolingError.of(error)
