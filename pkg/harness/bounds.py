"""Theoretical error bounds the measured errors are checked against."""

import math

from generator.spec import GeneratorSpec, Variant
from fourier.mass import mass_bound


def step_bound_exact(n: int, w: int, k: int) -> float:
    """D + T AND U with 2k-wise D, k-wise T: error <= nw / 2^(k/2)."""
    return n * w / 2 ** (k / 2)


def step_bound_star(n: int, w: int, k: int, delta: float, gamma: float, mass: float) -> float:
    """delta-biased D, gamma-almost k-wise T: error <= (sqrt(delta) L + 2^(-k/2) + sqrt(gamma)) nw."""
    return (math.sqrt(delta) * mass + 2 ** (-k / 2) + math.sqrt(gamma)) * n * w


def composite_bound_exact(n: int, w: int, k: int, r: int) -> float:
    """r * nw / 2^(k/2) + 2n sqrt(w) / 2^r."""
    return r * step_bound_exact(n, w, k) + 2 * n * math.sqrt(w) / 2**r


def composite_bound_star(n: int, w: int, k: int, r: int, delta: float, gamma: float, mass: float) -> float:
    """r * star step bound + r (2^-floor(k/2) + 2 gamma 4^k) * 2 sqrt(w)."""
    noise = r * (2.0 ** -(k // 2) + 2 * gamma * 4.0**k) * 2 * math.sqrt(w)
    return r * step_bound_star(n, w, k, delta, gamma, mass) + noise


def generator_bound(spec: GeneratorSpec, mass_mode: str | None = None) -> float:
    if spec.variant == Variant.EXACT:
        return composite_bound_exact(spec.n, spec.w, spec.k, spec.r)
    mass = mass_bound(spec.n, spec.w, spec.k, mode=mass_mode).value
    return composite_bound_star(spec.n, spec.w, spec.k, spec.r, spec.delta, spec.gamma, mass)


def is_vacuous(bound: float, w: int) -> bool:
    """Every error matrix has Frobenius norm at most 2 sqrt(w); bounds above that say nothing."""
    return bound > 2 * math.sqrt(w)
