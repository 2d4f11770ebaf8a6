"""Level-k Fourier mass bounds L(n, w; k) and a sampled maximization to compare them against."""

import logging
import math
from typing import NamedTuple

import numpy as np

from config import config
from core.errors import ValidationError
from fourier.expansion import level_masses
from robp.program import random_program

logger = logging.getLogger(__name__)

settings = config('robpgen:fourier')

CHRT_CONSTANT = settings.getfloat("CHRT_CONSTANT", fallback=1.0)
MASS_MODE = settings.get("MASS_MODE", fallback="trivial")

MASS_MODES = ("trivial", "chrt")


class MassBound(NamedTuple):
    value: float
    overflow: bool


def mass_bound(n: int, w: int, k: int, mode: str | None = None, c: float | None = None) -> MassBound:
    """
    Upper bound on sum_{i=1..k} L_i(F) over width-w programs on n bits.

    trivial:  sum_{i <= min(k, n)} sqrt(C(n, i)) * sqrt(w)
    chrt:     sum_{i <= min(k, n)} (c * lg n)^(w * i)

    Returns:
        MassBound: The value, or (inf, True) when it does not fit in a float.
    """
    mode = MASS_MODE if mode is None else mode
    c = CHRT_CONSTANT if c is None else c
    if mode not in MASS_MODES:
        raise ValidationError(f"unknown mass mode {mode!r}, expected one of {MASS_MODES}")
    if k < 0:
        raise ValidationError(f"level k={k} must be non-negative")

    top = min(k, n)
    try:
        if mode == "trivial":
            value = sum(math.sqrt(math.comb(n, i)) for i in range(1, top + 1)) * math.sqrt(w)
        else:
            base = c * math.log2(n) if n > 1 else 0.0
            value = sum(base ** (w * i) for i in range(1, top + 1))
    except OverflowError:
        logger.warning(f"{mode} mass bound for n={n} w={w} k={k} overflows")
        return MassBound(math.inf, True)
    if math.isinf(value):
        return MassBound(math.inf, True)
    return MassBound(float(value), False)


def max_level_mass_sampled(n: int, w: int, k: int, count: int, rng_seed: int | None = None) -> float:
    """Largest sum_{i=1..k} L_i(F) over `count` random width-w programs."""
    rng = np.random.default_rng(rng_seed)
    best = 0.0
    for program_seed in rng.integers(0, 2**63 - 1, size=count):
        masses = level_masses(random_program(n, w, int(program_seed)))
        best = max(best, float(np.sum(masses[1:k + 1])))
    logger.debug(f"max sampled level-{k} mass over {count} programs (n={n}, w={w}): {best:.4f}")
    return best
