"""
Parameter derivation for the two generators.

Both derivations are exact: every ceiling of a base-2 logarithm is evaluated on integers or
fractions, never on floats.
"""

import logging
from fractions import Fraction
from typing import NamedTuple

from core.errors import ParameterError
from core.gf2 import ceil_lg
from fourier.mass import mass_bound

logger = logging.getLogger(__name__)


class StarParams(NamedTuple):
    k: int
    r: int
    gamma: float
    delta: float
    mass: float


def derive_params_exact(n: int, w: int) -> tuple[int, int]:
    """
    k = ceil(5 lg n + 2 lg w), r = ceil(2 lg n + lg(w) / 2).

    Returns:
        tuple[int, int]: (k, r).
    """
    if n < 2 or w < 1:
        raise ParameterError(f"exact parameters need n >= 2 and w >= 1, got n={n}, w={w}")
    k = ceil_lg(n**5 * w**2)
    # 2r >= lg(n^4 w)
    r = -(-ceil_lg(n**4 * w) // 2)
    return k, r


def derive_params_star(n: int, w: int, epsilon: float, mass_mode: str | None = None,
                       chrt_constant: float | None = None) -> StarParams:
    """
    r = ceil(lg n), k = ceil(3 lg(nw / eps)), gamma = (nw / eps)^-9, delta = (nw L / eps)^-3.

    Args:
        n (int): Input length.
        w (int): Width.
        epsilon (float): Target error, 0 < epsilon < 1.
        mass_mode (str | None): Mode of the level-mass bound L = L(n, w; k).
        chrt_constant (float | None): Constant of the chrt mass bound.

    Returns:
        StarParams: The derived parameters and the mass bound used for delta.
    """
    if not 0 < epsilon < 1:
        raise ParameterError(f"epsilon must lie in (0, 1), got {epsilon}")
    if n < 1 or w < 1:
        raise ParameterError(f"star parameters need n >= 1 and w >= 1, got n={n}, w={w}")

    ratio = Fraction(n * w) / Fraction(epsilon)
    r = ceil_lg(n)
    k = ceil_lg(ratio**3)
    gamma = float(ratio) ** -9

    bound = mass_bound(n, w, k, mode=mass_mode, c=chrt_constant)
    if bound.overflow:
        raise ParameterError(f"mass bound L({n}, {w}; {k}) overflows, delta would be 0")
    try:
        delta = (n * w * bound.value / epsilon) ** -3
    except (OverflowError, ZeroDivisionError) as e:
        raise ParameterError(f"delta for n={n} w={w} eps={epsilon} is not representable: {e}") from e
    if delta == 0.0 or gamma == 0.0:
        raise ParameterError(f"delta={delta}, gamma={gamma} underflow for n={n} w={w} eps={epsilon}")

    logger.debug(f"star parameters n={n} w={w} eps={epsilon}: k={k} r={r} gamma={gamma:.3g} delta={delta:.3g}")
    return StarParams(k, r, gamma, delta, bound.value)
