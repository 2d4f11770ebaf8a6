"""
Fast transforms over F_2^n on arrays indexed by words x in [0, 2^n).

All transforms act along axis 0 and keep the dtype, so they work both on float64 arrays
(Fourier coefficients) and on object arrays of Python ints (exact dyadic masses).
"""

import numpy as np
from numpy.typing import NDArray

from core.errors import DimensionError


def _length_bits(a: np.ndarray) -> int:
    N = a.shape[0]
    if N < 1 or N & (N - 1):
        raise DimensionError(f"transform length {N} is not a power of two")
    return N.bit_length() - 1


def _butterfly(values: np.ndarray, combine) -> np.ndarray:
    a = np.array(values, copy=True)
    _length_bits(a)
    N = a.shape[0]
    h = 1
    while h < N:
        v = a.reshape((N // (2 * h), 2, h) + a.shape[1:])
        lo = v[:, 0].copy()
        hi = v[:, 1].copy()
        v[:, 0], v[:, 1] = combine(lo, hi)
        h *= 2
    return a


def walsh_hadamard(values: np.ndarray) -> np.ndarray:
    """Unnormalized transform: out[s] = sum_x values[x] * (-1)^<s,x>."""
    return _butterfly(values, lambda lo, hi: (lo + hi, lo - hi))


def superset_zeta(values: np.ndarray) -> np.ndarray:
    """out[S] = sum over x containing S of values[x]."""
    return _butterfly(values, lambda lo, hi: (lo + hi, hi))


def superset_mobius(values: np.ndarray) -> np.ndarray:
    """Inverse of `superset_zeta`."""
    return _butterfly(values, lambda lo, hi: (lo - hi, hi))


def xor_convolve(a: NDArray, b: NDArray) -> NDArray:
    """out[v] = sum_{s ^ t = v} a[s] b[t]; exact for object arrays of ints."""
    if a.shape[0] != b.shape[0]:
        raise DimensionError(f"length mismatch: {a.shape[0]} vs {b.shape[0]}")
    spectrum = walsh_hadamard(a) * walsh_hadamard(b)
    out = walsh_hadamard(spectrum)
    N = a.shape[0]
    if out.dtype == object:
        return out // N
    return out / N


def and_convolve(a: NDArray, b: NDArray) -> NDArray:
    """out[v] = sum_{s & t = v} a[s] b[t]."""
    if a.shape[0] != b.shape[0]:
        raise DimensionError(f"length mismatch: {a.shape[0]} vs {b.shape[0]}")
    return superset_mobius(superset_zeta(a) * superset_zeta(b))


def popcount(words: NDArray) -> NDArray:
    return np.bitwise_count(np.asarray(words, dtype=np.uint64)).astype(np.int64)
