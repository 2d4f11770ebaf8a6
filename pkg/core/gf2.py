"""Linear algebra over GF(2) on integer words (one word = one vector)."""

from fractions import Fraction
from math import ceil
from typing import Iterable

import numpy as np
from numpy.typing import NDArray


def reduced_basis(vectors: Iterable[int]) -> tuple[int, ...]:
    """
    Canonical basis of span(vectors): fully reduced echelon form, sorted by leading bit.

    Two vector families span the same subspace iff their reduced bases are equal.
    """
    pivots: dict[int, int] = {}
    for v in vectors:
        while v:
            lead = v.bit_length() - 1
            if lead not in pivots:
                pivots[lead] = v
                break
            v ^= pivots[lead]
    for lead in sorted(pivots):
        for other in pivots:
            if other != lead and (pivots[other] >> lead) & 1:
                pivots[other] ^= pivots[lead]
    return tuple(pivots[lead] for lead in sorted(pivots))


def span(basis: tuple[int, ...]) -> NDArray[np.int64]:
    """All 2^rank points of the subspace spanned by `basis`."""
    points = np.zeros(1, dtype=np.int64)
    for v in basis:
        points = np.concatenate([points, points ^ v])
    return points


def ceil_lg(q: int | Fraction) -> int:
    """Smallest m >= 0 with 2^m >= q, computed exactly."""
    q = Fraction(q)
    if q <= 1:
        return 0
    return (ceil(q) - 1).bit_length()
