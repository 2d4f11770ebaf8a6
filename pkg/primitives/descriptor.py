"""
Distribution descriptors: which pseudorandom primitive, over how many bits, at what seed cost.

Seed layouts (all little-endian, bit 0 first):

    kwise        k coefficients c_0 .. c_{k-1} in GF(2^m), m = ceil(lg max(n, 2)),
                 c_i = seed bits [i*m, (i+1)*m)                            k*m bits
    smallbias    x = bits [0, m), y = bits [m, 2m), m = ceil(lg(n / delta))    2m bits
    almostkwise  smallbias with delta' = gamma * 2^(-k/2),
                 m = ceil(lg(n * 2^(k/2) / gamma))                             2m bits
    pointmass    no seed                                                        0 bits
    uniform      the seed is the sample                                         n bits
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from core.bitvector import BitVector
from core.errors import ValidationError
from core.field import FieldContext, field_context
from core.gf2 import ceil_lg

logger = logging.getLogger(__name__)


class Kind(str, Enum):
    KWISE = "kwise"
    SMALL_BIAS = "smallbias"
    ALMOST_KWISE = "almostkwise"
    POINT_MASS = "pointmass"
    UNIFORM = "uniform"


@dataclass(frozen=True)
class DistributionDescriptor:
    """
    A seeded distribution over F_2^n.

    Attributes:
        kind (Kind): Which construction.
        n (int): Output length.
        k (int | None): Independence level (kwise, almostkwise).
        delta (float | None): Bias (smallbias).
        gamma (float | None): Distance from k-wise independence (almostkwise).
        point (int | None): The atom of a point mass, as a word.
    """

    kind: Kind
    n: int
    k: int | None = None
    delta: float | None = None
    gamma: float | None = None
    point: int | None = None

    def __post_init__(self):
        if self.n < 0:
            raise ValidationError(f"output length must be >= 0, got {self.n}")
        if self.kind in (Kind.KWISE, Kind.ALMOST_KWISE) and (self.k is None or self.k < 1):
            raise ValidationError(f"{self.kind.value} needs k >= 1, got {self.k}")
        if self.kind == Kind.SMALL_BIAS and (self.delta is None or not 0 < self.delta < 1):
            raise ValidationError(f"smallbias needs 0 < delta < 1, got {self.delta}")
        if self.kind == Kind.ALMOST_KWISE and (self.gamma is None or not 0 < self.gamma <= 1):
            raise ValidationError(f"almostkwise needs 0 < gamma <= 1, got {self.gamma}")
        if self.kind == Kind.POINT_MASS and (self.point is None or self.point >> self.n):
            raise ValidationError(f"pointmass atom {self.point} does not fit in {self.n} bits")

    # ------------------------------------------------------------------
    # Derived layout
    # ------------------------------------------------------------------
    @property
    def m(self) -> int:
        """Extension degree of the underlying field (0 when no field is used)."""
        if self.kind == Kind.KWISE:
            return max(1, ceil_lg(max(self.n, 2)))
        if self.kind == Kind.SMALL_BIAS:
            return max(1, ceil_lg(Fraction(self.n) / Fraction(self.delta)))
        if self.kind == Kind.ALMOST_KWISE:
            # 2^(2m) >= (n / gamma)^2 * 2^k
            target = (Fraction(self.n) / Fraction(self.gamma)) ** 2 * 2**self.k
            return max(1, -(-ceil_lg(target) // 2))
        return 0

    @property
    def seed_bits(self) -> int:
        if self.kind == Kind.KWISE:
            return self.k * self.m
        if self.kind in (Kind.SMALL_BIAS, Kind.ALMOST_KWISE):
            return 2 * self.m
        if self.kind == Kind.UNIFORM:
            return self.n
        return 0

    @property
    def ctx(self) -> FieldContext:
        return field_context(self.m)

    @property
    def effective_delta(self) -> float | None:
        """Bias of the small-bias space actually sampled."""
        if self.kind == Kind.SMALL_BIAS:
            return self.delta
        if self.kind == Kind.ALMOST_KWISE:
            return self.gamma * 2.0 ** (-self.k / 2)
        return None

    def covers_all_bits(self) -> bool:
        """True when the output is exactly uniform over F_2^n by construction."""
        return self.kind == Kind.UNIFORM or (self.kind == Kind.KWISE and self.k >= self.n)

    # ------------------------------------------------------------------
    # Text form
    # ------------------------------------------------------------------
    def to_text(self) -> str:
        head = f"{self.kind.value} n={self.n}"
        if self.kind == Kind.KWISE:
            return f"{head} k={self.k} m={self.m} poly={self.ctx.modulus:#x}"
        if self.kind == Kind.SMALL_BIAS:
            return f"{head} delta={self.delta!r} m={self.m}"
        if self.kind == Kind.ALMOST_KWISE:
            return f"{head} k={self.k} gamma={self.gamma!r} m={self.m}"
        if self.kind == Kind.POINT_MASS:
            return f"{head} v={BitVector.from_int(self.point, self.n)}"
        return head

    @classmethod
    def from_text(cls, text: str) -> DistributionDescriptor:
        parts = text.split()
        if not parts:
            raise ValidationError("empty descriptor text")
        try:
            kind = Kind(parts[0])
            fields = dict(p.split("=", 1) for p in parts[1:])
            n = int(fields["n"])
        except (ValueError, KeyError) as e:
            raise ValidationError(f"malformed descriptor {text!r}: {e}") from e

        if kind == Kind.KWISE:
            desc = kwise(n, int(fields["k"]))
        elif kind == Kind.SMALL_BIAS:
            desc = small_bias(n, float(fields["delta"]))
        elif kind == Kind.ALMOST_KWISE:
            desc = almost_kwise(n, int(fields["k"]), float(fields["gamma"]))
        elif kind == Kind.POINT_MASS:
            desc = point_mass(BitVector(fields["v"]))
        else:
            desc = uniform(n)

        if "m" in fields and int(fields["m"]) != desc.m:
            raise ValidationError(f"descriptor {text!r} declares m={fields['m']}, layout gives m={desc.m}")
        if "poly" in fields and int(fields["poly"], 16) != desc.ctx.modulus:
            raise ValidationError(f"descriptor {text!r} declares a non-default modulus")
        return desc

    def __str__(self) -> str:
        return self.to_text()


def kwise(n: int, k: int) -> DistributionDescriptor:
    return DistributionDescriptor(Kind.KWISE, n, k=k)


def small_bias(n: int, delta: float) -> DistributionDescriptor:
    return DistributionDescriptor(Kind.SMALL_BIAS, n, delta=delta)


def almost_kwise(n: int, k: int, gamma: float) -> DistributionDescriptor:
    return DistributionDescriptor(Kind.ALMOST_KWISE, n, k=k, gamma=gamma)


def point_mass(v: BitVector) -> DistributionDescriptor:
    return DistributionDescriptor(Kind.POINT_MASS, v.length, point=v.word)


def uniform(n: int) -> DistributionDescriptor:
    return DistributionDescriptor(Kind.UNIFORM, n)
