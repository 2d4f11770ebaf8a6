"""
Arithmetic in GF(2^m).

Elements are m-bit words read as polynomials over GF(2) (bit j is the coefficient of x^j),
reduced modulo a fixed irreducible polynomial. The built-in moduli are minimal-weight
(trinomial or pentanomial) irreducibles so that seeds are reproducible bit for bit:

    m : modulus
    1 : x + 1                       0x3
    2 : x^2 + x + 1                 0x7
    3 : x^3 + x + 1                 0xb
    4 : x^4 + x + 1                 0x13
    5 : x^5 + x^2 + 1               0x25
    6 : x^6 + x + 1                 0x43
    7 : x^7 + x + 1                 0x83
    8 : x^8 + x^4 + x^3 + x + 1     0x11b
    ...                             (see IRREDUCIBLE_MODULI, up to m = 32)
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from numpy.typing import NDArray

from core.errors import FieldError

logger = logging.getLogger(__name__)

IRREDUCIBLE_MODULI: dict[int, int] = {
    1: 0x3,
    2: 0x7,
    3: 0xB,
    4: 0x13,
    5: 0x25,
    6: 0x43,
    7: 0x83,
    8: 0x11B,
    9: 0x211,
    10: 0x409,
    11: 0x805,
    12: 0x1009,
    13: 0x201B,
    14: 0x4021,
    15: 0x8003,
    16: 0x1002B,
    17: 0x20009,
    18: 0x40081,
    19: 0x80027,
    20: 0x100009,
    21: 0x200005,
    22: 0x400003,
    23: 0x800021,
    24: 0x100001B,
    25: 0x2000009,
    26: 0x400001B,
    27: 0x8000027,
    28: 0x10000009,
    29: 0x20000005,
    30: 0x40000003,
    31: 0x80000009,
    32: 0x10000008D,
}

MAX_DEGREE = max(IRREDUCIBLE_MODULI)


def _degree(p: int) -> int:
    return p.bit_length() - 1


def poly_mod(a: int, b: int) -> int:
    """Remainder of a divided by b in GF(2)[x]."""
    db = _degree(b)
    da = _degree(a)
    while da >= db:
        a ^= b << (da - db)
        da = _degree(a)
    return a


@lru_cache(maxsize=None)
def is_irreducible(poly: int) -> bool:
    """Exhaustive trial division by every polynomial of degree 1 .. deg(poly)/2."""
    deg = _degree(poly)
    if deg < 1:
        return False
    if deg == 1:
        return True
    if poly & 1 == 0:
        return False
    for divisor in range(2, 1 << (deg // 2 + 1)):
        if poly_mod(poly, divisor) == 0:
            return False
    return True


@dataclass(frozen=True)
class FieldContext:
    """GF(2^m) defined by an irreducible modulus of degree m (bitmask encoding)."""

    m: int
    modulus: int

    def __post_init__(self):
        if self.m < 1 or self.m > MAX_DEGREE:
            raise FieldError(f"extension degree {self.m} outside 1..{MAX_DEGREE}")
        if _degree(self.modulus) != self.m:
            raise FieldError(f"modulus {self.modulus:#x} does not have degree {self.m}")
        if not is_irreducible(self.modulus):
            raise FieldError(f"modulus {self.modulus:#x} is reducible")

    @property
    def order(self) -> int:
        return 1 << self.m

    def element(self, value: int) -> FieldElement:
        return FieldElement(self, value)

    # ---------------------------------------------------------------
    # Word-level arithmetic (used by the samplers' inner loops)
    # ---------------------------------------------------------------
    def multiply(self, a: int, b: int) -> int:
        m, modulus = self.m, self.modulus
        res = 0
        while b:
            if b & 1:
                res ^= a
            b >>= 1
            a <<= 1
            if a >> m:
                a ^= modulus
        return res

    def power(self, a: int, e: int) -> int:
        result = 1
        while e:
            if e & 1:
                result = self.multiply(result, a)
            a = self.multiply(a, a)
            e >>= 1
        return result

    def inverse(self, a: int) -> int:
        if a == 0:
            raise FieldError("zero has no multiplicative inverse")
        return self.power(a, self.order - 2)

    def multiply_array(self, a: NDArray[np.uint64], b: NDArray[np.uint64]) -> NDArray[np.uint64]:
        """Element-wise product of two broadcastable uint64 arrays of field words."""
        a = np.asarray(a, dtype=np.uint64)
        b = np.asarray(b, dtype=np.uint64)
        one = np.uint64(1)
        res = np.zeros(np.broadcast_shapes(a.shape, b.shape), dtype=np.uint64)
        for i in range(self.m):
            shift = np.uint64(i)
            res ^= (a << shift) * ((b >> shift) & one)
        modulus = np.uint64(self.modulus)
        for d in range(2 * self.m - 2, self.m - 1, -1):
            res ^= (modulus << np.uint64(d - self.m)) * ((res >> np.uint64(d)) & one)
        return res


@lru_cache(maxsize=None)
def field_context(m: int) -> FieldContext:
    """The built-in GF(2^m) context."""
    if m not in IRREDUCIBLE_MODULI:
        raise FieldError(f"no built-in modulus for m={m} (supported: 1..{MAX_DEGREE})")
    ctx = FieldContext(m, IRREDUCIBLE_MODULI[m])
    logger.debug(f"GF(2^{m}) context with modulus {ctx.modulus:#x}")
    return ctx


@dataclass(frozen=True)
class FieldElement:
    ctx: FieldContext
    value: int

    def __post_init__(self):
        if not 0 <= self.value < self.ctx.order:
            raise FieldError(f"value {self.value:#x} is not an element of GF(2^{self.ctx.m})")

    def _check(self, other: FieldElement) -> None:
        if other.ctx != self.ctx:
            raise FieldError("elements belong to different fields")

    def __add__(self, other: FieldElement) -> FieldElement:
        self._check(other)
        return FieldElement(self.ctx, self.value ^ other.value)

    __sub__ = __add__

    def __mul__(self, other: FieldElement) -> FieldElement:
        return field_multiply(self.ctx, self, other)

    def __pow__(self, e: int) -> FieldElement:
        return field_power(self.ctx, self, e)

    def inverse(self) -> FieldElement:
        return FieldElement(self.ctx, self.ctx.inverse(self.value))

    def __repr__(self) -> str:
        return f"GF(2^{self.ctx.m})({self.value:#x})"


def field_multiply(ctx: FieldContext, a: FieldElement, b: FieldElement) -> FieldElement:
    """Carry-less product of a and b reduced modulo ctx.modulus."""
    if a.ctx != ctx or b.ctx != ctx:
        raise FieldError("elements belong to a different field")
    return FieldElement(ctx, ctx.multiply(a.value, b.value))


def field_power(ctx: FieldContext, a: FieldElement, e: int) -> FieldElement:
    if e < 0:
        return field_power(ctx, a.inverse(), -e)
    return FieldElement(ctx, ctx.power(a.value, e))


def field_inverse(ctx: FieldContext, a: FieldElement) -> FieldElement:
    if a.ctx != ctx:
        raise FieldError("element belongs to a different field")
    return a.inverse()
