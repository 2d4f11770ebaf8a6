"""
Bit vectors over F_2^n.

A `BitVector` wraps an immutable little-endian `frozenbitarray`: bit 0 is variable x_1, the
bit read by the first layer of an identity-ordered program. The text form is the plain 0/1
string with character i equal to bit i, which is exactly `bitarray.to01()` for little-endian
arrays.

Hot loops elsewhere in the package work on the integer `word` (bit i of the word = bit i of
the vector) and only wrap results in `BitVector` at their edges.
"""

from __future__ import annotations

from typing import Iterable, Sequence

from bitarray import bitarray, frozenbitarray
from bitarray.util import ba2int, int2ba, parity, zeros as ba_zeros

from core.errors import DimensionError, ValidationError


class BitVector:
    """An element of F_2^n with a fixed length."""

    __slots__ = ("_bits",)

    def __init__(self, bits: str | Iterable[int] | bitarray):
        if isinstance(bits, bitarray):
            self._bits = frozenbitarray(bits, endian="little")
        elif isinstance(bits, str):
            if any(c not in "01" for c in bits):
                raise ValidationError(f"not a 0/1 string: {bits!r}")
            self._bits = frozenbitarray(bits, endian="little")
        else:
            self._bits = frozenbitarray([int(b) & 1 for b in bits], endian="little")

    # ------------------------------------------------------------------
    # Constructors
    # ------------------------------------------------------------------
    @classmethod
    def from_int(cls, word: int, n: int) -> BitVector:
        if n == 0:
            return cls(frozenbitarray(endian="little"))
        if word < 0 or word >> n:
            raise DimensionError(f"word {word:#x} does not fit in {n} bits")
        return cls(frozenbitarray(int2ba(word, length=n, endian="little")))

    @classmethod
    def zeros(cls, n: int) -> BitVector:
        return cls(frozenbitarray(ba_zeros(n, endian="little")))

    @classmethod
    def ones(cls, n: int) -> BitVector:
        return cls.from_int((1 << n) - 1, n)

    @classmethod
    def unit(cls, n: int, i: int) -> BitVector:
        if not 0 <= i < n:
            raise DimensionError(f"bit index {i} out of range for length {n}")
        return cls.from_int(1 << i, n)

    # ------------------------------------------------------------------
    # Accessors
    # ------------------------------------------------------------------
    @property
    def length(self) -> int:
        return len(self._bits)

    @property
    def bits(self) -> frozenbitarray:
        return self._bits

    @property
    def word(self) -> int:
        return ba2int(self._bits) if len(self._bits) else 0

    def hamming_weight(self) -> int:
        return self._bits.count()

    def to_hex(self) -> str:
        return format(self.word, "x")

    def permute(self, sigma: Sequence[int]) -> BitVector:
        """Returns x∘sigma, i.e. the vector whose bit j is bit sigma[j] of self (0-indexed)."""
        if len(sigma) != self.length:
            raise DimensionError(f"permutation of length {len(sigma)} applied to {self.length} bits")
        return BitVector(frozenbitarray([self._bits[s] for s in sigma], endian="little"))

    def __getitem__(self, i: int) -> int:
        return self._bits[i]

    def __len__(self) -> int:
        return len(self._bits)

    def __iter__(self):
        return iter(self._bits)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, BitVector) and self._bits == other._bits

    def __hash__(self) -> int:
        return hash(self._bits)

    def __str__(self) -> str:
        return self._bits.to01()

    def __repr__(self) -> str:
        return f"BitVector('{self._bits.to01()}')"

    def __xor__(self, other: BitVector) -> BitVector:
        return xor_add(self, other)

    def __and__(self, other: BitVector) -> BitVector:
        return bitwise_and(self, other)


def _check_lengths(a: BitVector, b: BitVector) -> None:
    if a.length != b.length:
        raise DimensionError(f"length mismatch: {a.length} vs {b.length}")


def xor_add(a: BitVector, b: BitVector) -> BitVector:
    """Addition over F_2^n (bitwise XOR)."""
    _check_lengths(a, b)
    return BitVector(a.bits ^ b.bits)


def bitwise_and(a: BitVector, b: BitVector) -> BitVector:
    _check_lengths(a, b)
    return BitVector(a.bits & b.bits)


def character_eval(alpha: BitVector, x: BitVector) -> int:
    """chi_alpha(x) = (-1)^<alpha, x>."""
    _check_lengths(alpha, x)
    return -1 if parity(alpha.bits & x.bits) else 1


def character_sign(alpha: int, x: int) -> int:
    """Word-level chi_alpha(x)."""
    return -1 if (alpha & x).bit_count() & 1 else 1
