from fractions import Fraction
from itertools import product

import numpy as np
import pytest

from core import (
    IRREDUCIBLE_MODULI,
    BitVector,
    DimensionError,
    FieldContext,
    FieldError,
    ValidationError,
    bitwise_and,
    ceil_lg,
    character_eval,
    field_context,
    field_inverse,
    field_multiply,
    field_power,
    frobenius_norm,
    identity,
    is_irreducible,
    reduced_basis,
    span,
    transition_matrix,
    xor_add,
)
from core.matrix import successors_of
from core.transforms import and_convolve, popcount, superset_mobius, superset_zeta, walsh_hadamard, xor_convolve


# ----------------------------------------------------------------------
# Bit vectors
# ----------------------------------------------------------------------
def test_text_form_is_little_endian():
    v = BitVector("1011")
    assert v.word == 0b1101
    assert str(BitVector.from_int(0b1101, 4)) == "1011"
    assert v[0] == 1 and v[1] == 0
    assert v.hamming_weight() == 3


def test_constructors():
    assert str(BitVector.zeros(3)) == "000"
    assert str(BitVector.ones(3)) == "111"
    assert str(BitVector.unit(4, 2)) == "0010"
    assert BitVector.from_int(0, 0).length == 0
    with pytest.raises(DimensionError):
        BitVector.from_int(8, 3)
    with pytest.raises(ValidationError):
        BitVector("012")


def test_xor_and_and():
    a, b = BitVector("1100"), BitVector("1010")
    assert str(xor_add(a, b)) == "0110"
    assert str(bitwise_and(a, b)) == "1000"
    assert a ^ b == xor_add(a, b)
    with pytest.raises(DimensionError):
        xor_add(a, BitVector("10"))


@pytest.mark.parametrize("alpha, x, expected", [
    ("0000", "1111", 1),
    ("1000", "1000", -1),
    ("1100", "1111", 1),
    ("1110", "1011", 1),
    ("1110", "0011", -1),
])
def test_character_eval(alpha, x, expected):
    assert character_eval(BitVector(alpha), BitVector(x)) == expected


def _sign_table(n):
    words = np.arange(1 << n, dtype=np.uint64)
    return 1 - 2 * (popcount(words[:, None] & words[None, :]) & 1)


@pytest.mark.parametrize("n", range(1, 5))
def test_character_eval_matches_sign_table(n):
    table = _sign_table(n)
    for alpha, x in product(range(1 << n), repeat=2):
        assert character_eval(BitVector.from_int(alpha, n), BitVector.from_int(x, n)) == table[alpha, x]


@pytest.mark.slow
@pytest.mark.parametrize("n", range(1, 7))
def test_characters_are_multiplicative(n):
    table = _sign_table(n)
    words = np.arange(1 << n)
    # chi_a * chi_b = chi_(a xor b)
    combined = table[words[:, None] ^ words[None, :]]
    assert np.array_equal(combined, table[:, None, :] * table[None, :, :])
    # chi_a(x xor y) = chi_a(x) * chi_a(y)
    shifted = table[:, words[:, None] ^ words[None, :]]
    assert np.array_equal(shifted, table[:, :, None] * table[:, None, :])


@pytest.mark.parametrize("n", range(1, 13))
def test_nontrivial_characters_have_mean_zero(n):
    words = np.arange(1 << n, dtype=np.uint64)
    assert (1 - 2 * (popcount(words[0] & words) & 1)).sum() == 1 << n
    for alpha in words[1:]:
        assert (1 - 2 * (popcount(alpha & words) & 1)).sum() == 0


def test_permute():
    assert str(BitVector("1100").permute([2, 3, 0, 1])) == "0011"
    with pytest.raises(DimensionError):
        BitVector("11").permute([0])


# ----------------------------------------------------------------------
# GF(2^m)
# ----------------------------------------------------------------------
@pytest.mark.parametrize("m", [m for m in IRREDUCIBLE_MODULI if m <= 16])
def test_builtin_moduli_are_irreducible(m):
    assert is_irreducible(IRREDUCIBLE_MODULI[m])


def test_reducible_modulus_rejected():
    # x^4 + x^2 + 1 = (x^2 + x + 1)^2
    assert not is_irreducible(0x15)
    with pytest.raises(FieldError):
        FieldContext(4, 0x15)
    with pytest.raises(FieldError):
        field_context(40)


@pytest.mark.parametrize("m", range(1, 9))
def test_every_nonzero_element_has_an_inverse(m):
    ctx = field_context(m)
    for a in range(1, ctx.order):
        assert ctx.multiply(a, ctx.inverse(a)) == 1


def test_multiplication_laws():
    ctx = field_context(5)
    rng = np.random.default_rng(3)
    for a, b, c in rng.integers(0, ctx.order, size=(200, 3)):
        a, b, c = int(a), int(b), int(c)
        assert ctx.multiply(a, b) == ctx.multiply(b, a)
        assert ctx.multiply(ctx.multiply(a, b), c) == ctx.multiply(a, ctx.multiply(b, c))
        assert ctx.multiply(a, b ^ c) == ctx.multiply(a, b) ^ ctx.multiply(a, c)
        assert ctx.multiply(a, 1) == a


def _power_array(ctx, a, e):
    result = np.ones_like(a)
    while e:
        if e & 1:
            result = ctx.multiply_array(result, a)
        a = ctx.multiply_array(a, a)
        e >>= 1
    return result


@pytest.mark.parametrize("m", range(3, 17))
def test_field_axioms_on_random_triples(m):
    ctx = field_context(m)
    rng = np.random.default_rng(m)
    a, b, c = rng.integers(0, ctx.order, size=(3, 10_000), dtype=np.uint64)
    mul = ctx.multiply_array
    assert np.array_equal(mul(a, b), mul(b, a))
    assert np.array_equal(mul(mul(a, b), c), mul(a, mul(b, c)))
    assert np.array_equal(mul(a, b ^ c), mul(a, b) ^ mul(a, c))
    assert np.array_equal(mul(a, np.ones_like(a)), a)
    assert int(mul(a, b).max()) < ctx.order
    nonzero = a[a != 0]
    # a^(2^m - 2) is the inverse of every nonzero a
    assert np.all(mul(nonzero, _power_array(ctx, nonzero, ctx.order - 2)) == 1)
    for x in nonzero[:20]:
        assert ctx.multiply(int(x), ctx.inverse(int(x))) == 1


def test_known_product_in_gf256():
    ctx = field_context(8)
    assert ctx.multiply(0x57, 0x83) == 0xC1


def test_multiply_array_matches_scalar():
    ctx = field_context(6)
    a, b = np.meshgrid(np.arange(ctx.order, dtype=np.uint64), np.arange(ctx.order, dtype=np.uint64))
    out = ctx.multiply_array(a, b)
    expected = np.array([[ctx.multiply(int(x), int(y)) for x, y in zip(ra, rb)] for ra, rb in zip(a, b)])
    assert np.array_equal(out.astype(np.int64), expected)


def test_field_elements():
    ctx = field_context(4)
    x, y = ctx.element(0b0110), ctx.element(0b0011)
    assert (x + y).value == 0b0101
    assert (x * y).value == ctx.multiply(6, 3)
    assert (x**-1 * x).value == 1
    assert (x**15).value == 1
    with pytest.raises(FieldError):
        ctx.element(16)
    with pytest.raises(FieldError):
        x + field_context(3).element(1)


def test_field_functions():
    ctx = field_context(8)
    a, b = ctx.element(0x57), ctx.element(0x83)
    assert field_multiply(ctx, a, b).value == 0xC1
    assert field_multiply(ctx, a, field_inverse(ctx, a)).value == 1
    assert field_power(ctx, a, -1) == field_inverse(ctx, a)
    assert field_power(ctx, a, 255).value == 1
    with pytest.raises(FieldError):
        field_inverse(ctx, field_context(4).element(1))


# ----------------------------------------------------------------------
# GF(2) linear algebra
# ----------------------------------------------------------------------
@pytest.mark.parametrize("q, expected", [
    (1, 0), (2, 1), (3, 2), (4, 2), (256, 8), (257, 9), (Fraction(5, 2), 2), (Fraction(1, 3), 0),
])
def test_ceil_lg(q, expected):
    assert ceil_lg(q) == expected


def test_reduced_basis_and_span():
    basis = reduced_basis([3, 5, 6])
    assert basis == (3, 5)
    assert sorted(span(basis).tolist()) == [0, 3, 5, 6]
    assert reduced_basis([6, 5]) == reduced_basis([3, 5])
    assert reduced_basis([]) == ()


# ----------------------------------------------------------------------
# Transforms
# ----------------------------------------------------------------------
def test_walsh_hadamard_is_an_involution_up_to_scale():
    x = np.random.default_rng(0).normal(size=16)
    assert np.allclose(walsh_hadamard(walsh_hadamard(x)), 16 * x)


def test_walsh_hadamard_on_matrix_stack():
    stack = np.random.default_rng(1).normal(size=(8, 2, 2))
    expected = np.array([sum(stack[x] * (-1) ** bin(s & x).count("1") for x in range(8)) for s in range(8)])
    assert np.allclose(walsh_hadamard(stack), expected)


def test_zeta_mobius_roundtrip_exact():
    x = np.array([3, 1, 4, 1, 5, 9, 2, 6], dtype=object)
    assert list(superset_mobius(superset_zeta(x))) == list(x)


def test_convolutions_match_brute_force():
    rng = np.random.default_rng(2)
    a = np.array([int(v) for v in rng.integers(0, 10, size=8)], dtype=object)
    b = np.array([int(v) for v in rng.integers(0, 10, size=8)], dtype=object)
    xor_expected = [0] * 8
    and_expected = [0] * 8
    for s, t in product(range(8), repeat=2):
        xor_expected[s ^ t] += a[s] * b[t]
        and_expected[s & t] += a[s] * b[t]
    assert list(xor_convolve(a, b)) == xor_expected
    assert list(and_convolve(a, b)) == and_expected


def test_transform_length_must_be_power_of_two():
    with pytest.raises(DimensionError):
        walsh_hadamard(np.ones(6))


def test_popcount():
    assert popcount(np.array([0, 1, 3, 255])).tolist() == [0, 1, 2, 8]


# ----------------------------------------------------------------------
# Matrices
# ----------------------------------------------------------------------
def test_transition_matrix_roundtrip():
    M = transition_matrix([1, 1, 0])
    assert M.tolist() == [[0, 1, 0], [0, 1, 0], [1, 0, 0]]
    assert successors_of(M).tolist() == [1, 1, 0]
    with pytest.raises(ValidationError):
        successors_of(np.full((2, 2), 0.5))


def test_frobenius_norm():
    assert frobenius_norm(identity(4)) == pytest.approx(2.0)
    assert frobenius_norm(np.zeros((3, 3))) == 0.0
    assert np.allclose(frobenius_norm(np.stack([identity(4), 2 * identity(4)])), [2.0, 4.0])
