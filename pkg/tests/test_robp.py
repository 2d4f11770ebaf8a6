from itertools import permutations
from pathlib import Path

import numpy as np
import pytest

from core import BitVector, DimensionError, ValidationError
from robp import (
    And,
    BranchingProgram,
    Not,
    Or,
    Var,
    accepted,
    compile_formula,
    depth,
    evaluate,
    evaluate_formula,
    final_states,
    formula_to_text,
    identity_program,
    parity_program,
    parse_formula,
    permute_order,
    product_matrix,
    program_from_text,
    program_to_text,
    random_formula,
    random_order,
    random_program,
    read_formula,
    read_order_input,
    read_program,
    restrict,
    restricted_expectations,
    split,
    truth_table,
    uniform_expectation,
    write_program,
)

DATA = Path(__file__).parent / "data"


# ----------------------------------------------------------------------
# Construction
# ----------------------------------------------------------------------
def test_invalid_programs():
    with pytest.raises(ValidationError):
        BranchingProgram(np.array([[[0, 2], [1, 0]]]))
    with pytest.raises(ValidationError):
        BranchingProgram(np.zeros((2, 2, 2)), order=[0, 0])
    with pytest.raises(DimensionError):
        BranchingProgram(np.zeros((2, 3, 2)))
    with pytest.raises(DimensionError):
        BranchingProgram(np.zeros((0, 2, 2)))
    assert BranchingProgram(np.zeros((0, 2, 2)), w=2).n == 0


def test_from_matrices_roundtrip():
    bp = random_program(5, 3, rng_seed=1)
    assert BranchingProgram.from_matrices(bp.layers, bp.order) == bp


def test_successor_table_is_copied():
    succ = np.zeros((2, 2, 2), dtype=np.int64)
    bp = BranchingProgram(succ)
    succ[0, 0, 0] = 1
    assert bp.successors[0, 0, 0] == 0
    assert not bp.successors.flags.writeable


def test_random_program_is_reproducible():
    assert random_program(6, 4, rng_seed=7) == random_program(6, 4, rng_seed=7)
    assert random_program(6, 4, rng_seed=7) != random_program(6, 4, rng_seed=8)
    assert sorted(random_order(6, rng_seed=3)) == list(range(6))


# ----------------------------------------------------------------------
# Evaluation
# ----------------------------------------------------------------------
def test_parity_accepts_even_inputs():
    bp = parity_program(4)
    for x in range(16):
        assert evaluate(bp, x) == int(bin(x).count("1") % 2 == 0)
    assert evaluate(bp, BitVector("1100")) == 1


def test_identity_program_is_identity():
    bp = identity_program(3, 4)
    assert np.array_equal(product_matrix(bp, BitVector("101")), np.eye(4))


def test_truth_table_rows():
    bp = random_program(5, 3, rng_seed=2)
    table = truth_table(bp)
    assert table.shape == (32, 3, 3)
    assert np.all(table.sum(axis=2) == 1)
    for x in (0, 9, 31):
        assert np.array_equal(table[x], product_matrix(bp, x))
        assert np.array_equal(np.argmax(table[x], axis=1), final_states(bp, x))


def test_uniform_expectation_is_table_mean():
    bp = random_program(6, 3, rng_seed=4)
    assert np.allclose(uniform_expectation(bp), truth_table(bp).mean(axis=0))


def test_input_length_checked():
    with pytest.raises(DimensionError):
        evaluate(parity_program(3), BitVector("1010"))
    with pytest.raises(DimensionError):
        evaluate(parity_program(3), 8)


# ----------------------------------------------------------------------
# Structure
# ----------------------------------------------------------------------
def test_permute_order_composes_input():
    bp = random_program(4, 3, rng_seed=5)
    for sigma in [(1, 0, 3, 2), (3, 1, 2, 0), (2, 3, 0, 1)]:
        permuted = permute_order(bp, sigma)
        for x in range(16):
            moved = BitVector.from_int(x, 4).permute(sigma)
            assert np.array_equal(product_matrix(permuted, x), product_matrix(bp, moved))


@pytest.mark.parametrize("n, sigma", [
    (4, (1, 0, 3, 2)),
    (4, (3, 1, 2, 0)),
    (5, (1, 2, 3, 4, 0)),
    (6, (5, 3, 0, 4, 1, 2)),
])
def test_permute_order_then_inverse_restores_program(n, sigma):
    bp = random_program(n, 3, rng_seed=n)
    tau = [int(j) for j in np.argsort(sigma)]
    restored = permute_order(permute_order(bp, sigma), tau)
    assert np.array_equal(accepted(restored), accepted(bp))
    for x in range(1 << n):
        assert np.array_equal(product_matrix(restored, x), product_matrix(bp, x))


def test_parity_is_invariant_under_read_order():
    bp = parity_program(4)
    reference = accepted(bp)
    for sigma in permutations(range(4)):
        assert np.array_equal(accepted(permute_order(bp, sigma)), reference)


def test_split_multiplies_back():
    bp = permute_order(random_program(5, 3, rng_seed=6), (4, 2, 0, 3, 1))
    for i in range(6):
        prefix, suffix = split(bp, i)
        assert prefix.n == i and suffix.n == 5 - i
        for x in range(32):
            y = read_order_input(bp, x)
            joined = product_matrix(prefix, y & ((1 << i) - 1)) @ product_matrix(suffix, y >> i)
            assert np.array_equal(joined, product_matrix(bp, x))
    with pytest.raises(DimensionError):
        split(bp, 6)


def test_restrict_fixes_and_passes_bits():
    bp = permute_order(random_program(5, 3, rng_seed=8), (1, 2, 3, 4, 0))
    d, t = 0b10110, 0b01101
    restricted = restrict(bp, d, t)
    for x in range(32):
        assert np.array_equal(product_matrix(restricted, x), product_matrix(bp, d ^ (t & x)))


def test_restricted_expectations_average_over_noise():
    bp = random_program(4, 3, rng_seed=9)
    table = truth_table(bp)
    pairs = [(0b0000, 0b1111), (0b1010, 0b0000), (0b0110, 0b0101)]
    out = restricted_expectations(bp, [a for a, _ in pairs], [b for _, b in pairs])
    for got, (a, b) in zip(out, pairs):
        expected = np.mean([table[a ^ (b & u)] for u in range(16)], axis=0)
        assert np.allclose(got, expected)


# ----------------------------------------------------------------------
# Formulas
# ----------------------------------------------------------------------
def test_formula_text_roundtrip():
    text = "AND(OR(x1,NOT(x3)),x2)"
    phi = parse_formula(text)
    assert phi == And(Or(Var(0), Not(Var(2))), Var(1))
    assert formula_to_text(phi) == text
    assert parse_formula(" and( x1 , x2 ) ") == And(Var(0), Var(1))


@pytest.mark.parametrize("text", ["AND(x1,x1)", "AND(x1)", "OR(x1,x2", "x0", "AND(x1,x2) x3", "XOR(x1,x2)"])
def test_formula_rejects(text):
    with pytest.raises(ValidationError):
        parse_formula(text)


def test_compiled_formula_matches_truth_table():
    phi = parse_formula("AND(OR(x1,NOT(x3)),x2)")
    bp = compile_formula(phi)
    acc = accepted(bp)
    for x in range(8):
        assert acc[x] == evaluate_formula(phi, x)


@pytest.mark.parametrize("seed", range(20))
def test_random_formulas_compile_exactly(seed):
    num_vars = 1 + seed % 8
    phi = random_formula(num_vars, rng_seed=seed)
    bp = compile_formula(phi)
    assert bp.n == num_vars
    assert bp.w <= depth(phi) + 2
    acc = accepted(bp)
    assert all(acc[x] == evaluate_formula(phi, x) for x in range(1 << num_vars))


def test_unused_variables_are_ignored():
    phi = parse_formula("OR(x4,x2)")
    bp = compile_formula(phi, n=5)
    assert bp.n == 5
    acc = accepted(bp)
    assert all(acc[x] == evaluate_formula(phi, x) for x in range(32))
    with pytest.raises(ValidationError):
        compile_formula(phi, n=3)


# ----------------------------------------------------------------------
# Files
# ----------------------------------------------------------------------
def test_golden_parity_file():
    bp = read_program(DATA / "parity3.robp")
    assert bp == parity_program(3)
    assert program_to_text(bp).splitlines()[0] == "robp n=3 w=2 order=1,2,3"


def test_golden_reordered_file():
    bp = read_program(DATA / "reordered.robp")
    assert (bp.n, bp.w, bp.order) == (4, 3, (2, 0, 3, 1))
    assert bp.successors[1, 0].tolist() == [1, 1, 2]
    assert program_from_text(program_to_text(bp)) == bp


def test_write_then_read(tmp_path):
    bp = permute_order(random_program(6, 4, rng_seed=11), (5, 4, 3, 2, 1, 0))
    path = tmp_path / "prog.robp"
    write_program(bp, path)
    assert read_program(path) == bp


@pytest.mark.parametrize("text", [
    "",
    "robp n=2 w=2\n1,2 | 2,1\n",
    "robp n=1 w=2\n1,2 2,1\n",
    "robp n=1 w=2\n1 | 2,1\n",
    "robp n=1 w=2\n1,3 | 2,1\n",
    "robp w=2\n1,2 | 2,1\n",
])
def test_malformed_program_text(text):
    with pytest.raises(ValidationError):
        program_from_text(text)


def test_formula_file():
    phi = read_formula(DATA / "and_or.formula")
    assert formula_to_text(phi) == "AND(OR(x1,NOT(x3)),x2)"
