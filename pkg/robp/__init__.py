from robp.formula import (
    And,
    Formula,
    Not,
    Or,
    Var,
    compile_formula,
    depth,
    evaluate_formula,
    formula_to_text,
    parse_formula,
    random_formula,
    variables,
)
from robp.program import (
    BranchingProgram,
    accepted,
    all_final_states,
    evaluate,
    final_states,
    identity_program,
    parity_program,
    permute_order,
    product_matrix,
    random_order,
    random_program,
    read_order_input,
    restrict,
    restricted_expectations,
    split,
    truth_table,
    uniform_expectation,
)
from robp.program_file import program_from_text, program_to_text, read_formula, read_program, write_program
