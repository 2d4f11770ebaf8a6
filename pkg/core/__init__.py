from core.bitvector import BitVector, bitwise_and, character_eval, character_sign, xor_add
from core.errors import (
    BudgetExceededError,
    DimensionError,
    FieldError,
    ParameterError,
    RobpgenError,
    SeedError,
    ValidationError,
)
from core.gf2 import ceil_lg, reduced_basis, span
from core.field import (
    IRREDUCIBLE_MODULI,
    FieldContext,
    FieldElement,
    field_context,
    field_inverse,
    field_multiply,
    field_power,
    is_irreducible,
)
from core.matrix import DenseMatrix, frobenius_inner, frobenius_norm, identity, transition_matrix
