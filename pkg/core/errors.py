"""
Exception hierarchy shared by every robpgen package.

Every error raised on purpose by the library derives from `RobpgenError`, so the CLI can
catch one type, log it and exit. The concrete classes also subclass the closest builtin
(`ValueError` / `RuntimeError`) so callers that only know the builtins still work.
"""


class RobpgenError(Exception):
    """Base class for all robpgen errors."""


class DimensionError(RobpgenError, ValueError):
    """Length or shape mismatch between vectors, matrices or programs."""


class SeedError(RobpgenError, ValueError):
    """A seed does not have the length its descriptor or layout requires."""


class ValidationError(RobpgenError, ValueError):
    """Malformed program, permutation, formula or Fourier support."""


class FieldError(RobpgenError, ValueError):
    """Invalid finite-field context or element."""


class ParameterError(RobpgenError, ValueError):
    """Generator parameters that cannot be derived or used."""


class BudgetExceededError(RobpgenError, RuntimeError):
    """
    An exhaustive computation would exceed its configured budget.

    Args:
        what (str): What was being enumerated.
        bits (int): log2 of the work / size that was requested.
        budget (int): log2 of the allowed maximum.
    """

    def __init__(self, what: str, bits: int, budget: int):
        self.what = what
        self.bits = bits
        self.budget = budget
        super().__init__(f"{what}: needs 2^{bits} work, budget is 2^{budget}")
