"""
Read-once formulas and their compilation to branching programs.

Text form: `AND(OR(x1,NOT(x3)),x2)`; variables are 1-indexed in text, 0-indexed in `Var`.

Compilation walks the formula left to right, one layer per variable. Every sub-formula becomes
a fragment with a start state and two exit states (true / false). AND(l, r) feeds l's true exit
into r's start and carries l's false exit as a dead passenger through r's layers into r's false
exit; OR is the mirror image with a live passenger. NOT swaps the exits. A fragment of depth d
never has more than d + 2 states at any boundary.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass, field
from itertools import count
from typing import Union

import numpy as np

from core.errors import ValidationError
from robp.program import BranchingProgram

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Var:
    index: int


@dataclass(frozen=True)
class Not:
    child: Formula


@dataclass(frozen=True)
class And:
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or:
    left: Formula
    right: Formula


Formula = Union[Var, Not, And, Or]


def variables(phi: Formula) -> list[int]:
    """Variable indices in left-to-right order (with repeats, if any)."""
    if isinstance(phi, Var):
        return [phi.index]
    if isinstance(phi, Not):
        return variables(phi.child)
    return variables(phi.left) + variables(phi.right)


def depth(phi: Formula) -> int:
    if isinstance(phi, Var):
        return 0
    if isinstance(phi, Not):
        return 1 + depth(phi.child)
    return 1 + max(depth(phi.left), depth(phi.right))


def check_read_once(phi: Formula) -> list[int]:
    seen = variables(phi)
    if len(set(seen)) != len(seen):
        repeated = sorted({v + 1 for v in seen if seen.count(v) > 1})
        raise ValidationError(f"formula is not read-once: x{', x'.join(map(str, repeated))} repeated")
    if any(v < 0 for v in seen):
        raise ValidationError("variable indices must be non-negative")
    return seen


def evaluate_formula(phi: Formula, x: int) -> int:
    """Truth value on the input word x (bit i is variable i)."""
    if isinstance(phi, Var):
        return (x >> phi.index) & 1
    if isinstance(phi, Not):
        return 1 - evaluate_formula(phi.child, x)
    if isinstance(phi, And):
        return evaluate_formula(phi.left, x) & evaluate_formula(phi.right, x)
    return evaluate_formula(phi.left, x) | evaluate_formula(phi.right, x)


def formula_to_text(phi: Formula) -> str:
    if isinstance(phi, Var):
        return f"x{phi.index + 1}"
    if isinstance(phi, Not):
        return f"NOT({formula_to_text(phi.child)})"
    gate = "AND" if isinstance(phi, And) else "OR"
    return f"{gate}({formula_to_text(phi.left)},{formula_to_text(phi.right)})"


_TOKEN = re.compile(r"\s*(AND|OR|NOT|x\d+|\(|\)|,)", re.IGNORECASE)


def parse_formula(text: str) -> Formula:
    tokens: list[str] = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        match = _TOKEN.match(text, pos)
        if not match:
            raise ValidationError(f"unexpected character at {pos} in formula {text!r}")
        tokens.append(match.group(1))
        pos = match.end()

    def expect(i: int, token: str) -> int:
        if i >= len(tokens) or tokens[i] != token:
            raise ValidationError(f"expected {token!r} at token {i} of {text!r}")
        return i + 1

    def parse(i: int) -> tuple[Formula, int]:
        if i >= len(tokens):
            raise ValidationError(f"formula {text!r} ends early")
        head = tokens[i].upper()
        if head.startswith("X"):
            index = int(head[1:])
            if index < 1:
                raise ValidationError("variables are numbered from x1")
            return Var(index - 1), i + 1
        if head == "NOT":
            i = expect(i + 1, "(")
            child, i = parse(i)
            return Not(child), expect(i, ")")
        if head in ("AND", "OR"):
            i = expect(i + 1, "(")
            left, i = parse(i)
            i = expect(i, ",")
            right, i = parse(i)
            i = expect(i, ")")
            return (And if head == "AND" else Or)(left, right), i
        raise ValidationError(f"unexpected token {tokens[i]!r} in {text!r}")

    phi, end = parse(0)
    if end != len(tokens):
        raise ValidationError(f"trailing tokens in formula {text!r}")
    check_read_once(phi)
    return phi


def random_formula(num_vars: int, rng_seed: int | None = None, negate_probability: float = 0.3) -> Formula:
    """A random read-once formula over x1..x_num_vars with fan-in 2 gates."""
    if num_vars < 1:
        raise ValidationError("a formula needs at least one variable")
    rng = np.random.default_rng(rng_seed)

    def build(indices: list[int]) -> Formula:
        if len(indices) == 1:
            node: Formula = Var(indices[0])
        else:
            cut = int(rng.integers(1, len(indices)))
            gate = And if rng.random() < 0.5 else Or
            node = gate(build(indices[:cut]), build(indices[cut:]))
        if rng.random() < negate_probability:
            node = Not(node)
        return node

    return build([int(v) for v in rng.permutation(num_vars)])


# ----------------------------------------------------------------------
# Compilation
# ----------------------------------------------------------------------
@dataclass
class _Fragment:
    """Layers map each live label at their input boundary to its (bit 0, bit 1) successor labels."""

    layers: list[dict[int, tuple[int, int]]] = field(default_factory=list)
    start: int = 0
    true: int = 0
    false: int = 0


def _rename(layers: list[dict[int, tuple[int, int]]], old: int, new: int) -> None:
    for layer in layers:
        for label, (s0, s1) in layer.items():
            layer[label] = (new if s0 == old else s0, new if s1 == old else s1)


def _compile(phi: Formula, labels: count) -> _Fragment:
    if isinstance(phi, Var):
        start, true, false = next(labels), next(labels), next(labels)
        return _Fragment([{start: (false, true)}], start, true, false)
    if isinstance(phi, Not):
        inner = _compile(phi.child, labels)
        return _Fragment(inner.layers, inner.start, inner.false, inner.true)

    left = _compile(phi.left, labels)
    right = _compile(phi.right, labels)
    is_and = isinstance(phi, And)
    # AND continues on true and carries false; OR continues on false and carries true
    cont, passenger = (left.true, left.false) if is_and else (left.false, left.true)
    exit_label = right.false if is_and else right.true

    _rename(left.layers, cont, right.start)
    last = len(right.layers) - 1
    for j, layer in enumerate(right.layers):
        target = exit_label if j == last else passenger
        layer[passenger] = (target, target)

    return _Fragment(left.layers + right.layers, left.start, right.true, right.false)


def compile_formula(phi: Formula, n: int | None = None) -> BranchingProgram:
    """
    Branching program accepting exactly the inputs that satisfy phi.

    Args:
        phi (Formula): A read-once formula.
        n (int | None): Input length; defaults to the largest variable index + 1.
            Variables the formula does not use are read by trailing identity layers.

    Returns:
        BranchingProgram: Width <= depth(phi) + 2, order = formula variable order then unused variables.
    """
    used = check_read_once(phi)
    n = max(used) + 1 if n is None else n
    if max(used) >= n:
        raise ValidationError(f"formula uses x{max(used) + 1} but the program has only {n} inputs")

    frag = _compile(phi, count())

    # index the labels of every boundary; state 0 is the start and the final true exit
    boundaries: list[dict[int, int]] = [{frag.start: 0}]
    for layer in frag.layers[:-1]:
        successors_seen = sorted({s for pair in layer.values() for s in pair})
        boundaries.append({label: idx for idx, label in enumerate(successors_seen)})
    boundaries.append({frag.true: 0, frag.false: 1})

    w = max(len(b) for b in boundaries)
    succ = np.zeros((n, 2, w), dtype=np.int64)
    succ[:] = np.arange(w)
    for j, layer in enumerate(frag.layers):
        src, dst = boundaries[j], boundaries[j + 1]
        for label, (s0, s1) in layer.items():
            succ[j, 0, src[label]] = dst[s0]
            succ[j, 1, src[label]] = dst[s1]

    unused = [v for v in range(n) if v not in set(used)]
    order = used + unused
    logger.debug(f"compiled {formula_to_text(phi)} to width {w} over {n} inputs")
    return BranchingProgram(succ, order, w=w)
