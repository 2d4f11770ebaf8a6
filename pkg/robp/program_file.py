"""
Program file format.

    robp n=3 w=2 order=1,2,3
    1,2 | 2,1
    1,2 | 2,1
    1,2 | 2,1

The header gives the input length, the width and the (1-indexed) input position read by each
layer. Line i lists, for every state 1..w, its successor under A_{i,0}, then after `|` its
successor under A_{i,1}. States are 1-indexed in the file; state 1 is start and accept.
Blank lines and lines starting with `#` are ignored.
"""

import logging
from pathlib import Path

import numpy as np

from core.errors import ValidationError
from robp.formula import Formula, parse_formula
from robp.program import BranchingProgram

logger = logging.getLogger(__name__)


def program_to_text(bp: BranchingProgram) -> str:
    order = ",".join(str(p + 1) for p in bp.order)
    lines = [f"robp n={bp.n} w={bp.w} order={order}"]
    for layer in bp.successors:
        zero = ",".join(str(s + 1) for s in layer[0])
        one = ",".join(str(s + 1) for s in layer[1])
        lines.append(f"{zero} | {one}")
    return "\n".join(lines) + "\n"


def program_from_text(text: str) -> BranchingProgram:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.strip().startswith("#")]
    if not lines or not lines[0].startswith("robp"):
        raise ValidationError("program text must start with a 'robp' header")
    try:
        fields = dict(part.split("=", 1) for part in lines[0].split()[1:])
        n, w = int(fields["n"]), int(fields["w"])
        order = [int(p) - 1 for p in fields.get("order", "").split(",") if p]
    except (KeyError, ValueError) as e:
        raise ValidationError(f"malformed program header {lines[0]!r}: {e}") from e

    body = lines[1:]
    if len(body) != n:
        raise ValidationError(f"header declares n={n} layers, found {len(body)}")
    succ = np.zeros((n, 2, w), dtype=np.int64)
    for i, line in enumerate(body):
        halves = line.split("|")
        if len(halves) != 2:
            raise ValidationError(f"layer {i + 1}: expected '<A0 successors> | <A1 successors>'")
        for b, half in enumerate(halves):
            states = [int(s) - 1 for s in half.replace(",", " ").split()]
            if len(states) != w:
                raise ValidationError(f"layer {i + 1}: {len(states)} successors for width {w}")
            succ[i, b] = states
    return BranchingProgram(succ, order or None, w=w)


def write_program(bp: BranchingProgram, path: str | Path) -> None:
    Path(path).write_text(program_to_text(bp))
    logger.info(f"Wrote program n={bp.n} w={bp.w} to {path}")


def read_program(path: str | Path) -> BranchingProgram:
    bp = program_from_text(Path(path).read_text())
    logger.debug(f"Read program n={bp.n} w={bp.w} from {path}")
    return bp


def read_formula(path: str | Path) -> Formula:
    """First non-comment line of the file, in `AND(x1,NOT(x2))` form."""
    for line in Path(path).read_text().splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            return parse_formula(line)
    raise ValidationError(f"no formula found in {path}")
