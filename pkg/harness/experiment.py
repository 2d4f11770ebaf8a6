"""
Experiment driver: one report row per (program, order) against one generator.

Rows are independent and run on a thread pool; results are merged in row order so the CSV is
identical for any worker count. All randomness comes from seeds in the configuration.
"""

from __future__ import annotations

import hashlib
import json
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import permutations
from pathlib import Path

import numpy as np
import polars as pl

from config import config
from core.errors import BudgetExceededError
from generator.distribution import exact_output_distribution, seed_enumeration_histogram
from generator.expand import check_sampling_budget
from generator.spec import GeneratorSpec, exact_spec, star_spec
from harness.bounds import generator_bound, is_vacuous
from harness.fooling import exact_fooling_error, sampled_fooling_error
from harness.schemas import MAX_ALL_ORDERS_N, REPORT_COLUMNS, ErrorRow, ExperimentConfig
from primitives.distribution import ExactDistribution
from robp.formula import compile_formula, formula_to_text
from robp.program import BranchingProgram, permute_order, random_program
from robp.program_file import read_formula, read_program

logger = logging.getLogger(__name__)

settings = config('robpgen:harness')

TOLERANCE = settings.getfloat("TOLERANCE", fallback=1e-9)

REPORT_SCHEMA = {
    "row": pl.Int64,
    "program": pl.Utf8,
    "order": pl.Utf8,
    "spec": pl.Utf8,
    "variant": pl.Utf8,
    "mode": pl.Utf8,
    "mass_mode": pl.Utf8,
    "measurement": pl.Utf8,
    "seed_bits": pl.Int64,
    "frobenius": pl.Float64,
    "scalar": pl.Float64,
    "half_width": pl.Float64,
    "bound": pl.Float64,
    "vacuous": pl.Boolean,
    "passed": pl.Boolean,
    "skipped": pl.Boolean,
    "note": pl.Utf8,
    "config_hash": pl.Utf8,
}


@dataclass
class ExperimentResult:
    rows: list[ErrorRow] = field(default_factory=list)
    csv_path: Path | None = None
    json_path: Path | None = None

    @property
    def failed(self) -> list[ErrorRow]:
        return [row for row in self.rows if not row.skipped and not row.passed]

    @property
    def exit_code(self) -> int:
        return 1 if self.failed else 0


def config_hash(cfg: ExperimentConfig) -> str:
    return hashlib.sha256(cfg.model_dump_json().encode()).hexdigest()[:16]


# ----------------------------------------------------------------------
# Work items
# ----------------------------------------------------------------------
def build_programs(cfg: ExperimentConfig) -> list[tuple[str, BranchingProgram]]:
    if cfg.source == "file":
        return [(cfg.program_file, read_program(cfg.program_file))]
    if cfg.source == "formula":
        phi = read_formula(cfg.formula_file)
        return [(formula_to_text(phi), compile_formula(phi, cfg.n))]
    rng = np.random.default_rng(cfg.rng_seed)
    seeds = rng.integers(0, 2**63 - 1, size=cfg.count)
    return [(f"random:n={cfg.n}:w={cfg.w}:seed={int(s)}", random_program(cfg.n, cfg.w, int(s))) for s in seeds]


def build_orders(cfg: ExperimentConfig, n: int) -> list[tuple[int, ...]]:
    if cfg.orders == "identity":
        return [tuple(range(n))]
    if cfg.orders == "all":
        if n > MAX_ALL_ORDERS_N:
            raise BudgetExceededError(f"all {n}! read orders", n, MAX_ALL_ORDERS_N)
        return list(permutations(range(n)))
    rng = np.random.default_rng(cfg.order_seed)
    return [tuple(int(p) for p in rng.permutation(n)) for _ in range(cfg.order_count)]


def build_spec(cfg: ExperimentConfig, n: int, w: int) -> GeneratorSpec:
    if cfg.variant == "exact":
        return exact_spec(n, w, k=cfg.k, r=cfg.r)
    return star_spec(n, w, epsilon=cfg.epsilon, k=cfg.k, r=cfg.r, delta=cfg.delta, gamma=cfg.gamma)


def output_distribution(cfg: ExperimentConfig, spec: GeneratorSpec) -> ExactDistribution | None:
    """Exact pmf in the exact modes; None in sampled mode, after checking the spec can be sampled."""
    if cfg.measurement == "exact_dp":
        return exact_output_distribution(spec)
    if cfg.measurement == "exact_seeds":
        return seed_enumeration_histogram(spec)
    check_sampling_budget(spec)
    return None


def measure_row(index: int, name: str, bp: BranchingProgram, order: tuple[int, ...], spec: GeneratorSpec,
                pmf: ExactDistribution | None, cfg: ExperimentConfig, digest: str, refusal: str = "") -> ErrorRow:
    program = permute_order(bp, order)
    bound = generator_bound(spec, cfg.mass_mode)
    row = dict(
        row=index,
        program=name,
        order=",".join(str(p + 1) for p in order),
        spec=spec.to_text(),
        variant=spec.variant.value,
        mode=spec.mode,
        mass_mode=cfg.mass_mode,
        measurement=cfg.measurement,
        seed_bits=spec.seed_bits,
        bound=bound,
        vacuous=is_vacuous(bound, spec.w),
        config_hash=digest,
    )
    if refusal:
        return ErrorRow(**row, passed=True, skipped=True, note=refusal)
    try:
        if pmf is not None:
            error = exact_fooling_error(program, pmf)
            frobenius, scalar, half_width = error.frobenius, error.scalar, None
            passed = frobenius <= bound + TOLERANCE
        else:
            sampled = sampled_fooling_error(program, spec, cfg.samples, cfg.sample_seed + index)
            frobenius, scalar, half_width = sampled.estimate, sampled.scalar, sampled.half_width
            passed = frobenius - half_width <= bound + TOLERANCE
    except BudgetExceededError as e:
        logger.warning(f"Row {index} skipped: {e}")
        return ErrorRow(**row, passed=True, skipped=True, note=str(e))

    passed = passed and scalar <= frobenius + TOLERANCE
    if not passed:
        logger.error(f"Row {index} ({name}, order {row['order']}): error {frobenius:.4g} exceeds bound {bound:.4g}")
    return ErrorRow(**row, frobenius=frobenius, scalar=scalar, half_width=half_width, passed=passed)


# ----------------------------------------------------------------------
# Reports
# ----------------------------------------------------------------------
def rows_to_frame(rows: list[ErrorRow]) -> pl.DataFrame:
    if not rows:
        return pl.DataFrame(schema=REPORT_SCHEMA)
    return pl.DataFrame([row.model_dump() for row in rows], schema=REPORT_SCHEMA).select(REPORT_COLUMNS)


def write_report(rows: list[ErrorRow], cfg: ExperimentConfig, digest: str) -> tuple[Path, Path]:
    csv_path = Path(cfg.out)
    csv_path.parent.mkdir(parents=True, exist_ok=True)
    rows_to_frame(rows).write_csv(csv_path)

    json_path = csv_path.with_suffix(".json")
    sidecar = {
        "config": cfg.model_dump(),
        "config_hash": digest,
        "columns": REPORT_COLUMNS,
        "rows": len(rows),
        "skipped": sum(row.skipped for row in rows),
        "failed": sum(not row.skipped and not row.passed for row in rows),
    }
    json_path.write_text(json.dumps(sidecar, indent=2))
    logger.info(f"Wrote {len(rows)} rows to {csv_path} (sidecar {json_path})")
    return csv_path, json_path


def run_experiment(cfg: ExperimentConfig, write: bool = True) -> ExperimentResult:
    """
    Runs every (program, order) row of the configuration.

    Args:
        cfg (ExperimentConfig): The sweep.
        write (bool): Whether to write the CSV report and its JSON sidecar.

    Returns:
        ExperimentResult: Rows in row order; exit_code is 0 iff every measured row passed.
    """
    digest = config_hash(cfg)
    programs = build_programs(cfg) if cfg.source != "random" or cfg.count > 0 else []
    logger.info(f"Experiment {digest}: {len(programs)} programs, orders={cfg.orders}, "
                f"variant={cfg.variant}, measurement={cfg.measurement}")

    rows: list[ErrorRow] = []
    specs: dict[tuple[int, int], tuple[GeneratorSpec, ExactDistribution | None, str]] = {}
    jobs = []
    for name, bp in programs:
        key = (bp.n, bp.w)
        if key not in specs:
            spec = build_spec(cfg, bp.n, bp.w)
            try:
                specs[key] = (spec, output_distribution(cfg, spec), "")
            except BudgetExceededError as e:
                logger.warning(f"Cannot measure {spec} in {cfg.measurement} mode: {e}")
                specs[key] = (spec, None, str(e))
        spec, pmf, refusal = specs[key]
        for order in build_orders(cfg, bp.n):
            jobs.append((len(jobs), name, bp, order, spec, pmf, refusal))

    def work(job) -> ErrorRow:
        return measure_row(*job[:6], cfg, digest, refusal=job[6])

    with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
        rows = list(pool.map(work, jobs))

    result = ExperimentResult(rows)
    if write:
        result.csv_path, result.json_path = write_report(rows, cfg, digest)
    logger.info(f"Experiment {digest}: {len(rows)} rows, {len(result.failed)} failed, "
                f"{sum(r.skipped for r in rows)} skipped")
    return result


def summarize_report(path: str | Path) -> pl.DataFrame:
    """Per (variant, mode, measurement): row counts, pass counts and the worst error against its bound."""
    df = pl.read_csv(path, schema_overrides=REPORT_SCHEMA)
    return (
        df.group_by(["variant", "mode", "measurement"])
        .agg(
            pl.len().alias("rows"),
            pl.col("passed").sum().alias("passed"),
            pl.col("skipped").sum().alias("skipped"),
            pl.col("frobenius").max().alias("max_frobenius"),
            pl.col("bound").max().alias("bound"),
            pl.col("vacuous").sum().alias("vacuous"),
        )
        .sort(["variant", "mode", "measurement"])
    )


# ----------------------------------------------------------------------
# Monotonicity suite
# ----------------------------------------------------------------------
def monotonicity_suite(n: int = 8, w: int = 2, count: int = 50, ks: tuple[int, ...] = (2, 3, 4, 5),
                       r: int = 2, rng_seed: int = 0) -> dict[int, float]:
    """Suite-max exact error of the exact variant for each k, over one fixed suite of programs."""
    rng = np.random.default_rng(rng_seed)
    suite = [random_program(n, w, int(s)) for s in rng.integers(0, 2**63 - 1, size=count)]
    maxima: dict[int, float] = {}
    for k in ks:
        pmf = exact_output_distribution(exact_spec(n, w, k=k, r=r))
        maxima[k] = max((exact_fooling_error(bp, pmf).frobenius for bp in suite), default=0.0)
        logger.debug(f"monotonicity suite k={k}: max error {maxima[k]:.4g}")
    return maxima


def is_monotone(maxima: dict[int, float]) -> bool:
    values = [maxima[k] for k in sorted(maxima)]
    return all(b <= a + TOLERANCE for a, b in zip(values, values[1:]))

