import argparse
import json
import logging
from pathlib import Path

import polars as pl
from pydantic import ValidationError as SchemaError

from banners import Banner
from config import config
from core.errors import BudgetExceededError, RobpgenError
from fourier import decompose_prop1, parseval_check
from harness import (
    ExperimentConfig,
    StepParams,
    build_programs,
    build_spec,
    lemma_h_bound_check,
    level_error_profile,
    noise_mask_profile,
    rows_to_frame,
    run_experiment,
    single_step_error,
    summarize_report,
)
from harness.lemmas import MAX_PROFILE_N, TOLERANCE
from primitives import almost_kwise, audit_kwise, kwise, mask_kill_probability, max_bias, small_bias

try:
    settings = config('robpgen')
    LOG_LEVEL = settings.get("LOG_LEVEL", fallback="INFO")
    OUTPUT_DIR = settings.get("OUTPUT_DIR", fallback="results")
    WORKERS = settings.getint("WORKERS", fallback=4)
except ValueError as e:
    logging.critical(f"Bad value in config/config.cfg: {e}")
    exit(1)

logging.basicConfig(level=LOG_LEVEL, format='%(asctime)s - %(levelname)s - %(message)s')
logger = logging.getLogger(__name__)

ban = Banner()

ASCII_ART = r"""
           _
 _ __ ___ | |__  _ __   __ _  ___ _ __
| '__/ _ \| '_ \| '_ \ / _` |/ _ \ '_ \
| | | (_) | |_) | |_) | (_| |  __/ | | |
|_|  \___/|_.__/| .__/ \__, |\___|_| |_|
                |_|    |___/
"""

STAR_DEFAULT = 2.0**-10
STAR_DEFAULT_R = 2

# CLI flag -> ExperimentConfig field
CONFIG_FLAGS = {
    "n": "n",
    "w": "w",
    "count": "count",
    "rng_seed": "rng_seed",
    "program_file": "program_file",
    "formula_file": "formula_file",
    "orders": "orders",
    "order_count": "order_count",
    "variant": "variant",
    "k": "k",
    "r": "r",
    "delta": "delta",
    "gamma": "gamma",
    "epsilon": "epsilon",
    "mass_mode": "mass_mode",
    "mode": "measurement",
    "samples": "samples",
    "out": "out",
    "workers": "workers",
}


# ----------------------------------------------------------------------
# Helpers
# ----------------------------------------------------------------------
def step_params(args) -> StepParams:
    k = args.k if args.k is not None else 2
    if args.variant == "star":
        delta = args.delta if args.delta is not None else STAR_DEFAULT
        gamma = args.gamma if args.gamma is not None else STAR_DEFAULT
        return StepParams("star", k, delta, gamma)
    return StepParams("exact", k)


def experiment_config(args, step: StepParams | None = None) -> ExperimentConfig:
    """
    Builds the experiment configuration: the --config JSON file first, explicit flags on top.

    With a step, its k (and delta, gamma for star) fill whatever the flags left open, and a star
    generator without epsilon gets r = STAR_DEFAULT_R.
    """
    values = json.loads(Path(args.config).read_text()) if args.config else {}
    for flag, name in CONFIG_FLAGS.items():
        value = getattr(args, flag, None)
        if value is not None:
            values[name] = value

    if step is not None:
        values.setdefault("variant", step.kind)
        values.setdefault("k", step.k)
        if step.kind == "star":
            values.setdefault("delta", step.delta)
            values.setdefault("gamma", step.gamma)
            if values.get("epsilon") is None:
                values.setdefault("r", STAR_DEFAULT_R)

    if values.get("program_file"):
        values["source"] = "file"
    elif values.get("formula_file"):
        values["source"] = "formula"
    values.setdefault("out", str(Path(OUTPUT_DIR) / "report.csv"))
    values.setdefault("workers", WORKERS)
    seed = values.get("rng_seed", 0)
    if values.get("orders") == "sampled":
        values.setdefault("order_seed", seed)
    if values.get("measurement") == "sampled":
        values.setdefault("sample_seed", seed)
    return ExperimentConfig(**values)


def show(df: pl.DataFrame, out: str | None = None) -> None:
    with pl.Config(tbl_rows=50, tbl_cols=-1, fmt_str_lengths=60):
        print(df)
    if out:
        path = Path(out)
        path.parent.mkdir(parents=True, exist_ok=True)
        df.write_csv(path)
        logger.info(f"Wrote {df.height} rows to {path}")


def finish(passed: bool, message: str) -> None:
    ban.outcome(passed, message)
    if not passed:
        exit(1)


# ----------------------------------------------------------------------
# Handlers
# ----------------------------------------------------------------------
def handle_audit_primitives(args):
    n = args.n or 8
    k = args.k or 2
    delta = args.delta or 0.25
    gamma = args.gamma or 0.25
    logger.info(f"Auditing primitives at n={n}, k={k}, delta={delta}, gamma={gamma}")

    rows = []
    desc = kwise(n, k)
    deviation = audit_kwise(desc, k)
    rows.append(dict(primitive=desc.to_text(), seed_bits=desc.seed_bits, check=f"{k}-wise deviation",
                     measured=float(deviation), bound=0.0, passed=deviation == 0))

    desc = small_bias(n, delta)
    bias, alpha = max_bias(desc)
    rows.append(dict(primitive=desc.to_text(), seed_bits=desc.seed_bits, check=f"max bias (alpha={alpha:#x})",
                     measured=float(bias), bound=delta, passed=bias <= delta))

    desc = almost_kwise(n, k, gamma)
    deviation = audit_kwise(desc, k)
    rows.append(dict(primitive=desc.to_text(), seed_bits=desc.seed_bits, check=f"{k}-wise deviation",
                     measured=float(deviation), bound=gamma, passed=deviation <= gamma))

    desc = kwise(n, k)
    alpha = (1 << k) - 1
    kill = mask_kill_probability(desc, alpha)
    rows.append(dict(primitive=desc.to_text(), seed_bits=desc.seed_bits, check="Pr[alpha AND T = 0]",
                     measured=float(kill), bound=2.0**-k, passed=kill == 2.0**-k))

    df = pl.DataFrame(rows)
    show(df, args.out)
    finish(all(df["passed"]), f"{int(df['passed'].sum())}/{df.height} primitive audits passed")


def handle_single_step(args):
    step = step_params(args)
    cfg = experiment_config(args, step)
    logger.info(f"Single step {step.kind} k={step.k} over {cfg.count if cfg.source == 'random' else 1} programs")

    rows = []
    for name, bp in build_programs(cfg):
        error = single_step_error(bp, step)
        bound = step.bound(bp.n, bp.w, cfg.mass_mode)
        passed = error.frobenius <= bound + TOLERANCE
        if not passed:
            logger.error(f"{name}: single-step error {error.frobenius:.4g} exceeds {bound:.4g}")
        rows.append(dict(program=name, kind=step.kind, k=step.k, frobenius=error.frobenius,
                         scalar=error.scalar, bound=bound, passed=passed))

    if not rows:
        ban.info("No programs to check")
        return
    df = pl.DataFrame(rows)
    show(df, args.out)
    worst = df["frobenius"].max()
    finish(all(df["passed"]), f"{df.height} programs, max single-step error {worst:.4g}")


def handle_fool(args):
    cfg = experiment_config(args)
    result = run_experiment(cfg)
    df = rows_to_frame(result.rows).select(
        "row", "program", "order", "measurement", "frobenius", "scalar", "half_width", "bound", "passed", "skipped"
    )
    show(df)
    skipped = sum(row.skipped for row in result.rows)
    if skipped:
        ban.warning(f"{skipped} rows skipped (budget)")
    finish(result.exit_code == 0,
           f"{len(result.rows)} rows, {len(result.failed)} failed, report at {result.csv_path}")


def handle_prop1_check(args):
    cfg = experiment_config(args)
    rows = []
    for name, bp in build_programs(cfg):
        lhs, rhs = parseval_check(bp)
        ks = [args.k] if args.k else range(1, bp.n + 1)
        for k in ks:
            gap = decompose_prop1(bp, k).max_reconstruction_error()
            rows.append(dict(program=name, k=k, reconstruction_error=gap, parseval_gap=abs(lhs - rhs),
                             passed=gap <= TOLERANCE and abs(lhs - rhs) <= TOLERANCE))

    if not rows:
        ban.info("No programs to check")
        return
    df = pl.DataFrame(rows)
    show(df, args.out)
    finish(all(df["passed"]), f"{df.height} decompositions, max error {df['reconstruction_error'].max():.3g}")


def handle_lemma_check(args):
    step = step_params(args)
    cfg = experiment_config(args, step)
    rows = []
    specs = {}
    for name, bp in build_programs(cfg):
        for part in decompose_prop1(bp, step.k).nonzero_high():
            check = lemma_h_bound_check(part.expansion(bp.w), step)
            rows.append(dict(program=name, check=f"high part H_{part.i}", lhs=check.lhs, rhs=check.rhs,
                             passed=check.passed))

        if (bp.n, bp.w) not in specs:
            specs[(bp.n, bp.w)] = build_spec(cfg, bp.n, bp.w)
        spec = specs[(bp.n, bp.w)]
        if bp.n > MAX_PROFILE_N:
            logger.warning(f"{name}: no level profile above n={MAX_PROFILE_N}")
            continue
        try:
            profile = level_error_profile(bp, spec)
        except BudgetExceededError as e:
            logger.warning(f"{name}: level profile skipped: {e}")
            continue
        rows.append(dict(program=name, check=f"level profile r={spec.r}", lhs=profile.total, rhs=profile.bound,
                         passed=profile.passed))

    for spec in specs.values():
        try:
            noise = noise_mask_profile(spec)
        except BudgetExceededError as e:
            logger.warning(f"noise mask of {spec} skipped: {e}")
            continue
        logger.info(f"Noise mask of {spec}: Pr[|Y| >= {noise.threshold}] = {float(noise.tail):.4g}")
        rows.append(dict(program=spec.to_text(), check="noise mask Pr[Y_j = 1]",
                         lhs=float(max(noise.per_coordinate, default=0)), rhs=noise.bound, passed=noise.passed))

    df = pl.DataFrame(rows, schema={"program": pl.Utf8, "check": pl.Utf8, "lhs": pl.Float64,
                                    "rhs": pl.Float64, "passed": pl.Boolean})
    show(df, args.out)
    finish(all(df["passed"]), f"{int(df['passed'].sum())}/{df.height} inequality checks passed")


def handle_report(args):
    path = args.file or args.out or str(Path(OUTPUT_DIR) / "report.csv")
    summary = summarize_report(path)
    show(summary)
    ban.info(f"Summary of {path}")


# ----------------------------------------------------------------------
# CLI
# ----------------------------------------------------------------------
def add_program_arguments(parser):
    parser.add_argument("--n", type=int, help="Input length of random programs")
    parser.add_argument("--w", type=int, help="Width of random programs")
    parser.add_argument("--count", type=int, help="Number of random programs")
    parser.add_argument("--rng-seed", type=int, help="Seed of every random stream of the run")
    parser.add_argument("--program-file", help="Program file to test instead of random programs")
    parser.add_argument("--formula-file", help="Read-once formula file to compile and test")
    parser.add_argument("--config", help="JSON experiment configuration; explicit flags override it")
    parser.add_argument("--out", help="CSV output path")


def add_generator_arguments(parser):
    parser.add_argument("--variant", choices=["exact", "star"], help="Generator variant")
    parser.add_argument("--k", type=int, help="Independence parameter override")
    parser.add_argument("--r", type=int, help="Recursion depth override")
    parser.add_argument("--delta", type=float, help="Bias of D (star)")
    parser.add_argument("--gamma", type=float, help="Almost-independence of T (star)")
    parser.add_argument("--epsilon", type=float, help="Target error for derived star parameters")
    parser.add_argument("--mass-mode", choices=["trivial", "chrt"], help="Level-mass bound used in bounds")


def create_cli():
    parser = argparse.ArgumentParser(description="Bounded independence plus noise generators for read-once branching programs")
    parser.add_argument("--log-level", choices=["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"], help="Override LOG_LEVEL")
    subparsers = parser.add_subparsers(title="Commands")

    # audit-primitives
    audit_parser = subparsers.add_parser("audit-primitives", help="Exhaustively audit the k-wise, small-bias and almost k-wise spaces")
    audit_parser.add_argument("--n", type=int, help="Output length (default 8)")
    audit_parser.add_argument("--k", type=int, help="Independence to audit (default 2)")
    audit_parser.add_argument("--delta", type=float, help="Bias of the small-bias space (default 0.25)")
    audit_parser.add_argument("--gamma", type=float, help="Distance of the almost k-wise space (default 0.25)")
    audit_parser.add_argument("--out", help="CSV output path")
    audit_parser.set_defaults(func=handle_audit_primitives)

    # single-step
    step_parser = subparsers.add_parser("single-step", help="Exact error of one step D + T AND U")
    add_program_arguments(step_parser)
    add_generator_arguments(step_parser)
    step_parser.set_defaults(func=handle_single_step)

    # fool
    fool_parser = subparsers.add_parser("fool", help="Fooling error of the full generator over programs and read orders")
    add_program_arguments(fool_parser)
    add_generator_arguments(fool_parser)
    fool_parser.add_argument("--orders", choices=["identity", "all", "sampled"], help="Read orders per program")
    fool_parser.add_argument("--order-count", type=int, help="Number of sampled orders")
    fool_parser.add_argument("--mode", choices=["exact_dp", "exact_seeds", "sampled"], help="Measurement mode")
    fool_parser.add_argument("--samples", type=int, help="Monte Carlo samples per row")
    fool_parser.add_argument("--workers", type=int, help="Worker threads")
    fool_parser.set_defaults(func=handle_fool)

    # prop1-check
    prop1_parser = subparsers.add_parser("prop1-check", help="Check the high/low Fourier decomposition pointwise")
    add_program_arguments(prop1_parser)
    prop1_parser.add_argument("--k", type=int, help="Level (default: every k from 1 to n)")
    prop1_parser.set_defaults(func=handle_prop1_check)

    # lemma-check
    lemma_parser = subparsers.add_parser("lemma-check", help="High-part, level-profile and noise-mask inequalities")
    add_program_arguments(lemma_parser)
    add_generator_arguments(lemma_parser)
    lemma_parser.set_defaults(func=handle_lemma_check)

    # report
    report_parser = subparsers.add_parser("report", help="Summarize an existing CSV report")
    report_parser.add_argument("file", nargs="?", help="Report CSV")
    report_parser.add_argument("--out", help="Report CSV (same as the positional argument)")
    report_parser.set_defaults(func=handle_report)

    return parser


if __name__ == "__main__":
    parser = create_cli()
    args = parser.parse_args()

    if not hasattr(args, "func"):
        parser.print_help()
        exit(0)

    if args.log_level:
        logging.getLogger().setLevel(args.log_level)

    print(ASCII_ART)
    try:
        args.func(args)
    except (RobpgenError, SchemaError) as e:
        logger.critical(f"{type(e).__name__}: {e}")
        ban.error(str(e).splitlines()[0])
        exit(1)
    except FileNotFoundError as e:
        logger.critical(f"File not found: {e.filename}")
        ban.error(f"File not found: {e.filename}")
        exit(1)
