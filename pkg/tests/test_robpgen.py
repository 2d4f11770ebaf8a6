import json

import polars as pl
import pytest

from banners import Banner, Colors
from robpgen import create_cli, experiment_config, handle_audit_primitives, handle_fool, step_params


def parse(*argv):
    return create_cli().parse_args(list(argv))


def test_flags_override_config_file(tmp_path):
    path = tmp_path / "sweep.json"
    path.write_text(json.dumps({"n": 6, "w": 3, "count": 5, "k": 2}))
    args = parse("fool", "--config", str(path), "--count", "2", "--out", str(tmp_path / "r.csv"))
    cfg = experiment_config(args)
    assert (cfg.n, cfg.w, cfg.count, cfg.k) == (6, 3, 2, 2)
    assert cfg.out == str(tmp_path / "r.csv")


def test_file_sources_are_inferred():
    cfg = experiment_config(parse("fool", "--program-file", "tests/data/parity3.robp"))
    assert cfg.source == "file"
    cfg = experiment_config(parse("fool", "--formula-file", "tests/data/and_or.formula"))
    assert cfg.source == "formula"


def test_sampled_seeds_follow_rng_seed():
    cfg = experiment_config(parse("fool", "--n", "4", "--orders", "sampled", "--mode", "sampled", "--rng-seed", "7"))
    assert (cfg.order_seed, cfg.sample_seed, cfg.measurement) == (7, 7, "sampled")


def test_star_step_defaults_fill_the_config():
    args = parse("single-step", "--n", "4", "--variant", "star", "--k", "3")
    step = step_params(args)
    assert (step.kind, step.k, step.delta, step.gamma) == ("star", 3, 2.0**-10, 2.0**-10)
    cfg = experiment_config(args, step)
    assert (cfg.variant, cfg.k, cfg.r, cfg.delta) == ("star", 3, 2, 2.0**-10)
    assert step_params(parse("single-step", "--n", "4")).kind == "exact"


def test_audit_primitives_passes(tmp_path, capsys):
    out = tmp_path / "audit.csv"
    handle_audit_primitives(parse("audit-primitives", "--n", "6", "--out", str(out)))
    df = pl.read_csv(out)
    assert df.height == 4
    assert df["passed"].all()
    assert "passed" in capsys.readouterr().out


def test_fool_exits_zero_on_success(tmp_path):
    args = parse("fool", "--n", "4", "--count", "2", "--k", "1", "--r", "1", "--out", str(tmp_path / "r.csv"))
    handle_fool(args)
    assert (tmp_path / "r.csv").exists()
    assert (tmp_path / "r.json").exists()


def test_fool_rejects_missing_program_file(tmp_path):
    args = parse("fool", "--program-file", str(tmp_path / "missing.robp"), "--out", str(tmp_path / "r.csv"))
    with pytest.raises(FileNotFoundError):
        handle_fool(args)


def test_banner_render():
    line = Banner().render("success", "done")
    assert line.startswith(Colors.green)
    assert "done" in line
    assert Colors.get_color("unknown") == Colors.white
