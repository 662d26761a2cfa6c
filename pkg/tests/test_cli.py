"""CLI harness: config parsing, schedules, exit codes, determinism."""

import json
import math

import pytest
from click.testing import CliRunner

from spikestab.cli import (
    ConfigError,
    ExperimentConfig,
    load_config,
    main,
    parse_config,
    resolve_schedule,
    run_experiment,
)


def _write_config(tmp_path, text, name="cfg.toml"):
    path = tmp_path / name
    path.write_text(text)
    return path


BASIC = """
kind = "single_neuron_ens"
seed = 5
out = "out.csv"

[model]
n = [100]
T = 10

[perturbation]
nu = "1/sqrt(n)"

[trials]
n_weights = 2
n_inputs = 5
n_perturbations = 5
"""


def test_schedule_resolution():
    assert resolve_schedule("1/sqrt(n)", 100) == pytest.approx(0.1)
    assert resolve_schedule("2/n", 50) == pytest.approx(0.04)
    assert resolve_schedule("1/(sqrt(n) log n)", 100) == pytest.approx(
        1 / (10 * math.log(100))
    )
    assert resolve_schedule(0.25, 7) == 0.25
    with pytest.raises(ConfigError):
        resolve_schedule("1/cbrt(n)", 100)


def test_single_neuron_config_yields_one_row(tmp_path):
    cfg = load_config(_write_config(tmp_path, BASIC))
    header, rows, manifest = run_experiment(cfg)
    assert len(rows) == 1
    row = rows[0]
    assert row["nu_or_h"] == pytest.approx(0.1)
    assert 0.0 <= row["estimate"] <= 1.0
    assert row["t"] == cfg.T
    assert manifest["rows"] == 1


def test_per_step_rows(tmp_path):
    text = BASIC.replace("n_perturbations = 5", "n_perturbations = 5\nper_step = true")
    cfg = load_config(_write_config(tmp_path, text))
    _, rows, _ = run_experiment(cfg)
    assert len(rows) == cfg.T
    assert [r["t"] for r in rows] == list(range(1, cfg.T + 1))


def test_deep_ens_grid_shape(tmp_path):
    text = """
kind = "deep_ens"
seed = 1
[model]
n = [20, 30]
L = 5
T = 5
[perturbation]
nu = 0.1
[trials]
n_weights = 1
n_inputs = 3
n_perturbations = 3
"""
    cfg = load_config(_write_config(tmp_path, text))
    _, rows, _ = run_experiment(cfg, full=True)
    assert len(rows) == 2
    assert [r["n"] for r in rows] == [20, 30]
    assert all(r["L"] == 5 for r in rows)


def test_unknown_kind_rejected():
    with pytest.raises(ConfigError):
        parse_config({"kind": "bogus"}, "inline")


def test_missing_perturbation_rejected(tmp_path):
    text = BASIC.replace('nu = "1/sqrt(n)"', "")
    cfg = load_config(_write_config(tmp_path, text))
    with pytest.raises(ConfigError):
        run_experiment(cfg)


def test_grid_caps_without_full(tmp_path):
    text = BASIC.replace("n = [100]", "n = [20000]")
    cfg = load_config(_write_config(tmp_path, text))
    with pytest.raises(ConfigError):
        run_experiment(cfg, full=False)


def test_experiment_command_exit_codes(tmp_path):
    runner = CliRunner()
    path = _write_config(tmp_path, BASIC)
    out = tmp_path / "rows.csv"
    res = runner.invoke(main, ["experiment", "--config", str(path), "--out", str(out)])
    assert res.exit_code == 0, res.output
    assert out.exists() and (tmp_path / "rows.csv.manifest.json").exists()

    bad = _write_config(tmp_path, 'kind = "nope"\n', name="bad.toml")
    res = runner.invoke(main, ["experiment", "--config", str(bad)])
    assert res.exit_code == 2

    invalid = _write_config(tmp_path, "kind = [un终\n", name="broken.toml")
    res = runner.invoke(main, ["experiment", "--config", str(invalid)])
    assert res.exit_code == 2

    res = runner.invoke(
        main,
        ["experiment", "--config", str(path), "--out", str(tmp_path / "no" / "dir.csv")],
    )
    assert res.exit_code == 3


def test_experiment_rerun_byte_identical(tmp_path):
    runner = CliRunner()
    path = _write_config(tmp_path, BASIC)
    outs = []
    for name in ("a.csv", "b.csv"):
        out = tmp_path / name
        res = runner.invoke(main, ["experiment", "--config", str(path), "--out", str(out)])
        assert res.exit_code == 0, res.output
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]


def test_jobs_do_not_change_output(tmp_path):
    text = BASIC.replace("n = [100]", "n = [50, 100, 200]")
    runner = CliRunner()
    path = _write_config(tmp_path, text)
    blobs = []
    for jobs in ("1", "8"):
        out = tmp_path / f"j{jobs}.csv"
        res = runner.invoke(
            main, ["experiment", "--config", str(path), "--jobs", jobs, "--out", str(out)]
        )
        assert res.exit_code == 0, res.output
        blobs.append(out.read_bytes())
    assert blobs[0] == blobs[1]


def test_seed_env_override(tmp_path, monkeypatch):
    runner = CliRunner()
    path = _write_config(tmp_path, BASIC)
    out = tmp_path / "env.csv"
    monkeypatch.setenv("SPIKESTAB_SEED", "99")
    res = runner.invoke(main, ["experiment", "--config", str(path), "--out", str(out)])
    assert res.exit_code == 0
    assert ",99\r\n" in out.read_text() or out.read_text().strip().endswith(",99")


def test_check_command_pass_and_fault(tmp_path):
    runner = CliRunner()
    res = runner.invoke(main, ["check", "--seed", "0"])
    assert res.exit_code == 0
    report = json.loads(res.output)
    assert report["passed"]
    names = {c["name"]: c for c in report["checks"]}
    assert names["closed_form_equivalence"]["instances"] == 300
    assert all(c["violations"] == 0 for c in report["checks"])

    res = runner.invoke(main, ["check", "--seed", "0", "--inject-fault"])
    assert res.exit_code == 1
    report = json.loads(res.output)
    assert not report["passed"]
    assert names.keys() == {c["name"] for c in json.loads(res.output)["checks"]}


def test_simulate_and_spectrum_commands(tmp_path):
    runner = CliRunner()
    res = runner.invoke(main, ["simulate", "--n", "12", "--seed", "1"])
    assert res.exit_code == 0
    payload = json.loads(res.output)
    assert payload["predicted_class"] in (0, 1)

    out = tmp_path / "spec.csv"
    res = runner.invoke(main, ["spectrum", "--n", "6", "--out", str(out)])
    assert res.exit_code == 0
    assert abs(json.loads(res.output)["parseval_gap"]) < 1e-9
    assert out.read_text().startswith("bitmask,degree,coefficient")


def test_manifest_fields(tmp_path):
    runner = CliRunner()
    path = _write_config(tmp_path, BASIC)
    out = tmp_path / "m.csv"
    res = runner.invoke(main, ["experiment", "--config", str(path), "--out", str(out)])
    assert res.exit_code == 0
    manifest = json.loads((tmp_path / "m.csv.manifest.json").read_text())
    for key in ("version", "config_hash", "seed", "rows", "wall_time_s"):
        assert key in manifest
