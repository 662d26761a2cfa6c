"""Command-line experiment harness.

Subcommands: simulate, ens, spectrum, nh, bounds, check, experiment.
Experiment configs are TOML files with symbolic noise schedules resolved per
dimension before execution.  Exit codes: 0 success, 1 property failure,
2 config error, 3 I/O error.
"""

from __future__ import annotations

import csv as csv_module
import hashlib
import json
import math
import sys
import time
try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import click
import numpy as np

from spikestab import __version__, bounds, fourier, sensitivity
from spikestab.core import (
    InputSequence,
    PerturbationModel,
    SeedSpec,
    sample_uniform_batch,
    STREAM_DATA,
)
from spikestab.network import (
    NetworkClassifier,
    classify,
    init_random,
    load_network,
    network_family,
    save_network,
)
from spikestab.neuron import SIGNED, NeuronParams, run, run_closed_form

EXIT_PROPERTY_FAILURE = 1
EXIT_CONFIG_ERROR = 2
EXIT_IO_ERROR = 3

ENS_HEADER = [
    "kind", "n", "L", "T", "theta", "beta", "alphabet",
    "model", "nu_or_h", "t", "trials", "flips", "ties",
    "estimate", "std_error", "seed",
]
SPECTRUM_HEADER = [
    "kind", "n", "L", "T", "theta", "beta", "alphabet", "draws",
    "degree", "weight_mean", "weight_stderr", "tail_mean", "tail_stderr", "seed",
]
NH_HEADER = [
    "kind", "n", "L", "T", "theta", "beta", "alphabet", "draws",
    "h", "expected_count", "seed",
]
BOUND_HEADER = ["kind", "bound", "n", "L", "T", "theta", "nu", "t", "C", "c", "value"]
CHECK_HEADER = ["kind", "check", "instances", "violations", "seed"]

EXPERIMENT_KINDS = {
    "single_neuron_ens": ENS_HEADER,
    "deep_ens": ENS_HEADER,
    "spectrum": SPECTRUM_HEADER,
    "nh_profile": NH_HEADER,
    "bound_table": BOUND_HEADER,
    "lemma_checks": CHECK_HEADER,
}

# desk-scale grid caps; lifted by --full
MAX_N_SHALLOW = 10_000
MAX_N_DEEP = 2_000

_SCHEDULES = {
    "1/sqrt(n)": lambda n: 1.0 / math.sqrt(n),
    "2/n": lambda n: 2.0 / n,
    "1/n": lambda n: 1.0 / n,
    "1/(sqrt(n) log n)": lambda n: 1.0 / (math.sqrt(n) * math.log(n)),
    "1/(sqrt(n)*log(n))": lambda n: 1.0 / (math.sqrt(n) * math.log(n)),
}


class ConfigError(Exception):
    pass


def resolve_schedule(spec, n: int) -> float:
    """Resolve a noise level: a number, or a symbolic schedule in n."""
    if isinstance(spec, (int, float)):
        return float(spec)
    key = " ".join(str(spec).split())
    if key in _SCHEDULES:
        return _SCHEDULES[key](n)
    raise ConfigError(f"unknown noise schedule {spec!r}; known: {sorted(_SCHEDULES)}")


@dataclass
class ExperimentConfig:
    kind: str
    seed: int
    out: str
    n_list: list
    L: int = 1
    T: int = 10
    theta: float = 0.5
    beta: float = 1.0
    alphabet: str = SIGNED
    n_classes: int = 2
    nu_list: list = field(default_factory=list)  # raw entries (numbers or schedules)
    h_list: list = field(default_factory=list)
    n_weights: int = 10
    n_inputs: int = 100
    n_perturbations: int = 100
    per_step: bool = False
    spectrum_draws: int = 10
    bound_C: float = 1.0
    bound_c: float = 1.0

    def params(self) -> NeuronParams:
        return NeuronParams(self.beta, self.theta, self.T, self.alphabet)

    def models_for(self, n: int):
        out = []
        for raw in self.nu_list:
            out.append(PerturbationModel.iid_flip(resolve_schedule(raw, n)))
        for h in self.h_list:
            out.append(PerturbationModel.fixed_hamming(int(h)))
        if not out:
            raise ConfigError("config must provide [perturbation] nu or h values")
        return out


def load_config(path, seed_override=None) -> ExperimentConfig:
    try:
        with open(path, "rb") as f:
            data = tomllib.load(f)
    except FileNotFoundError as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"{path}: invalid TOML: {exc}") from exc
    return parse_config(data, str(path), seed_override=seed_override)


def _as_list(value):
    return list(value) if isinstance(value, (list, tuple)) else [value]


def parse_config(data: dict, origin: str, seed_override=None) -> ExperimentConfig:
    kind = data.get("kind")
    if kind not in EXPERIMENT_KINDS:
        raise ConfigError(
            f"{origin}: kind must be one of {sorted(EXPERIMENT_KINDS)}, got {kind!r}"
        )
    model = data.get("model", {})
    pert = data.get("perturbation", {})
    trials = data.get("trials", {})
    bound = data.get("bounds", {})
    seed = seed_override if seed_override is not None else data.get("seed", 0)
    try:
        cfg = ExperimentConfig(
            kind=kind,
            seed=int(seed),
            out=str(data.get("out", f"{kind}.csv")),
            n_list=[int(x) for x in _as_list(model.get("n", []))],
            L=int(model.get("L", 1)),
            T=int(model.get("T", 10)),
            theta=float(model.get("theta", 0.5)),
            beta=float(model.get("beta", 1.0)),
            alphabet=str(model.get("alphabet", SIGNED)),
            n_classes=int(model.get("n_classes", 2)),
            nu_list=_as_list(pert.get("nu", [])),
            h_list=[int(x) for x in _as_list(pert.get("h", []))],
            n_weights=int(trials.get("n_weights", 10)),
            n_inputs=int(trials.get("n_inputs", 100)),
            n_perturbations=int(trials.get("n_perturbations", 100)),
            per_step=bool(trials.get("per_step", False)),
            spectrum_draws=int(trials.get("spectrum_draws", 10)),
            bound_C=float(bound.get("C", 1.0)),
            bound_c=float(bound.get("c", 1.0)),
        )
        cfg.params()  # validates model fields
    except (ValueError, TypeError) as exc:
        raise ConfigError(f"{origin}: {exc}") from exc
    if not cfg.n_list and kind not in ("lemma_checks",):
        raise ConfigError(f"{origin}: [model] n must list at least one dimension")
    if kind == "lemma_checks" and not cfg.n_list:
        cfg.n_list = [0]
    return cfg


def check_grid_caps(cfg: ExperimentConfig, full: bool):
    if full or cfg.kind in ("lemma_checks", "bound_table"):
        return
    cap = MAX_N_SHALLOW if cfg.L <= 1 else MAX_N_DEEP
    too_big = [n for n in cfg.n_list if n > cap]
    if too_big:
        raise ConfigError(
            f"n={too_big} exceeds the desk-scale cap {cap} for L={cfg.L}; pass --full to lift it"
        )


def _fmt(value) -> str:
    if isinstance(value, float):
        return f"{value:.17g}"
    return str(value)


def write_csv(path, header, rows):
    try:
        with open(str(path), "w", newline="", encoding="utf-8") as f:
            writer = csv_module.writer(f)
            writer.writerow(header)
            for row in rows:
                writer.writerow([_fmt(row[k]) for k in header])
    except OSError as exc:
        raise IOError(f"cannot write {path}: {exc}") from exc


def _config_hash(cfg: ExperimentConfig) -> str:
    canonical = json.dumps(cfg.__dict__, sort_keys=True, default=str)
    return hashlib.sha256(canonical.encode()).hexdigest()


# ---------------------------------------------------------------------------
# experiment cell runners


def _single_neuron_cell(cfg: ExperimentConfig, n: int, model: PerturbationModel):
    seed = SeedSpec(cfg.seed)
    estimates = sensitivity.ens_single_neuron(
        cfg.params(), n, model, cfg.n_weights, cfg.n_inputs, cfg.n_perturbations, seed
    )
    rows = [_ens_row(cfg, n, model, est, t=t, L=1)
            for t, est in enumerate(estimates, start=1)]
    # default: one row per grid cell, reporting the final-step estimate
    return rows if cfg.per_step else rows[-1:]


def _deep_cell(cfg: ExperimentConfig, n: int, model: PerturbationModel):
    seed = SeedSpec(cfg.seed)
    widths = [n] * cfg.L + [cfg.n_classes]
    family = network_family(widths, cfg.params(), seed)
    est = sensitivity.ens_monte_carlo(
        family, model, cfg.n_weights, cfg.n_inputs, cfg.n_perturbations, seed
    )
    return [_ens_row(cfg, n, model, est, t=0, L=cfg.L)]


def _ens_row(cfg, n, model, est, t, L):
    return {
        "kind": cfg.kind,
        "n": n,
        "L": L,
        "T": cfg.T,
        "theta": cfg.theta,
        "beta": cfg.beta,
        "alphabet": cfg.alphabet,
        "model": model.kind,
        "nu_or_h": model.magnitude_label(),
        "t": t,
        "trials": est.trials,
        "flips": est.flips,
        "ties": est.ties,
        "estimate": est.estimate,
        "std_error": est.std_error,
        "seed": cfg.seed,
    }


def _spectrum_cell(cfg: ExperimentConfig, n: int, _model=None):
    seed = SeedSpec(cfg.seed)
    widths = [n] * cfg.L + [2]
    family = network_family(widths, cfg.params(), seed)
    profile = fourier.expected_degree_profile(family, n, cfg.spectrum_draws)
    rows = []
    for k in range(n + 1):
        rows.append({
            "kind": cfg.kind,
            "n": n,
            "L": cfg.L,
            "T": cfg.T,
            "theta": cfg.theta,
            "beta": cfg.beta,
            "alphabet": cfg.alphabet,
            "draws": cfg.spectrum_draws,
            "degree": k,
            "weight_mean": float(profile.weights_mean[k]),
            "weight_stderr": float(profile.weights_stderr[k]),
            "tail_mean": float(profile.tails_mean[k]),
            "tail_stderr": float(profile.tails_stderr[k]),
            "seed": cfg.seed,
        })
    return rows


def _nh_cell(cfg: ExperimentConfig, n: int, _model=None):
    seed = SeedSpec(cfg.seed)
    widths = [n] * cfg.L + [2]
    family = network_family(widths, cfg.params(), seed)
    acc = np.zeros(n + 1)
    for draw in range(cfg.spectrum_draws):
        table = fourier.truth_table(family(draw), n)
        acc += sensitivity.nh_profile_exact(table.values, n).values
    acc /= cfg.spectrum_draws
    return [
        {
            "kind": cfg.kind,
            "n": n,
            "L": cfg.L,
            "T": cfg.T,
            "theta": cfg.theta,
            "beta": cfg.beta,
            "alphabet": cfg.alphabet,
            "draws": cfg.spectrum_draws,
            "h": h,
            "expected_count": float(acc[h]),
            "seed": cfg.seed,
        }
        for h in range(n + 1)
    ]


def _bound_cell(cfg: ExperimentConfig, n: int, model: PerturbationModel):
    params = bounds.BoundParams(cfg.bound_C, cfg.bound_c)
    nu = model.magnitude_label() if model.kind == "iid_flip" else model.h / n
    rows = []
    for t in range(1, cfg.T + 1):
        rows.append({
            "kind": cfg.kind, "bound": "thm1", "n": n, "L": 1, "T": cfg.T,
            "theta": cfg.theta, "nu": nu, "t": t, "C": cfg.bound_C, "c": cfg.bound_c,
            "value": bounds.thm1_bound(cfg.theta, t, nu, n, params, static=True),
        })
    rows.append({
        "kind": cfg.kind, "bound": "thm2", "n": n, "L": cfg.L, "T": cfg.T,
        "theta": cfg.theta, "nu": nu, "t": 0, "C": cfg.bound_C, "c": cfg.bound_c,
        "value": bounds.thm2_bound(cfg.theta, cfg.T, cfg.L, n, cfg.n_classes, nu, params),
    })
    if nu <= 1.0 / math.sqrt(n * math.log(n)):
        rows.append({
            "kind": cfg.kind, "bound": "cor", "n": n, "L": cfg.L, "T": cfg.T,
            "theta": cfg.theta, "nu": nu, "t": 0, "C": cfg.bound_C, "c": cfg.bound_c,
            "value": bounds.cor_bound(cfg.theta, cfg.T, cfg.L, n, nu, params),
        })
    return rows


def _lemma_cell(cfg: ExperimentConfig, n: int, _model=None):
    report = run_checks(SeedSpec(cfg.seed))
    return [
        {
            "kind": cfg.kind,
            "check": item["name"],
            "instances": item["instances"],
            "violations": item["violations"],
            "seed": cfg.seed,
        }
        for item in report["checks"]
    ]


_CELL_RUNNERS = {
    "single_neuron_ens": _single_neuron_cell,
    "deep_ens": _deep_cell,
    "spectrum": _spectrum_cell,
    "nh_profile": _nh_cell,
    "bound_table": _bound_cell,
    "lemma_checks": _lemma_cell,
}


def run_experiment(cfg: ExperimentConfig, jobs: int = 1, full: bool = False):
    """Execute the grid; returns (header, rows, manifest)."""
    check_grid_caps(cfg, full)
    runner = _CELL_RUNNERS[cfg.kind]
    if cfg.kind in ("spectrum", "nh_profile", "lemma_checks"):
        cells = [(n, None) for n in cfg.n_list]
    else:
        cells = [(n, model) for n in cfg.n_list for model in cfg.models_for(n)]
    start = time.time()
    if jobs > 1 and len(cells) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(lambda cell: runner(cfg, *cell), cells))
    else:
        results = [runner(cfg, *cell) for cell in cells]
    rows = [row for cell_rows in results for row in cell_rows]
    manifest = {
        "version": __version__,
        "kind": cfg.kind,
        "config_hash": _config_hash(cfg),
        "seed": cfg.seed,
        "rows": len(rows),
        "resolved_cells": [
            {"n": n, "model": None if m is None else {"kind": m.kind, "value": m.magnitude_label()}}
            for n, m in cells
        ],
        "wall_time_s": time.time() - start,
    }
    return EXPERIMENT_KINDS[cfg.kind], rows, manifest


# ---------------------------------------------------------------------------
# property check suite


def run_checks(seed: SeedSpec, inject_fault: bool = False) -> dict:
    """Execute the lemma/property suites; returns a machine-readable report."""
    checks = []

    # closed-form equivalence of the two neuron dynamics (beta = 1)
    rng = seed.rng(10)
    mismatches = 0
    instances = 300
    for i in range(instances):
        n, T = 32, 10
        theta = [0.0, 0.5, 1.0][i % 3]
        params = NeuronParams(1.0, theta, T, SIGNED)
        w = rng.normal(0, 1 / math.sqrt(n), n)
        steps = (rng.integers(0, 2, (T, n)) * 2 - 1).astype(np.int8)
        seq = InputSequence(steps)
        if not np.array_equal(run(params, w, seq).spikes, run_closed_form(params, w, seq).spikes):
            mismatches += 1
    checks.append({"name": "closed_form_equivalence", "instances": instances, "violations": mismatches})

    # Parseval on random Boolean tables (fault injection corrupts one entry)
    rng = seed.rng(11)
    violations = 0
    instances = 50
    for i in range(instances):
        values = (rng.integers(0, 2, 1 << 10) * 2 - 1).astype(np.float64)
        if inject_fault and i == 0:
            values[0] = 3.0
        from spikestab import kernels

        a = values.copy()
        kernels.fwht_inplace(a)
        coeffs = a / (1 << 10)
        if abs(float(np.sum(coeffs**2)) - 1.0) > 1e-9:
            violations += 1
    checks.append({"name": "parseval", "instances": instances, "violations": violations})

    # factor-4 degree concentration on random tables
    rng = seed.rng(12)
    violations = 0
    instances = 0
    for _ in range(100):
        table = fourier.TruthTable(8, (rng.integers(0, 2, 256) * 2 - 1).astype(np.int8))
        spectrum = fourier.walsh_hadamard(table)
        for nu in (0.05, 0.1, 0.25):
            instances += 1
            if not fourier.concentration_check(spectrum, nu).holds:
                violations += 1
    checks.append({"name": "factor4_concentration", "instances": instances, "violations": violations})

    # binomial stochastic dominance via exact CDFs
    rng = seed.rng(13)
    violations = 0
    instances = 50
    for _ in range(instances):
        n = int(rng.integers(2, 200))
        p, q = np.sort(rng.uniform(0.01, 0.99, 2))
        if p == q:
            q = min(0.999, p + 1e-6)
        if not bounds.stochastic_dominance_check(n, float(p), float(q)):
            violations += 1
    checks.append({"name": "binomial_dominance", "instances": instances, "violations": violations})

    # Chernoff bound vs exact binomial tails
    violations = 0
    instances = 0
    for n in (10, 50, 100, 200):
        for p in (0.1, 0.3, 0.5):
            for eps in (0.5, 1.0, 2.0):
                instances += 1
                if bounds.binomial_tail_exact(n, p, eps) > bounds.chernoff_tail(n, p, eps) + 1e-12:
                    violations += 1
    checks.append({"name": "chernoff_tail", "instances": instances, "violations": violations})

    # bivariate Gaussian comparison inequality
    violations = 0
    instances = 0
    for rho in (0.5, 0.9, 0.99):
        for a in (-1.0, 0.0, 1.0):
            for b in (-1.0, 0.0, 1.0):
                instances += 1
                res = bounds.lemma_a4_check(rho, a, b, 100_000, seed.rng(14, instances))
                if not res.holds_within_ci:
                    violations += 1
    checks.append({"name": "gaussian_comparison", "instances": instances, "violations": violations})

    passed = all(c["violations"] == 0 for c in checks)
    return {"version": __version__, "passed": passed, "checks": checks}


# ---------------------------------------------------------------------------
# click commands


def _seed_from_env_or(value):
    import os

    env = os.environ.get("SPIKESTAB_SEED")
    if env is not None:
        return int(env)
    return value


@click.group()
def main():
    """Spiking-network noise sensitivity toolkit."""


@main.command()
@click.option("--net", "net_path", type=click.Path(exists=True), default=None,
              help="Load a saved network instead of drawing one.")
@click.option("--n", default=16, show_default=True)
@click.option("--layers", "-L", default=1, show_default=True)
@click.option("--classes", default=2, show_default=True)
@click.option("--latency", "-T", default=10, show_default=True)
@click.option("--theta", default=0.5, show_default=True)
@click.option("--beta", default=1.0, show_default=True)
@click.option("--alphabet", default=SIGNED, show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--save-net", type=click.Path(), default=None)
def simulate(net_path, n, layers, classes, latency, theta, beta, alphabet, seed, save_net):
    """Forward one random static input through a network and classify it."""
    seed = _seed_from_env_or(seed)
    spec = SeedSpec(seed)
    try:
        if net_path:
            net = load_network(net_path)
        else:
            params = NeuronParams(beta, theta, latency, alphabet)
            net = init_random([n] * layers + [classes], params, spec)
    except ValueError as exc:
        raise click.UsageError(str(exc))
    x = sample_uniform_batch(net.n_in, spec.rng(STREAM_DATA), 1)[0]
    result = classify(net, InputSequence.static(x, net.params.latency))
    if save_net:
        try:
            save_network(net, save_net, provenance={"seed": seed})
        except OSError as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(EXIT_IO_ERROR)
    click.echo(json.dumps({
        "predicted_class": result.predicted_class,
        "counts": [int(c) for c in result.counts],
        "tie": result.tie,
        "seed": seed,
    }))


@main.command()
@click.option("--n", default=100, show_default=True)
@click.option("--layers", "-L", default=1, show_default=True)
@click.option("--latency", "-T", default=10, show_default=True)
@click.option("--theta", default=0.5, show_default=True)
@click.option("--beta", default=1.0, show_default=True)
@click.option("--alphabet", default=SIGNED, show_default=True)
@click.option("--nu", default=None, help="Flip probability or schedule like '1/sqrt(n)'.")
@click.option("--h", "h_flips", type=int, default=None, help="Fixed Hamming perturbation.")
@click.option("--weights", "n_weights", default=10, show_default=True)
@click.option("--inputs", "n_inputs", default=100, show_default=True)
@click.option("--perturbations", "n_perturbations", default=100, show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--single-neuron", is_flag=True, help="Per-time-step neuron estimate.")
@click.option("--out", type=click.Path(), default=None, help="Append CSV row(s).")
def ens(n, layers, latency, theta, beta, alphabet, nu, h_flips, n_weights,
        n_inputs, n_perturbations, seed, single_neuron, out):
    """One-off expected-noise-sensitivity estimate."""
    seed = _seed_from_env_or(seed)
    try:
        if nu is None and h_flips is None:
            raise ConfigError("provide --nu or --h")
        model = (PerturbationModel.iid_flip(resolve_schedule(nu, n)) if nu is not None
                 else PerturbationModel.fixed_hamming(h_flips))
        cfg = ExperimentConfig(
            kind="single_neuron_ens" if single_neuron else "deep_ens",
            seed=seed, out=out or "", n_list=[n], L=layers, T=latency,
            theta=theta, beta=beta, alphabet=alphabet,
            n_weights=n_weights, n_inputs=n_inputs, n_perturbations=n_perturbations,
            per_step=single_neuron,
        )
        rows = (_single_neuron_cell if single_neuron else _deep_cell)(cfg, n, model)
    except (ConfigError, ValueError) as exc:
        click.echo(f"config error: {exc}", err=True)
        sys.exit(EXIT_CONFIG_ERROR)
    for row in rows:
        click.echo(json.dumps({k: row[k] for k in ("n", "t", "estimate", "std_error", "trials")}))
    if out:
        try:
            write_csv(out, ENS_HEADER, rows)
        except IOError as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(EXIT_IO_ERROR)


@main.command()
@click.option("--n", default=10, show_default=True)
@click.option("--layers", "-L", default=1, show_default=True)
@click.option("--latency", "-T", default=10, show_default=True)
@click.option("--theta", default=0.5, show_default=True)
@click.option("--beta", default=1.0, show_default=True)
@click.option("--alphabet", default=SIGNED, show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--draw", default=0, show_default=True)
@click.option("--out", type=click.Path(), default=None, help="CSV of coefficients.")
@click.option("--binary-out", type=click.Path(), default=None, help="Binary spectrum dump.")
def spectrum(n, layers, latency, theta, beta, alphabet, seed, draw, out, binary_out):
    """Exact Fourier-Walsh spectrum of one random binary classifier."""
    seed = _seed_from_env_or(seed)
    try:
        params = NeuronParams(beta, theta, latency, alphabet)
        net = init_random([n] * layers + [2], params, SeedSpec(seed), draw=draw)
        spec_table = fourier.walsh_hadamard(fourier.truth_table(NetworkClassifier(net), n))
    except ValueError as exc:
        click.echo(f"config error: {exc}", err=True)
        sys.exit(EXIT_CONFIG_ERROR)
    profile = fourier.degree_profile(spec_table)
    click.echo(json.dumps({
        "n": n,
        "parseval_gap": fourier.parseval_gap(spec_table),
        "degree_weights": [float(w) for w in profile.weights],
    }))
    try:
        if out:
            fourier.spectrum_to_csv(spec_table, out)
        if binary_out:
            fourier.spectrum_to_binary(spec_table, binary_out)
    except OSError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_IO_ERROR)


@main.command()
@click.option("--n", default=10, show_default=True)
@click.option("--layers", "-L", default=1, show_default=True)
@click.option("--latency", "-T", default=10, show_default=True)
@click.option("--theta", default=0.5, show_default=True)
@click.option("--beta", default=1.0, show_default=True)
@click.option("--alphabet", default=SIGNED, show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--draws", default=5, show_default=True)
@click.option("--out", type=click.Path(), default=None)
def nh(n, layers, latency, theta, beta, alphabet, seed, draws, out):
    """Exact expected perturbation profile E[N_h] for small n."""
    seed = _seed_from_env_or(seed)
    try:
        cfg = ExperimentConfig(
            kind="nh_profile", seed=seed, out=out or "", n_list=[n], L=layers,
            T=latency, theta=theta, beta=beta, alphabet=alphabet, spectrum_draws=draws,
        )
        rows = _nh_cell(cfg, n)
    except (ConfigError, ValueError) as exc:
        click.echo(f"config error: {exc}", err=True)
        sys.exit(EXIT_CONFIG_ERROR)
    click.echo(json.dumps({"n": n, "expected_counts": [r["expected_count"] for r in rows]}))
    if out:
        try:
            write_csv(out, NH_HEADER, rows)
        except IOError as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(EXIT_IO_ERROR)


@main.command("bounds")
@click.option("--n", default=1000, show_default=True)
@click.option("--layers", "-L", default=1, show_default=True)
@click.option("--latency", "-T", default=10, show_default=True)
@click.option("--theta", default=0.5, show_default=True)
@click.option("--nu", default="1/sqrt(n)", show_default=True)
@click.option("--const-c", "const_C", default=1.0, show_default=True)
@click.option("--const-exp", "const_c", default=1.0, show_default=True)
@click.option("--out", type=click.Path(), default=None)
def bounds_cmd(n, layers, latency, theta, nu, const_C, const_c, out):
    """Evaluate the closed-form stability bounds on one parameter point."""
    try:
        model = PerturbationModel.iid_flip(resolve_schedule(nu, n))
        cfg = ExperimentConfig(
            kind="bound_table", seed=0, out=out or "", n_list=[n], L=layers,
            T=latency, theta=theta, bound_C=const_C, bound_c=const_c,
        )
        rows = _bound_cell(cfg, n, model)
    except (ConfigError, ValueError) as exc:
        click.echo(f"config error: {exc}", err=True)
        sys.exit(EXIT_CONFIG_ERROR)
    for row in rows:
        click.echo(json.dumps({k: row[k] for k in ("bound", "t", "value")}))
    if out:
        try:
            write_csv(out, BOUND_HEADER, rows)
        except IOError as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(EXIT_IO_ERROR)


@main.command()
@click.option("--seed", default=0, show_default=True)
@click.option("--json-out", type=click.Path(), default=None)
@click.option("--inject-fault", is_flag=True, help="Self-test: corrupt one table entry.")
def check(seed, json_out, inject_fault):
    """Run the lemma/property suites; nonzero exit on any violation."""
    seed = _seed_from_env_or(seed)
    report = run_checks(SeedSpec(seed), inject_fault=inject_fault)
    text = json.dumps(report, indent=2)
    click.echo(text)
    if json_out:
        try:
            with open(json_out, "w") as f:
                f.write(text + "\n")
        except OSError as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(EXIT_IO_ERROR)
    if not report["passed"]:
        sys.exit(EXIT_PROPERTY_FAILURE)


@main.command()
@click.option("--config", "config_path", type=click.Path(), required=True)
@click.option("--seed", type=int, default=None, help="Override the config seed.")
@click.option("--jobs", default=1, show_default=True)
@click.option("--out", type=click.Path(), default=None, help="Override the config output path.")
@click.option("--full", is_flag=True, help="Lift the desk-scale grid caps.")
def experiment(config_path, seed, jobs, out, full):
    """Run an experiment grid from a TOML config; writes CSV + JSON manifest."""
    env_seed = _seed_from_env_or(None)
    if env_seed is not None:
        seed = env_seed
    try:
        cfg = load_config(config_path, seed_override=seed)
        header, rows, manifest = run_experiment(cfg, jobs=jobs, full=full)
    except ConfigError as exc:
        click.echo(f"config error: {exc}", err=True)
        sys.exit(EXIT_CONFIG_ERROR)
    out_path = out or cfg.out
    try:
        write_csv(out_path, header, rows)
        with open(str(out_path) + ".manifest.json", "w") as f:
            json.dump(manifest, f, indent=2)
            f.write("\n")
    except (IOError, OSError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_IO_ERROR)
    click.echo(f"wrote {len(rows)} rows to {out_path}")


if __name__ == "__main__":
    main()
