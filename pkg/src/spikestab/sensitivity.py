"""Monte Carlo and exact estimators of noise sensitivity.

Includes the triple-product classifier estimator (weights x inputs x
perturbations), per-time-step single-neuron disagreement probabilities, the
exact N_h perturbation profile with its binomial-mixture identity, and the
layerwise disagreement profile D^(l).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from spikestab import kernels
from spikestab.core import (
    STREAM_DATA,
    STREAM_PERTURBATION,
    STREAM_WEIGHTS,
    FIXED_HAMMING,
    HypercubePoint,
    InputSequence,
    PerturbationModel,
    SeedSpec,
    gaussian_weights,
    perturb_batch,
    sample_uniform_batch,
)
from spikestab.network import NetworkConfig, forward
from spikestab.neuron import NeuronParams

NH_ENUMERATION_GUARD = 10**7


@dataclass(frozen=True)
class SensitivityEstimate:
    """Monte Carlo flip-probability estimate with full provenance.

    `flips` counts label changes including tie-mediated ones; `flips_no_ties`
    excludes trials where a tie flag was set on either side.  The reported
    estimate uses `flips` unless the estimator was asked to exclude ties.
    """

    estimate: float
    trials: int
    std_error: float
    model: PerturbationModel
    flips: int
    ties: int
    flips_no_ties: int
    wilson_low: float
    wilson_high: float

    @property
    def stability(self) -> float:
        """Noise stability 1 - 2 * NS, from the same flip counter."""
        return 1.0 - 2.0 * self.estimate


def _wilson_interval(k: int, n: int, z: float = 3.0):
    if n == 0:
        return 0.0, 1.0
    phat = k / n
    denom = 1.0 + z * z / n
    center = (phat + z * z / (2 * n)) / denom
    half = z * math.sqrt(phat * (1 - phat) / n + z * z / (4 * n * n)) / denom
    return max(0.0, center - half), min(1.0, center + half)


def _make_estimate(flips, ties, flips_no_ties, trials, model, include_ties):
    used = flips if include_ties else flips_no_ties
    p = used / trials
    se = math.sqrt(p * (1 - p) / trials)
    lo, hi = _wilson_interval(used, trials)
    return SensitivityEstimate(
        estimate=p,
        trials=trials,
        std_error=se,
        model=model,
        flips=int(flips),
        ties=int(ties),
        flips_no_ties=int(flips_no_ties),
        wilson_low=lo,
        wilson_high=hi,
    )


def ens_monte_carlo(
    family,
    model: PerturbationModel,
    n_weights: int,
    n_inputs: int,
    n_perturbations: int,
    seed: SeedSpec,
    include_ties: bool = True,
) -> SensitivityEstimate:
    """Estimate P[f_W(x) != f_W(x + noise)] over the triple product of draws.

    `family(w_idx)` must return a classifier exposing `n` and
    `predict(X) -> (labels, ties)` for static +-1 input batches.
    """
    if min(n_weights, n_inputs, n_perturbations) < 1:
        raise ValueError("all trial counts must be >= 1")
    flips = ties = flips_no_ties = 0
    for w_idx in range(n_weights):
        clf = family(w_idx)
        n = clf.n
        for x_idx in range(n_inputs):
            x = sample_uniform_batch(n, seed.rng(STREAM_DATA, w_idx, x_idx), 1)[0]
            Y = perturb_batch(
                x, model, seed.rng(STREAM_PERTURBATION, w_idx, x_idx), n_perturbations
            )
            labels, tie_flags = clf.predict(np.vstack([x[None, :], Y]))
            changed = labels[1:] != labels[0]
            tie_involved = tie_flags[1:] | tie_flags[0]
            flips += int(np.count_nonzero(changed))
            ties += int(np.count_nonzero(tie_involved))
            flips_no_ties += int(np.count_nonzero(changed & ~tie_involved))
    trials = n_weights * n_inputs * n_perturbations
    return _make_estimate(flips, ties, flips_no_ties, trials, model, include_ties)


def ens_single_neuron(
    params: NeuronParams,
    n: int,
    model: PerturbationModel,
    n_weights: int,
    n_inputs: int,
    n_perturbations: int,
    seed: SeedSpec,
) -> list[SensitivityEstimate]:
    """Per-time-step spike disagreement probabilities for one random neuron.

    Returns T estimates; element t-1 is the Monte Carlo estimate of
    P[s_t(x) != s_t(y)] under static encoding.
    """
    T = params.latency
    flips_t = np.zeros(T, dtype=np.int64)
    for w_idx in range(n_weights):
        w = gaussian_weights(1, n, 1.0 / n, seed.rng(STREAM_WEIGHTS, w_idx))[0]
        for x_idx in range(n_inputs):
            x = sample_uniform_batch(n, seed.rng(STREAM_DATA, w_idx, x_idx), 1)[0]
            Y = perturb_batch(
                x, model, seed.rng(STREAM_PERTURBATION, w_idx, x_idx), n_perturbations
            )
            drives = np.vstack([x[None, :], Y]).astype(np.float64) @ w  # (P+1,)
            drive_mat = np.broadcast_to(drives, (T, drives.shape[0]))
            spikes, _ = kernels.lif_forward(drive_mat, params.beta, params.theta, params.signed)
            flips_t += np.count_nonzero(spikes[:, 1:] != spikes[:, :1], axis=1)
    trials = n_weights * n_inputs * n_perturbations
    return [
        _make_estimate(int(k), 0, int(k), trials, model, True) for k in flips_t
    ]


def flip_probability_single(
    params: NeuronParams,
    x_seq: InputSequence,
    y_seq: InputSequence,
    n_weight_draws: int,
    t: int,
    seed: SeedSpec,
) -> float:
    """Monte Carlo estimate over w ~ N(0, I/n) of P[s_t(x) != s_t(y)]."""
    if x_seq.n != y_seq.n or x_seq.T != y_seq.T:
        raise ValueError("input sequences must share dimension and length")
    if not 1 <= t <= x_seq.T:
        raise ValueError(f"t must lie in [1, {x_seq.T}]")
    n = x_seq.n
    W = gaussian_weights(n_weight_draws, n, 1.0 / n, seed.rng(STREAM_WEIGHTS))
    drives_x = x_seq.steps[:t].astype(np.float64) @ W.T  # (t, m)
    drives_y = y_seq.steps[:t].astype(np.float64) @ W.T
    sx, _ = kernels.lif_forward(drives_x, params.beta, params.theta, params.signed)
    sy, _ = kernels.lif_forward(drives_y, params.beta, params.theta, params.signed)
    return float(np.count_nonzero(sx[t - 1] != sy[t - 1]) / n_weight_draws)


def nh_exact(predict, x, h: int, chunk: int = 4096) -> int:
    """Exact count of h-bit perturbations of x that flip the label.

    `predict(X)` must be a batch classifier returning labels or a
    (labels, ties) pair; enumeration is guarded at C(n, h) <= 10^7 subsets.
    """

    def labels_of(out):
        return np.asarray(out[0] if isinstance(out, tuple) else out)

    coords = x.coords if isinstance(x, HypercubePoint) else np.asarray(x, dtype=np.int8)
    n = coords.shape[0]
    if not 0 <= h <= n:
        raise ValueError(f"h must lie in [0, {n}]")
    total = math.comb(n, h)
    if total > NH_ENUMERATION_GUARD:
        raise ValueError(f"C({n}, {h}) = {total} exceeds the enumeration guard")
    base_label = labels_of(predict(coords[None, :]))[0]
    if h == 0:
        return 0
    count = 0
    combos = itertools.combinations(range(n), h)
    while True:
        block = list(itertools.islice(combos, chunk))
        if not block:
            break
        Y = np.tile(coords, (len(block), 1))
        rows = np.repeat(np.arange(len(block)), h)
        cols = np.fromiter((i for combo in block for i in combo), dtype=np.int64)
        Y[rows, cols] *= -1
        labels = labels_of(predict(Y))
        count += int(np.count_nonzero(labels != base_label))
    return count


@dataclass(frozen=True)
class NhProfile:
    """E_x[N_h] for h = 0..n; exact when built from a full truth table."""

    n: int
    values: np.ndarray
    exact: bool = True


def nh_profile_exact(labels: np.ndarray, n: int) -> NhProfile:
    """Exact expected perturbation profile from a full label table.

    labels: length-2^n array indexed by input bitmask (bit i set <=> x_i=+1).
    values[h] = 2^-n * sum_x N_h(x), computed via XOR shifts.
    """
    labels = np.asarray(labels)
    size = 1 << n
    if labels.shape != (size,):
        raise ValueError(f"expected {size} labels, got {labels.shape}")
    idx = np.arange(size)
    values = np.zeros(n + 1, dtype=np.float64)
    for mask in range(1, size):
        h = int(mask).bit_count()
        values[h] += np.count_nonzero(labels != labels[idx ^ mask])
    values /= size
    return NhProfile(n=n, values=values)


def ens_from_nh(profile: NhProfile, nu: float) -> float:
    """Binomial mixture identity: ENS = sum_h E[N_h] nu^h (1-nu)^(n-h)."""
    if not profile.exact or profile.values.shape != (profile.n + 1,):
        raise ValueError("ens_from_nh requires a complete exact profile for h = 0..n")
    n = profile.n
    h = np.arange(1, n + 1)
    # stable log-space weights; nu in {0, 1} handled directly
    if nu == 0.0:
        return 0.0
    if nu == 1.0:
        return float(profile.values[n])
    weights = np.exp(h * np.log(nu) + (n - h) * np.log1p(-nu))
    return float(np.dot(profile.values[1:], weights))


def ns_exhaustive(values: np.ndarray, nu: float) -> float:
    """Exact noise sensitivity of a fixed Boolean function from its table.

    values: length-2^n array of +-1 outputs (or labels), bitmask-indexed.
    """
    n = int(np.log2(values.shape[0]))
    profile = nh_profile_exact(values, n)
    return ens_from_nh(profile, nu)


@dataclass(frozen=True)
class DisagreementProfile:
    """Per-layer counts of neurons whose trains differ at any time step."""

    counts: np.ndarray  # length L+1, index 0 is the input layer

    @property
    def L(self) -> int:
        return self.counts.shape[0] - 1


def disagreement_profile(
    net: NetworkConfig, x_seq: InputSequence, y_seq: InputSequence
) -> DisagreementProfile:
    """D^(l) = |{neurons at layer l with any time-step disagreement}|."""
    if x_seq.n != y_seq.n or x_seq.T != y_seq.T:
        raise ValueError("input sequences must share dimension and length")
    rx = forward(net, x_seq)
    ry = forward(net, y_seq)
    counts = [int(np.count_nonzero(np.any(x_seq.steps != y_seq.steps, axis=0)))]
    for sx, sy in zip(rx.layer_spikes, ry.layer_spikes):
        counts.append(int(np.count_nonzero(np.any(sx != sy, axis=0))))
    return DisagreementProfile(np.asarray(counts, dtype=np.int64))


CSV_FIELDS = (
    "n",
    "L",
    "T",
    "theta",
    "beta",
    "alphabet",
    "model",
    "nu_or_h",
    "trials",
    "flips",
    "ties",
    "estimate",
    "std_error",
    "seed",
)


def estimate_csv_row(est: SensitivityEstimate, n, L, T, theta, beta, alphabet, seed) -> dict:
    """Self-describing CSV row for one sensitivity measurement."""
    return {
        "n": n,
        "L": L,
        "T": T,
        "theta": theta,
        "beta": beta,
        "alphabet": alphabet,
        "model": est.model.kind,
        "nu_or_h": est.model.magnitude_label(),
        "trials": est.trials,
        "flips": est.flips,
        "ties": est.ties,
        "estimate": est.estimate,
        "std_error": est.std_error,
        "seed": seed,
    }
