"""Exact Fourier-Walsh analysis of small-dimension Boolean classifiers.

Truth tables are indexed by input bitmask (bit i set <=> x_i = +1), spectra by
subset bitmask.  The butterfly transform is integer-exact before the 2^-n
scaling, so transform/inverse round trips are exact on +-1 tables.
"""

from __future__ import annotations

import csv
import math
import struct
from dataclasses import dataclass

import numpy as np

from spikestab import kernels

MAX_N = 24


def _check_n(n: int):
    if not 1 <= n <= MAX_N:
        raise ValueError(f"n must lie in [1, {MAX_N}]")


def popcounts(masks: np.ndarray, n: int) -> np.ndarray:
    counts = np.zeros(masks.shape, dtype=np.int64)
    for i in range(n):
        counts += (masks >> i) & 1
    return counts


def all_inputs(n: int, masks=None) -> np.ndarray:
    """(m, n) +-1 matrix; row for mask m has x_i = +1 iff bit i of m is set."""
    _check_n(n)
    if masks is None:
        masks = np.arange(1 << n, dtype=np.int64)
    bits = (masks[:, None] >> np.arange(n)) & 1
    return (2 * bits - 1).astype(np.int8)


@dataclass(frozen=True)
class TruthTable:
    """All 2^n outputs of a Boolean function, in {-1, +1}."""

    n: int
    values: np.ndarray

    def __post_init__(self):
        _check_n(self.n)
        v = np.asarray(self.values, dtype=np.int8)
        if v.shape != (1 << self.n,):
            raise ValueError(f"expected {1 << self.n} values, got {v.shape}")
        if not np.all(np.abs(v) == 1):
            raise ValueError("truth table values must be +-1")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)


@dataclass(frozen=True)
class SpectrumTable:
    """All 2^n Fourier-Walsh coefficients, indexed by subset bitmask."""

    n: int
    coeffs: np.ndarray

    def __post_init__(self):
        _check_n(self.n)
        c = np.asarray(self.coeffs, dtype=np.float64)
        if c.shape != (1 << self.n,):
            raise ValueError(f"expected {1 << self.n} coefficients, got {c.shape}")
        object.__setattr__(self, "coeffs", c)


@dataclass(frozen=True)
class DegreeProfile:
    """Squared-coefficient mass by degree, W_k, and the tail sums."""

    weights: np.ndarray  # W_k for k = 0..n
    tails: np.ndarray  # tails[k] = sum_{j > k} W_j, for k = 0..n

    def tail(self, k: int) -> float:
        return float(self.tails[min(k, self.tails.shape[0] - 1)]) if k >= 0 else 1.0


def truth_table(classifier, n: int, chunk: int = 1 << 14) -> TruthTable:
    """Evaluate a batch classifier on every point of {-1,1}^n.

    `classifier` exposes predict(X) -> (labels, ties); class 0 maps to +1.
    """
    _check_n(n)
    size = 1 << n
    values = np.empty(size, dtype=np.int8)
    for start in range(0, size, chunk):
        masks = np.arange(start, min(start + chunk, size), dtype=np.int64)
        labels, _ = classifier.predict(all_inputs(n, masks))
        values[start : start + masks.shape[0]] = np.where(labels == 0, 1, -1)
    return TruthTable(n, values)


def walsh_hadamard(table: TruthTable) -> SpectrumTable:
    """All f_hat(S) = 2^-n sum_x f(x) chi_S(x), via the in-place butterfly."""
    a = table.values.astype(np.float64)
    kernels.fwht_inplace(a)
    # chi_S under the bit-set <=> +1 convention carries a (-1)^|S| factor
    # relative to the plain butterfly.
    signs = 1.0 - 2.0 * (popcounts(np.arange(1 << table.n, dtype=np.int64), table.n) & 1)
    a *= signs
    a /= 1 << table.n
    return SpectrumTable(table.n, a)


def inverse_walsh(spectrum: SpectrumTable) -> TruthTable:
    """Recover the truth table; exact on +-1-valued functions."""
    n = spectrum.n
    signs = 1.0 - 2.0 * (popcounts(np.arange(1 << n, dtype=np.int64), n) & 1)
    a = spectrum.coeffs * signs
    kernels.fwht_inplace(a)
    return TruthTable(n, np.rint(a).astype(np.int8))


def parseval_gap(spectrum: SpectrumTable) -> float:
    """|sum_S f_hat(S)^2 - 1|; zero (to 1e-9) for Boolean-valued functions."""
    return float(abs(np.sum(spectrum.coeffs**2) - 1.0))


def degree_profile(spectrum: SpectrumTable) -> DegreeProfile:
    degs = popcounts(np.arange(1 << spectrum.n, dtype=np.int64), spectrum.n)
    weights = np.bincount(degs, weights=spectrum.coeffs**2, minlength=spectrum.n + 1)
    tails = np.concatenate([np.cumsum(weights[::-1])[::-1][1:], [0.0]])
    return DegreeProfile(weights, tails)


def exact_ns(spectrum: SpectrumTable, nu: float) -> float:
    """NS_nu(f) = (1/2) sum_S (1 - (1-2 nu)^|S|) f_hat(S)^2, exactly."""
    if not 0.0 <= nu <= 0.5:
        raise ValueError("nu must lie in [0, 1/2]")
    profile = degree_profile(spectrum)
    k = np.arange(profile.weights.shape[0])
    return float(0.5 * np.dot(1.0 - (1.0 - 2.0 * nu) ** k, profile.weights))


@dataclass(frozen=True)
class ConcentrationCheck:
    tail: float
    bound: float
    holds: bool


def concentration_check(spectrum: SpectrumTable, nu: float) -> ConcentrationCheck:
    """Factor-4 degree-concentration inequality: tail(1/nu) <= 4 NS_nu."""
    if not 0.0 < nu <= 0.5:
        raise ValueError("nu must lie in (0, 1/2]")
    k = math.floor(1.0 / nu)
    tail = degree_profile(spectrum).tail(k)
    bound = 4.0 * exact_ns(spectrum, nu)
    return ConcentrationCheck(tail=tail, bound=bound, holds=bool(tail <= bound))


@dataclass(frozen=True)
class ExpectedDegreeProfile:
    """Degree weights and tails averaged over weight draws, with std errors."""

    draws: int
    weights_mean: np.ndarray
    weights_stderr: np.ndarray
    tails_mean: np.ndarray
    tails_stderr: np.ndarray

    def tail(self, k: int) -> float:
        return float(self.tails_mean[min(k, self.tails_mean.shape[0] - 1)])


def expected_degree_profile(family, n: int, n_weight_draws: int) -> ExpectedDegreeProfile:
    """Average per-draw degree profiles of `family(draw)` classifiers."""
    _check_n(n)
    if n_weight_draws < 1:
        raise ValueError("need at least one weight draw")
    weights = np.empty((n_weight_draws, n + 1))
    tails = np.empty((n_weight_draws, n + 1))
    for draw in range(n_weight_draws):
        spectrum = walsh_hadamard(truth_table(family(draw), n))
        profile = degree_profile(spectrum)
        weights[draw] = profile.weights
        tails[draw] = profile.tails
    denom = math.sqrt(n_weight_draws)
    return ExpectedDegreeProfile(
        draws=n_weight_draws,
        weights_mean=weights.mean(axis=0),
        weights_stderr=weights.std(axis=0, ddof=1) / denom if n_weight_draws > 1 else np.zeros(n + 1),
        tails_mean=tails.mean(axis=0),
        tails_stderr=tails.std(axis=0, ddof=1) / denom if n_weight_draws > 1 else np.zeros(n + 1),
    )


def spectrum_to_csv(spectrum: SpectrumTable, path):
    """CSV export: (bitmask, degree, coefficient)."""
    degs = popcounts(np.arange(1 << spectrum.n, dtype=np.int64), spectrum.n)
    with open(str(path), "w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(["bitmask", "degree", "coefficient"])
        for mask, (deg, coeff) in enumerate(zip(degs, spectrum.coeffs)):
            writer.writerow([mask, int(deg), f"{coeff:.17g}"])


def spectrum_to_binary(spectrum: SpectrumTable, path):
    """Compact dump: u32 n followed by 2^n little-endian f64 coefficients."""
    with open(str(path), "wb") as f:
        f.write(struct.pack("<I", spectrum.n))
        f.write(np.ascontiguousarray(spectrum.coeffs, dtype="<f8").tobytes())


def spectrum_from_binary(path) -> SpectrumTable:
    with open(str(path), "rb") as f:
        (n,) = struct.unpack("<I", f.read(4))
        coeffs = np.frombuffer(f.read(8 << n), dtype="<f8")
    return SpectrumTable(n, coeffs.astype(np.float64))
