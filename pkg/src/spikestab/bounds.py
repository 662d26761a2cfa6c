"""Closed-form evaluators for the stability bounds and auxiliary inequalities.

Constants C and c are unspecified absolute constants in the theory; they are
explicit parameters defaulting to 1, so plotted bounds are "scaled" overlays.
Logarithms are natural throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import stats

from spikestab.core import as_rng


@dataclass(frozen=True)
class BoundParams:
    """Free scale constants for the bound formulas."""

    C: float = 1.0
    c: float = 1.0

    def __post_init__(self):
        if self.C <= 0 or self.c <= 0:
            raise ValueError("C and c must be positive")


def thm1_bound(
    theta: float,
    t: int,
    nu_bar: float,
    n: int,
    params: BoundParams = BoundParams(),
    static: bool = False,
) -> float:
    """Single-neuron disagreement bound C (1+theta) t^2 sqrt(nu_bar) log n.

    For static inputs the logarithmic factor is dropped.
    """
    if not 0.0 <= nu_bar <= 1.0:
        raise ValueError("nu_bar must lie in [0, 1]")
    if n < 2 or t < 1:
        raise ValueError("need n >= 2 and t >= 1")
    log_factor = 1.0 if static else math.log(n)
    return params.C * (1.0 + theta) * t * t * math.sqrt(nu_bar) * log_factor


def thm2_bound(
    theta: float,
    T: int,
    L: int,
    n: int,
    n_L: int,
    nu: float,
    params: BoundParams = BoundParams(),
) -> float:
    """Deep-classifier disagreement bound.

    n_L T^4 C (1+theta) nu^(1/2^(2L+1)) log^(3/2) n
      + (L-1) exp(-c nu^(1/2^(2L-1)) n).
    """
    if not 0.0 < nu <= 1.0:
        raise ValueError("nu must lie in (0, 1]")
    if L < 1:
        raise ValueError("L must be >= 1")
    first = (
        n_L
        * T**4
        * params.C
        * (1.0 + theta)
        * nu ** (1.0 / 2 ** (2 * L + 1))
        * math.log(n) ** 1.5
    )
    second = (L - 1) * math.exp(-params.c * nu ** (1.0 / 2 ** (2 * L - 1)) * n)
    return first + second


def cor_bound(
    theta: float,
    T: int,
    L: int,
    n: int,
    nu_prime: float,
    params: BoundParams = BoundParams(),
) -> float:
    """Expected-noise-sensitivity bound for static binary classifiers.

    Valid only under the hypothesis nu' <= 1 / sqrt(n log n).
    """
    limit = 1.0 / math.sqrt(n * math.log(n))
    if nu_prime > limit:
        raise ValueError(
            f"nu'={nu_prime} violates the hypothesis nu' <= 1/sqrt(n log n) = {limit:.6g}"
        )
    first = params.C * nu_prime ** (1.0 / 2 ** (2 * L + 1)) * math.log(n) ** 1.5
    second = (L - 1) * math.exp(-params.c * nu_prime ** (1.0 / 2 ** (2 * L - 1)) * n)
    third = math.exp(-0.25 * math.sqrt(n))
    return first + second + third


def chernoff_tail(n: int, p: float, eps: float) -> float:
    """Multiplicative Chernoff bound e^(-eps^2 mu / (2+eps)) with mu = n p."""
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must lie in [0, 1]")
    if eps <= 0:
        raise ValueError("eps must be positive")
    mu = n * p
    return math.exp(-eps * eps * mu / (2.0 + eps))


def binomial_tail_exact(n: int, p: float, eps: float) -> float:
    """Exact P(X >= (1+eps) n p) for X ~ Bin(n, p), by CDF summation."""
    threshold = math.ceil((1.0 + eps) * n * p)
    if threshold > n:
        return 0.0
    return float(stats.binom.sf(threshold - 1, n, p))


def stochastic_dominance_check(
    n: int, p: float, q: float, n_samples: int = 0, seed=None
) -> bool:
    """Bin(n, p) <=_st Bin(n, q): CDF of the p-variable dominates pointwise.

    Verified by exact CDF tabulation; `n_samples` > 0 adds an empirical
    cross-check of the same ordering on sampled CDFs.
    """
    if not 0.0 < p < q < 1.0:
        raise ValueError("requires 0 < p < q < 1")
    k = np.arange(n + 1)
    cdf_p = stats.binom.cdf(k, n, p)
    cdf_q = stats.binom.cdf(k, n, q)
    exact_ok = bool(np.all(cdf_p >= cdf_q - 1e-12))
    if n_samples > 0:
        rng = as_rng(seed if seed is not None else 0)
        xs = rng.binomial(n, p, size=n_samples)
        ys = rng.binomial(n, q, size=n_samples)
        emp_p = np.searchsorted(np.sort(xs), k, side="right") / n_samples
        emp_q = np.searchsorted(np.sort(ys), k, side="right") / n_samples
        band = 3.0 * math.sqrt(1.0 / n_samples)
        exact_ok = exact_ok and bool(np.all(emp_p >= emp_q - band))
    return exact_ok


@dataclass(frozen=True)
class GaussianComparisonCheck:
    """Monte Carlo check of the bivariate-Gaussian crossing inequality."""

    lhs_estimates: tuple
    std_errors: tuple
    rhs: float
    holds_within_ci: bool


def lemma_a4_check(
    rho: float, a: float, b: float, n_samples: int, seed
) -> GaussianComparisonCheck:
    """Check P[X<=a, rho X + sqrt(1-rho^2) Z > b] (and the symmetric event)
    against sqrt(1-rho^2) + |a|(1-rho)/rho + |b-a|/rho at 3-sigma level."""
    if not 0.0 < rho <= 1.0:
        raise ValueError("rho must lie in (0, 1]")
    rng = as_rng(seed)
    X = rng.standard_normal(n_samples)
    Z = rng.standard_normal(n_samples)
    Y = rho * X + math.sqrt(1.0 - rho * rho) * Z
    p1 = float(np.count_nonzero((X <= a) & (Y > b)) / n_samples)
    p2 = float(np.count_nonzero((X > a) & (Y <= b)) / n_samples)
    se1 = math.sqrt(max(p1 * (1 - p1), 1e-12) / n_samples)
    se2 = math.sqrt(max(p2 * (1 - p2), 1e-12) / n_samples)
    rhs = math.sqrt(1.0 - rho * rho) + abs(a) * (1.0 - rho) / rho + abs(b - a) / rho
    holds = (p1 - 3.0 * se1 <= rhs) and (p2 - 3.0 * se2 <= rhs)
    return GaussianComparisonCheck((p1, p2), (se1, se2), rhs, bool(holds))
