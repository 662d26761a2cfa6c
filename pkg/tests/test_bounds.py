"""Closed-form bound evaluators and auxiliary inequality checks."""

import math

import numpy as np
import pytest

from spikestab.bounds import (
    BoundParams,
    binomial_tail_exact,
    chernoff_tail,
    cor_bound,
    lemma_a4_check,
    stochastic_dominance_check,
    thm1_bound,
    thm2_bound,
)
from spikestab.core import SeedSpec


def test_thm1_zero_noise_is_zero():
    assert thm1_bound(0.5, 3, 0.0, 100) == 0.0


def test_thm1_dynamic_example_value():
    # 1.5 * 1 * 0.1 * ln 100
    assert thm1_bound(0.5, 1, 0.01, 100) == pytest.approx(0.6907755278982138)


def test_thm1_static_drops_log_factor():
    assert thm1_bound(0.5, 1, 0.01, 100, static=True) == pytest.approx(0.15)


def test_thm1_quadratic_in_t():
    a = thm1_bound(0.3, 1, 0.04, 50)
    b = thm1_bound(0.3, 2, 0.04, 50)
    assert b / a == pytest.approx(4.0)


def test_thm1_monotone_in_each_argument():
    base = dict(theta=0.5, t=2, nu_bar=0.05, n=100)
    ref = thm1_bound(**base)
    assert thm1_bound(0.6, 2, 0.05, 100) >= ref
    assert thm1_bound(0.5, 3, 0.05, 100) >= ref
    assert thm1_bound(0.5, 2, 0.06, 100) >= ref
    assert thm1_bound(0.5, 2, 0.05, 200) >= ref


def test_thm2_l1_second_term_vanishes():
    v = thm2_bound(0.5, 10, 1, 100, 2, 0.01)
    first_only = 2 * 10**4 * 1.5 * 0.01 ** (1 / 8) * math.log(100) ** 1.5
    assert v == pytest.approx(first_only)


def test_thm2_nu_exponents():
    # L=1 -> nu^(1/8); L=2 -> nu^(1/32)
    for L, exp in ((1, 8), (2, 32)):
        a = thm2_bound(0.0, 1, L, 100, 1, 0.5)
        first = 0.5 ** (1 / exp) * math.log(100) ** 1.5
        second = (L - 1) * math.exp(-(0.5 ** (1 / 2 ** (2 * L - 1))) * 100)
        assert a == pytest.approx(first + second)


def test_thm2_pinned_regression_value():
    v = thm2_bound(0.5, 10, 2, 1000, 2, 1 / math.sqrt(1000))
    assert v == pytest.approx(488935.6111680985, rel=1e-12)


def test_thm2_monotonicity():
    lo = thm2_bound(0.5, 10, 2, 1000, 2, 0.001)
    hi = thm2_bound(0.5, 10, 2, 1000, 2, 0.01)
    assert hi >= lo  # first term nondecreasing in nu dominates here
    # second term nonincreasing in n
    s = lambda n: (2 - 1) * math.exp(-(0.01 ** (1 / 8)) * n)
    assert s(2000) <= s(1000)


def test_cor_third_term_value():
    v = cor_bound(0.5, 10, 1, 10**4, 1e-3)
    assert math.exp(-0.25 * math.sqrt(10**4)) == pytest.approx(1.3887943864964021e-11)
    assert v == pytest.approx(11.787277828000418, rel=1e-12)


def test_cor_l1_middle_term_vanishes():
    n, nu = 10**4, 1e-3
    v = cor_bound(0.0, 1, 1, n, nu)
    expected = nu ** (1 / 8) * math.log(n) ** 1.5 + math.exp(-0.25 * math.sqrt(n))
    assert v == pytest.approx(expected)


def test_cor_hypothesis_guard():
    n = 100
    bad = 1.5 / math.sqrt(n * math.log(n))
    with pytest.raises(ValueError):
        cor_bound(0.5, 10, 1, n, bad)


def test_chernoff_example_value():
    assert chernoff_tail(100, 0.3, 1.0) == pytest.approx(math.exp(-10))
    assert chernoff_tail(100, 0.0, 1.0) == 1.0


def test_chernoff_dominates_exact_tail_grid():
    for n in (10, 50, 100, 200):
        for p in (0.1, 0.3, 0.5):
            for eps in (0.5, 1.0, 2.0):
                assert binomial_tail_exact(n, p, eps) <= chernoff_tail(n, p, eps) + 1e-12


def test_chernoff_dominates_empirical_tail():
    rng = SeedSpec(0).rng(99)
    draws = rng.binomial(100, 0.3, 1_000_000)
    emp = float(np.count_nonzero(draws >= 60) / draws.size)
    assert emp <= chernoff_tail(100, 0.3, 1.0)


def test_dominance_example_and_near_equal():
    assert stochastic_dominance_check(10, 0.2, 0.5)
    assert stochastic_dominance_check(10, 0.5 - 1e-9, 0.5)


def test_dominance_rejects_swapped_arguments():
    with pytest.raises(ValueError):
        stochastic_dominance_check(10, 0.5, 0.2)


def test_dominance_random_triples():
    rng = np.random.default_rng(1)
    for _ in range(50):
        n = int(rng.integers(2, 200))
        p, q = np.sort(rng.uniform(0.01, 0.99, 2))
        if p == q:
            continue
        assert stochastic_dominance_check(n, float(p), float(q))


def test_dominance_with_empirical_cross_check():
    assert stochastic_dominance_check(50, 0.2, 0.6, n_samples=100_000, seed=SeedSpec(2).rng(0))


def test_lemma_a4_degenerate_rho_one():
    res = lemma_a4_check(1.0, 0.5, 0.5, 10_000, SeedSpec(3).rng(0))
    assert res.rhs == pytest.approx(0.0)
    assert res.lhs_estimates == (0.0, 0.0)
    assert res.holds_within_ci


def test_lemma_a4_example_point():
    res = lemma_a4_check(0.99, 0.5, 0.5, 1_000_000, SeedSpec(4).rng(0))
    assert res.rhs == pytest.approx(math.sqrt(1 - 0.9801) + 0.5 * 0.01 / 0.99)
    assert res.holds_within_ci


def test_lemma_a4_grid():
    i = 0
    for rho in (0.5, 0.9, 0.99):
        for a in (-1.0, 0.0, 1.0):
            for b in (-1.0, 0.0, 1.0):
                i += 1
                assert lemma_a4_check(rho, a, b, 100_000, SeedSpec(5).rng(i)).holds_within_ci


def test_bound_params_validation():
    with pytest.raises(ValueError):
        BoundParams(C=-1.0)
    with pytest.raises(ValueError):
        BoundParams(c=0.0)
