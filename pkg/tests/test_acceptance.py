"""Acceptance gate: every criterion at its stated tolerance.

One test per criterion; each prints its PASS/FAIL lines.  The empirical
mean-square band is the single soft criterion (no proven convergence rate)
and downgrades to a warning instead of failing the run.
"""

import os
import warnings

import pytest

from geodmult import verification as V


def _run(results):
    hard_failures = []
    for r in results:
        print(r.line())
        if not r.passed and r.warning:
            warnings.warn(f"soft criterion missed: {r.line()}", stacklevel=2)
        elif not r.passed:
            hard_failures.append(r)
    assert not hard_failures, "; ".join(r.line() for r in hard_failures)


def test_criterion_01_base_constant():
    """kappa at level 1, prime bound 1e5: 1.328 within 1e-3, tail < 1e-5,
    under 5 s."""
    _run(V.check_c1(100_000))


def test_criterion_02_two_adic_factor():
    """Closed p = 2 factor is exactly 1015/864 and recomposes from the
    a-value table (zero entries included); the numeric DFT path matches
    each a-value within 1e-9."""
    _run(V.check_two_adic())


def test_criterion_03_local_euler_factors():
    """M_3 = 135/128, 15/8, 39/32 per flavor; term sums with exact
    geometric tails match to 1e-12, likewise for p in {5, 7, 11}."""
    _run(V.check_euler_factors())


def test_criterion_04_fourier_tables():
    """For q in {3,5,7}, both sides, all table rows and all reduced a:
    closed-vs-DFT within 1e-10, assembled-vs-series within 1e-9, local
    means equal to 1 within 1e-9."""
    _run(V.check_fourier_tables())


def test_criterion_05_gauss_and_char_sums():
    """gauss_sum(q) = eps_q sqrt(q) within 1e-12 for odd q < 100;
    char_sum(q, 0) = -1 exactly."""
    _run(V.check_gauss_sums())


def test_criterion_06_beta_oracle_equivalence():
    """L-path vs class-count path within 1e-8 (t <= 200, Q in {1,3,5,15});
    vanishing iff no trace exists (t <= 1e3); hand-assembled quaternion
    values at d_B = 15."""
    _run(V.check_beta_oracle())


def test_criterion_07_factorization_lemma():
    """Divisor-sum and product forms of the truncated multiplicity agree
    within 1e-10 for n <= 500, P in {7, 11, 13}, four contexts."""
    _run(V.check_factorization())


def test_criterion_08_parseval_monotonicity():
    """Partial Fourier mass nondecreasing in the denominator bound and at
    most kappa + 1e-6 up to bound 1e3 for levels 1 and 3."""
    _run(V.check_parseval(1000))


def test_criterion_09_l_strategy_cross_validation():
    """ClassNumber vs LogSin within 1e-8 for fundamental D <= 1e4;
    SmoothedSeries(2e3, 5e4) within 1e-2 of exact for D <= 1e4."""
    _run(V.check_lvalues())


def test_criterion_10_empirical_sweep():
    """N = 1e5 sweep at level 1: mean in [0.95, 1.05] (hard), mean square
    within 15% of 1.328 (soft warning), runtime within the worker-scaled
    budget."""
    workers = os.cpu_count() or 1
    _run(V.check_empirical(n_max=100_000, workers=workers))
