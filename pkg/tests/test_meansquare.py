"""Euler products, Parseval mass, and empirical sweeps."""

import math
import os

import pytest

from geodmult.lfunctions import SmoothedSeries
from geodmult.meansquare import (
    ToleranceError,
    _log_tail_bound,
    c1,
    empirical,
    kappa,
    parseval_partial,
)
from geodmult.multiplicity import Congruence, Quaternion, beta, trace_exists


class TestC1:
    def test_value_and_tail(self):
        res = c1(100_000, tol=1e-3)
        assert res.value == pytest.approx(1.328, abs=1e-3)
        assert res.tail_bound < 1e-5

    def test_two_factor_alone(self):
        res = c1(100_000, tol=1e-3, keep_factors=True)
        assert res.per_prime_factors[0] == (2, 1015 / 864)

    def test_tail_consistency(self):
        lo = c1(10_000, tol=1e-3)
        hi = c1(100_000, tol=1e-3)
        assert abs(hi.value - lo.value) < lo.tail_bound

    def test_unattainable_tolerance(self):
        with pytest.raises(ToleranceError):
            c1(1000, tol=1e-12)

    def test_rejects_small_bound(self):
        with pytest.raises(ValueError):
            c1(100)

    def test_tail_bound_dominates_truth(self):
        # the analytic bound must exceed the actually observed tail
        observed = abs(c1(500_000, tol=1e-2).value - c1(20_000, tol=1e-2).value)
        assert observed < _log_tail_bound(20_000) * 1.33

    def test_log_mp_constant_holds(self):
        """|log M_p| <= 4/p^2 for generic p >= 5, via the exact rational
        form and log(M) <= M - 1 for M >= 1."""
        from fractions import Fraction

        from geodmult.arith import primes_up_to
        from geodmult.fourier import _euler_factor_fraction
        from geodmult.multiplicity import LocalFlavor

        for p in primes_up_to(10_000):
            if p < 5:
                continue
            m = _euler_factor_fraction(p, LocalFlavor.GENERIC)
            assert m >= 1
            assert m - 1 <= Fraction(4, p * p), p


class TestKappa:
    def test_level_one_is_c1(self):
        assert kappa(Congruence(1), 50_000).value == c1(50_000).value

    def test_level_three_correction(self):
        base = c1(50_000).value
        assert kappa(Congruence(3), 50_000).value == pytest.approx(base * 16 / 9, rel=1e-12)

    def test_quaternion_15(self):
        base = c1(50_000).value
        expected = base * (52 / 45) * (496 / 355)
        got = kappa(Quaternion(15), 50_000).value
        assert got == pytest.approx(expected, rel=1e-12)
        assert got == pytest.approx(2.1447, abs=2e-3)

    def test_larger_contexts_consistent(self):
        # the two internal paths assert agreement at 1e-9 themselves
        for ctx in (Congruence(15), Congruence(21), Congruence(105), Quaternion(21), Quaternion(35)):
            res = kappa(ctx, 20_000, tol=1e-2)
            assert res.value > 1.0

    def test_prime_bound_must_cover_context(self):
        with pytest.raises(ValueError):
            kappa(Congruence(104729), 1000)


class TestParseval:
    def test_bound_one(self):
        assert parseval_partial(Congruence(1), 1) == pytest.approx(1.0, abs=1e-12)

    def test_bound_three_level(self):
        # 1 (b=1) + 1/9 (b=2, the 2-adic mass) + 2*(1/4) (b=3)
        got = parseval_partial(Congruence(3), 3)
        assert got == pytest.approx(1 + 1 / 9 + 0.5, abs=1e-9)

    def test_monotone_and_bounded(self):
        for ctx in (Congruence(1), Congruence(3)):
            k = kappa(ctx, 50_000).value
            prev = 0.0
            for bound in (1, 3, 10, 30, 100, 300):
                cur = parseval_partial(ctx, bound)
                assert cur >= prev - 1e-15
                assert cur <= k + 1e-6
                prev = cur

    def test_approaches_kappa(self):
        k = kappa(Congruence(3), 50_000).value
        assert parseval_partial(Congruence(3), 400) > 0.98 * k

    def test_bound_cap(self):
        with pytest.raises(ValueError):
            parseval_partial(Congruence(1), 20_000)


SMALL = SmoothedSeries(500.0, 4000)


class TestEmpirical:
    def test_zero_contributions(self):
        series = empirical(Congruence(3), 300, 100, strategy=SMALL)
        # non-existing traces contribute exactly zero: recompute the mean
        total = sum(
            beta(t, Congruence(3), SMALL) if trace_exists(t, 3) else 0.0
            for t in range(3, 301)
        )
        assert series.final.mean == pytest.approx(total / 300, rel=1e-12)

    def test_checkpoint_structure(self):
        series = empirical(Congruence(1), 450, 100, strategy=SMALL)
        assert [c.n for c in series.checkpoints] == [100, 200, 300, 400, 450]
        ns = [c.n for c in series.checkpoints]
        assert ns == sorted(ns)

    def test_deterministic_across_workers(self):
        a = empirical(Congruence(1), 400, 50, strategy=SMALL, workers=1)
        b = empirical(Congruence(1), 400, 50, strategy=SMALL, workers=3)
        assert [(c.n, c.mean, c.mean_square) for c in a.checkpoints] == [
            (c.n, c.mean, c.mean_square) for c in b.checkpoints
        ]

    def test_mean_near_one_small(self):
        series = empirical(Congruence(1), 1000, 1000, strategy=SMALL)
        assert abs(series.final.mean - 1.0) < 0.15

    def test_csv_roundtrip_and_resume(self, tmp_path):
        path = str(tmp_path / "sweep.csv")
        full = empirical(Congruence(1), 600, 100, strategy=SMALL)
        part = empirical(Congruence(1), 300, 100, strategy=SMALL, csv_path=path)
        resumed = empirical(Congruence(1), 600, 100, strategy=SMALL, resume=path)
        assert resumed.checkpoints[-1].mean == full.checkpoints[-1].mean
        assert resumed.checkpoints[-1].mean_square == full.checkpoints[-1].mean_square
        with open(path) as fh:
            header = fh.readline().strip()
        assert header == "N,mean,mean_square,strategy_tag,context_tag,wall_seconds"

    def test_resume_rejects_mismatched_context(self, tmp_path):
        path = str(tmp_path / "sweep.csv")
        empirical(Congruence(1), 200, 100, strategy=SMALL, csv_path=path)
        with pytest.raises(ValueError, match="resume"):
            empirical(Congruence(3), 400, 100, strategy=SMALL, resume=path)

    def test_budget_flag(self):
        series = empirical(Congruence(1), 5000, 100, strategy=SMALL, budget_seconds=0.0)
        assert series.truncated
        assert series.checkpoints  # at least the first window completed
