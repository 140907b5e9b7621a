"""Euler-product mean squares, empirical sweeps, and Parseval partial sums.

The limiting mean square of the weighted multiplicity is an Euler product
prod_p M_p over the local factors M_p = 1 + sum_c A(p^c).  Away from the
context primes M_p is the base factor

    M_2 = 1015/864,
    M_p = p^2 (p^3 + p^2 - p - 3) / ((p^2-1)^2 (p+1))     (odd p),

and the context replaces finitely many factors, equivalently multiplies
the base constant by

    level q   : 2 (q^2 - q - 1) (q + 1)^2 / (q (q^3 + q^2 - q - 3))
    ramified p: 2 (p^3 - 1) (p - 1) / (p (p^3 + p^2 - p - 3)).

The truncated product over p <= P carries a certified tail bound from
|log M_p| <= 4/p^2 (p >= 5) integrated against pi(x) < 1.25506 x / ln x.
"""

from __future__ import annotations

import csv
import math
import multiprocessing
import os
import time
from dataclasses import dataclass, field
from fractions import Fraction

from . import fourier
from .arith import divisors, factorize, primes_up_to
from .lfunctions import LStrategy, SmoothedSeries, strategy_tag
from .multiplicity import Congruence, GroupContext, Quaternion, beta

_PI_UPPER = 1.25506  # pi(x) < _PI_UPPER * x / ln x for x > 1
# |log M_p| <= 4/p^2 for generic p >= 5; only generic factors can lie
# beyond the prime bound, since it must cover the context primes.
_LOG_MP_CONSTANT = 4.0


class ToleranceError(RuntimeError):
    """Requested tolerance is unattainable at the given prime bound."""


@dataclass(frozen=True)
class EulerProductResult:
    value: float
    prime_bound: int
    tail_bound: float
    per_prime_factors: tuple[tuple[int, float], ...] | None = None


@dataclass(frozen=True)
class Checkpoint:
    n: int
    mean: float
    mean_square: float
    wall_seconds: float


@dataclass
class EmpiricalSeries:
    context_tag: str
    strategy_tag: str
    checkpoints: list[Checkpoint] = field(default_factory=list)
    truncated: bool = False

    @property
    def final(self) -> Checkpoint:
        return self.checkpoints[-1]


def _log_tail_bound(prime_bound: int) -> float:
    """Upper bound on sum_{p > prime_bound} |log M_p| (generic factors).

    The generic rational form gives |log M_p| < 1/(p^2 - 2) <= 4/p^2 for
    p >= 5.  Primes in (P, S] are summed exactly against a sieve with
    S = max(2e6, P); beyond S, partial summation with
    pi(x) < 1.25506 x / ln x yields sum_{p > S} 1/p^2 <= 2 * 1.25506 /
    (S ln S).
    """
    P = prime_bound
    S = max(2_000_000, P)
    exact = 0.0
    if S > P:
        ps = primes_up_to(S)
        exact = sum(_LOG_MP_CONSTANT / (p * p) for p in ps if p > P)
    analytic = _LOG_MP_CONSTANT * 2.0 * _PI_UPPER / (S * math.log(S))
    return exact + analytic


def c1(prime_bound: int = 100_000, tol: float = 1e-3, keep_factors: bool = False) -> EulerProductResult:
    """The base mean-square constant: (1015/864) * prod_{odd p <= P} M_p.

    The reported tail bound covers the dropped factors; a tolerance that
    the bound cannot meet raises ToleranceError.
    """
    if prime_bound < 1000:
        raise ValueError("prime_bound must be >= 1000")
    return kappa(Congruence(1), prime_bound, tol, keep_factors)


def kappa(
    ctx: GroupContext,
    prime_bound: int = 100_000,
    tol: float = 1e-3,
    keep_factors: bool = False,
) -> EulerProductResult:
    """Truncated Euler product for the limiting mean square of beta.

    Two algebraically identical paths are evaluated: the base product times
    the finite correction factors of the context, and the direct product of
    per-prime local Euler factors.  They must agree to 1e-9; the first is
    returned.
    """
    if ctx.primes and max(ctx.primes) > prime_bound:
        raise ValueError("prime_bound must cover the context primes")
    value = 1015.0 / 864.0
    factors: list[tuple[int, float]] = [(2, 1015.0 / 864.0)]
    direct = 1.0
    for p in primes_up_to(prime_bound):
        mp = fourier.local_euler_factor(p, ctx)
        direct *= mp
        if p > 2:
            fp = float(p)
            value *= fp * fp * (fp**3 + fp * fp - fp - 3.0) / ((fp * fp - 1.0) ** 2 * (fp + 1.0))
            if keep_factors:
                factors.append((p, mp))
    for q in ctx.primes:
        value *= float(_correction_fraction(q, ctx))
    if abs(value - direct) > 1e-9 * max(1.0, abs(value)):
        raise AssertionError(
            f"kappa paths disagree: correction product {value} vs M_p product {direct}"
        )
    log_tail = _log_tail_bound(prime_bound)
    tail_bound = value * math.expm1(log_tail)
    if tail_bound > tol:
        raise ToleranceError(
            f"tail bound {tail_bound:.3g} exceeds tol {tol:.3g} at prime_bound {prime_bound}"
        )
    return EulerProductResult(
        value=value,
        prime_bound=prime_bound,
        tail_bound=tail_bound,
        per_prime_factors=tuple(factors) if keep_factors else None,
    )


def _correction_fraction(q: int, ctx: GroupContext) -> Fraction:
    if isinstance(ctx, Congruence):
        return Fraction(2 * (q * q - q - 1) * (q + 1) ** 2, q * (q**3 + q * q - q - 3))
    return Fraction(2 * (q**3 - 1) * (q - 1), q * (q**3 + q * q - q - 3))


# ---------------------------------------------------------------------------
# Empirical sweeps
# ---------------------------------------------------------------------------

_WORKER_STATE: dict = {}


def _init_worker(ctx: GroupContext, strategy: LStrategy) -> None:
    _WORKER_STATE["ctx"] = ctx
    _WORKER_STATE["strategy"] = strategy


def _window_sums(window: tuple[int, int]) -> tuple[int, int, float, float]:
    lo, hi = window
    ctx = _WORKER_STATE["ctx"]
    strategy = _WORKER_STATE["strategy"]
    s = s2 = 0.0
    for t in range(lo, hi):
        v = beta(t, ctx, strategy)
        s += v
        s2 += v * v
    return lo, hi, s, s2


def empirical(
    ctx: GroupContext,
    n_max: int,
    checkpoint_stride: int = 1000,
    strategy: LStrategy | None = None,
    workers: int = 1,
    reproducible: bool = True,
    csv_path: str | None = None,
    resume: str | None = None,
    budget_seconds: float | None = None,
) -> EmpiricalSeries:
    """Running averages of beta and beta^2 over 2 < t <= N at checkpoints.

    Traces with no group element contribute exactly zero, diluting the
    averages as the limit formulas require.  Work is partitioned into
    stride-aligned windows; partial sums are combined in ascending window
    order, so results are bit-identical for any worker count.  A time
    budget stops the sweep at the last complete checkpoint and flags the
    series as truncated.
    """
    if strategy is None:
        strategy = SmoothedSeries()
    if n_max < 3:
        raise ValueError("n_max must be >= 3")
    series = EmpiricalSeries(context_tag=ctx.tag, strategy_tag=strategy_tag(strategy))
    start_t = 3
    sum_b = sum_b2 = 0.0
    if resume is not None and os.path.exists(resume):
        prior = _read_checkpoints(resume, ctx.tag, strategy_tag(strategy))
        if prior:
            series.checkpoints.extend(prior)
            last = prior[-1]
            start_t = last.n + 1
            sum_b = last.mean * last.n
            sum_b2 = last.mean_square * last.n
    # Windows end exactly at checkpoint traces: multiples of the stride,
    # plus n_max itself.
    windows = []
    lo = start_t
    while lo <= n_max:
        n_end = min(((lo + checkpoint_stride - 1) // checkpoint_stride) * checkpoint_stride, n_max)
        windows.append((lo, n_end + 1))
        lo = n_end + 1
    t0 = time.monotonic()
    out_path = csv_path or resume
    writer = _CheckpointWriter(out_path, ctx.tag, strategy_tag(strategy)) if out_path else None
    try:
        for _lo, hi, s, s2 in _map_windows(windows, ctx, strategy, workers, reproducible):
            sum_b += s
            sum_b2 += s2
            n = hi - 1
            cp = Checkpoint(n, sum_b / n, sum_b2 / n, time.monotonic() - t0)
            series.checkpoints.append(cp)
            if writer:
                writer.write(cp)
            if budget_seconds is not None and time.monotonic() - t0 > budget_seconds and n < n_max:
                series.truncated = True
                break
    finally:
        if writer:
            writer.close()
    return series


def _map_windows(windows, ctx, strategy, workers, reproducible):
    """Yield per-window sums in ascending window order."""
    if workers <= 1 or len(windows) <= 1:
        _init_worker(ctx, strategy)
        for w in windows:
            yield _window_sums(w)
        return
    mp_ctx = multiprocessing.get_context("fork")
    with mp_ctx.Pool(workers, initializer=_init_worker, initargs=(ctx, strategy)) as pool:
        # imap preserves submission order: deterministic reduction for free.
        yield from pool.imap(_window_sums, windows, chunksize=1)


class _CheckpointWriter:
    """Append-only checkpoint CSV so interrupted sweeps can resume."""

    COLUMNS = ["N", "mean", "mean_square", "strategy_tag", "context_tag", "wall_seconds"]

    def __init__(self, path: str, context_tag: str, strategy_tag_: str) -> None:
        self.context_tag = context_tag
        self.strategy_tag = strategy_tag_
        fresh = not os.path.exists(path) or os.path.getsize(path) == 0
        self._fh = open(path, "a", newline="")
        self._writer = csv.writer(self._fh)
        if fresh:
            self._writer.writerow(self.COLUMNS)
            self._fh.flush()

    def write(self, cp: Checkpoint) -> None:
        self._writer.writerow(
            [cp.n, repr(cp.mean), repr(cp.mean_square), self.strategy_tag, self.context_tag, f"{cp.wall_seconds:.3f}"]
        )
        self._fh.flush()

    def close(self) -> None:
        self._fh.close()


def _read_checkpoints(path: str, context_tag: str, strategy_tag_: str) -> list[Checkpoint]:
    out = []
    with open(path, newline="") as fh:
        for row in csv.DictReader(fh):
            if row["context_tag"] != context_tag or row["strategy_tag"] != strategy_tag_:
                raise ValueError(
                    f"resume file {path} holds {row['context_tag']}/{row['strategy_tag']}, "
                    f"not {context_tag}/{strategy_tag_}"
                )
            out.append(
                Checkpoint(int(row["N"]), float(row["mean"]), float(row["mean_square"]), float(row["wall_seconds"]))
            )
    return out


# ---------------------------------------------------------------------------
# Parseval partial sums
# ---------------------------------------------------------------------------


def parseval_partial(ctx: GroupContext, denominator_bound: int, tol: float = 1e-12) -> float:
    """sum over reduced phases a/b with b <= bound of |beta-hat(a/b)|^2.

    The inner sum over a factors through the CRT as a product of per-prime
    A-values; those are evaluated on the numeric DFT path, so this is an
    independent check against the closed Euler factors.  Monotone
    nondecreasing in the bound and bounded by kappa.
    """
    if denominator_bound > 10**4:
        raise ValueError("denominator_bound capped at 1e4")
    total = 0.0
    for b in range(1, denominator_bound + 1):
        total += _phase_mass(b, ctx, tol)
    return total


def _phase_mass(b: int, ctx: GroupContext, tol: float) -> float:
    mass = 1.0
    for p, e in factorize(b).factors:
        mass *= fourier._a_numeric(p, e, _flavor_key(p, ctx), tol)
        if mass == 0.0:
            return 0.0
    return mass


def _flavor_key(p: int, ctx: GroupContext):
    from .multiplicity import flavor_of

    return flavor_of(p, ctx)


def seminorm_estimate(
    ctx: GroupContext,
    P: int,
    s: int,
    n_max: int,
    strategy: LStrategy | None = None,
) -> float:
    """Finite-N truncation seminorm diagnostic; see multiplicity module."""
    from .multiplicity import seminorm_estimate as _impl

    return _impl(ctx, P, s, n_max, strategy)
