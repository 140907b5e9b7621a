"""Evaluation of L(1, chi_D) for positive discriminants by four strategies.

chi_D is the Kronecker symbol (D/.), which for non-fundamental D = d*f^2
vanishes at primes dividing f and agrees with chi_d elsewhere.  The four
strategies:

* ClassNumber   -- h(D) * ln(eps_D) / sqrt(D), exact in structure.
* LogSin        -- for fundamental D the finite character sum
                   -(1/sqrt(D)) * sum_{a<D} chi_D(a) * ln sin(pi a / D);
                   non-fundamental D multiply by prod_{p|f}(1 - chi_d(p)/p).
* SmoothedSeries-- sum_{l<=cutoff} chi_D(l)/l * exp(-l/scale).
* EulerTruncated-- prod_{p<=P} (1 - chi_D(p)/p)^(-1).

The smoothed-series accuracy is not certified analytically; cross_validate
establishes it empirically per (scale, D) regime.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import quadratic
from .arith import factorize, is_discriminant, kronecker, order_discriminant, primes_up_to

LOGSIN_MAX_D = 10**6  # quadratic cost guard


@dataclass(frozen=True)
class ClassNumber:
    pass


@dataclass(frozen=True)
class LogSin:
    pass


@dataclass(frozen=True)
class SmoothedSeries:
    smoothing_scale: float = 2000.0
    cutoff: int = 50_000

    def __post_init__(self) -> None:
        if not self.smoothing_scale > 0:
            raise ValueError("smoothing_scale must be positive")
        if self.cutoff < self.smoothing_scale:
            raise ValueError("cutoff must be >= smoothing_scale")


@dataclass(frozen=True)
class EulerTruncated:
    prime_bound: int = 1000

    def __post_init__(self) -> None:
        if self.prime_bound < 2:
            raise ValueError("prime_bound must be >= 2")


LStrategy = ClassNumber | LogSin | SmoothedSeries | EulerTruncated


def strategy_tag(strategy: LStrategy) -> str:
    if isinstance(strategy, ClassNumber):
        return "class-number"
    if isinstance(strategy, LogSin):
        return "log-sin"
    if isinstance(strategy, SmoothedSeries):
        return f"smoothed:{strategy.smoothing_scale:g}:{strategy.cutoff}"
    return f"euler:{strategy.prime_bound}"


def chi(D: int, n: int) -> int:
    """Quadratic character chi_D(n) = kronecker(D, n); D must be 0,1 mod 4."""
    if not is_discriminant(D):
        raise ValueError(f"{D} is not a discriminant")
    return kronecker(D, n)


# ---------------------------------------------------------------------------
# Vectorized character values
# ---------------------------------------------------------------------------


def _jacobi_vec(a: np.ndarray, m: np.ndarray) -> np.ndarray:
    """Jacobi symbols (a[i]/m[i]) for odd positive m, vectorized.

    Standard binary-reciprocity loop, breadth-first with the working set
    compacted to unfinished lanes; a lane finishes when its a reaches 0,
    giving sign for gcd 1 and 0 otherwise.
    """
    a = np.remainder(np.asarray(a, dtype=np.int64), m)
    m = np.asarray(m, dtype=np.int64)
    res = np.ones(a.shape, dtype=np.int8)
    res[(a == 0) & (m != 1)] = 0
    idx = np.flatnonzero((a != 0) & (m != 1))
    a = a[idx]
    m = m[idx]
    sign = np.ones(len(idx), dtype=np.int8)
    while len(idx):
        # strip all factors of two at once: the isolated low bit is an
        # exact power of two, so its log2 in float64 is exact
        low = a & -a
        tz = np.log2(low.astype(np.float64)).astype(np.int64)
        a >>= tz
        m8 = m & 7
        flip = ((tz & 1) == 1) & ((m8 == 3) | (m8 == 5))
        sign[flip] = -sign[flip]
        flip = ((a & 3) == 3) & ((m & 3) == 3)
        sign[flip] = -sign[flip]
        a, m = m % a, a
        done = a == 0
        if done.any():
            unit = m == 1
            res[idx[done & unit]] = sign[done & unit]
            res[idx[done & ~unit]] = 0
            keep = ~done
            idx, a, m, sign = idx[keep], a[keep], m[keep], sign[keep]
    return res


@dataclass
class _SieveTables:
    """Per-cutoff factor tables for completely multiplicative sieving.

    Factorizations are stored as gather chains: level0[n] is the prime
    index of n's first factor (a sentinel for n <= 1), and level k >= 1
    holds, compacted, the indices of n with more than k factors together
    with the prime index of the (k+1)-th factor.  A completely
    multiplicative function is then evaluated on 1..n_max with one gather
    per level, values at primes being the only inputs.
    """

    n_max: int
    primes: np.ndarray                 # int64, all primes <= n_max
    odd_primes: np.ndarray
    level0: np.ndarray                 # int32, first-factor prime index
    level_idx: list[np.ndarray]        # int64 n-indices, ascending
    level_fac: list[np.ndarray]        # int32 prime indices
    weights: dict = field(default_factory=dict)

    @classmethod
    def build(cls, n_max: int) -> "_SieveTables":
        spf = np.zeros(n_max + 1, dtype=np.int64)
        for p in range(2, math.isqrt(n_max) + 1):
            if spf[p] == 0:
                spf[p * p :: p][spf[p * p :: p] == 0] = p
        primes = np.array([p for p in range(2, n_max + 1) if spf[p] == 0], dtype=np.int64)
        spf[primes] = primes
        index_of = np.zeros(n_max + 1, dtype=np.int32)
        index_of[primes] = np.arange(len(primes), dtype=np.int32)
        flat: list[int] = []
        starts = np.zeros(n_max + 2, dtype=np.int64)
        for n in range(2, n_max + 1):
            starts[n] = len(flat)
            m = n
            while m > 1:
                p = spf[m]
                flat.append(index_of[p])
                m //= int(p)
        starts[n_max + 1] = len(flat)
        starts[1] = 0
        flat_arr = np.array(flat, dtype=np.int32)
        omega = starts[2 : n_max + 2] - starts[1 : n_max + 1]  # Omega(n), n=1..n_max
        sentinel = np.int32(len(primes))
        level0 = np.full(n_max + 1, sentinel, dtype=np.int32)
        has = np.flatnonzero(omega > 0) + 1
        level0[has] = flat_arr[starts[has]]
        level_idx: list[np.ndarray] = []
        level_fac: list[np.ndarray] = []
        k = 1
        while True:
            ns = np.flatnonzero(omega > k) + 1
            if len(ns) == 0:
                break
            level_idx.append(ns)
            level_fac.append(flat_arr[starts[ns] + k])
            k += 1
        return cls(
            n_max=n_max,
            primes=primes,
            odd_primes=primes[primes > 2],
            level0=level0,
            level_idx=level_idx,
            level_fac=level_fac,
        )

    def smoothing_weights(self, scale: float, cutoff: int) -> np.ndarray:
        key = (scale, cutoff)
        w = self.weights.get(key)
        if w is None:
            l = np.arange(1, cutoff + 1, dtype=np.float64)
            w = np.exp(-l / scale) / l
            self.weights[key] = w
        return w


_TABLE_CACHE: dict[int, _SieveTables] = {}


def _tables(n_max: int) -> _SieveTables:
    # Bucket sizes so repeated nearby requests share one table.
    size = 1 << max(11, (n_max - 1).bit_length())
    tab = _TABLE_CACHE.get(size)
    if tab is None:
        tab = _SieveTables.build(size)
        _TABLE_CACHE[size] = tab
    return tab


def chi_at_primes(D: int, tables: _SieveTables) -> np.ndarray:
    """chi_D at every prime of the table, int8."""
    vals = np.zeros(len(tables.primes), dtype=np.int8)
    odd = tables.primes > 2
    vals[odd] = _jacobi_vec(np.remainder(D, tables.primes[odd]), tables.primes[odd])
    if len(tables.primes) and tables.primes[0] == 2:
        if D % 2:
            vals[0] = 1 if D % 8 in (1, 7) else -1
    return vals


def chi_array(D: int, n_max: int) -> np.ndarray:
    """chi_D(n) for n = 0..n_max as an int8 array (index 0 is 0).

    Complete multiplicativity: the value at n is the product of values at
    its prime factors, taken with multiplicity via the gather chain; zeros
    at primes dividing D propagate through the products.
    """
    if not is_discriminant(D):
        raise ValueError(f"{D} is not a discriminant")
    tables = _tables(n_max)
    pvals = chi_at_primes(D, tables)
    chip = np.empty(len(pvals) + 1, dtype=np.int8)
    chip[:-1] = pvals
    chip[-1] = 1  # sentinel: empty factor slots multiply by 1
    out = chip[tables.level0[: n_max + 1]]
    for ns, fac in zip(tables.level_idx, tables.level_fac):
        cut = np.searchsorted(ns, n_max, side="right")
        if cut == 0:
            break
        out[ns[:cut]] *= chip[fac[:cut]]
    out[0] = 0
    return out


# ---------------------------------------------------------------------------
# Strategies
# ---------------------------------------------------------------------------


def _conductor_correction(d: int, f: int) -> float:
    corr = 1.0
    if f > 1:
        for p, _ in factorize(f).factors:
            corr *= 1.0 - kronecker(d, p) / p
    return corr


def _l_logsin(D: int) -> float:
    if D > LOGSIN_MAX_D:
        raise ValueError(f"LogSin refuses D > {LOGSIN_MAX_D} (quadratic cost)")
    od = order_discriminant(D)
    d = od.d
    vals = chi_array(d, d - 1)[1:].astype(np.float64)
    a = np.arange(1, d, dtype=np.float64)
    fundamental = -float(np.dot(vals, np.log(np.sin(math.pi * a / d)))) / math.sqrt(d)
    return fundamental * _conductor_correction(d, od.f)


def _l_smoothed(D: int, scale: float, cutoff: int) -> float:
    tables = _tables(cutoff)
    vals = chi_array(D, cutoff)[1:].astype(np.float64)
    w = tables.smoothing_weights(scale, cutoff)
    return float(np.dot(vals, w[: len(vals)]))


def _l_euler(D: int, prime_bound: int) -> float:
    primes = np.array(primes_up_to(prime_bound), dtype=np.int64)
    if len(primes) == 0:
        return 1.0
    odd = primes > 2
    vals = np.zeros(len(primes), dtype=np.float64)
    vals[odd] = _jacobi_vec(np.remainder(D, primes[odd]), primes[odd])
    if primes[0] == 2 and D % 2:
        vals[0] = 1 if D % 8 in (1, 7) else -1
    return float(np.prod(1.0 / (1.0 - vals / primes)))


def l_one(D: int, strategy: LStrategy) -> float:
    """L(1, chi_D) for a positive non-square discriminant D."""
    if D <= 0:
        raise ValueError("D must be positive")
    if not is_discriminant(D):
        raise ValueError(f"{D} is not a discriminant")
    if math.isqrt(D) ** 2 == D:
        raise ValueError(f"{D} is a perfect square")
    if isinstance(strategy, ClassNumber):
        return quadratic.class_number_L(D)
    if isinstance(strategy, LogSin):
        return _l_logsin(D)
    if isinstance(strategy, SmoothedSeries):
        return _l_smoothed(D, strategy.smoothing_scale, strategy.cutoff)
    if isinstance(strategy, EulerTruncated):
        return _l_euler(D, strategy.prime_bound)
    raise TypeError(f"unknown strategy {strategy!r}")


# ---------------------------------------------------------------------------
# Cross-validation
# ---------------------------------------------------------------------------


@dataclass
class CrossValidation:
    """Max pairwise deviations of L-strategies over discriminants <= d_max."""

    d_max: int
    discriminants: list[int]
    strategies: list[LStrategy]
    max_deviation: dict[tuple[str, str], float]
    argmax_D: dict[tuple[str, str], int]
    flagged: list[tuple[str, str, float, float]]

    def deviation(self, s1: LStrategy | str, s2: LStrategy | str) -> float:
        k1 = s1 if isinstance(s1, str) else strategy_tag(s1)
        k2 = s2 if isinstance(s2, str) else strategy_tag(s2)
        if (k1, k2) in self.max_deviation:
            return self.max_deviation[(k1, k2)]
        return self.max_deviation[(k2, k1)]


def valid_discriminants(d_max: int) -> list[int]:
    """Positive non-square discriminants <= d_max."""
    out = []
    for D in range(5, d_max + 1):
        if D % 4 in (0, 1) and math.isqrt(D) ** 2 != D:
            out.append(D)
    return out


def cross_validate(
    d_max: int,
    strategies: tuple[LStrategy, ...] = (
        ClassNumber(),
        LogSin(),
        SmoothedSeries(),
        EulerTruncated(10**4),
    ),
    tolerances: dict[tuple[str, str], float] | None = None,
) -> CrossValidation:
    """Evaluate every strategy on every valid D <= d_max, tabulate pairwise
    sup deviations, and flag pairs exceeding their configured tolerance."""
    if any(isinstance(s, LogSin) for s in strategies) and d_max > 10**4:
        raise ValueError("cross_validate caps d_max at 1e4 when LogSin participates")
    ds = valid_discriminants(d_max)
    values = {strategy_tag(s): [l_one(D, s) for D in ds] for s in strategies}
    tags = [strategy_tag(s) for s in strategies]
    max_dev: dict[tuple[str, str], float] = {}
    argmax: dict[tuple[str, str], int] = {}
    flagged = []
    for i, t1 in enumerate(tags):
        for t2 in tags[i + 1 :]:
            devs = [abs(a - b) for a, b in zip(values[t1], values[t2])]
            if devs:
                k = int(np.argmax(devs))
                max_dev[(t1, t2)] = devs[k]
                argmax[(t1, t2)] = ds[k]
            else:
                max_dev[(t1, t2)] = 0.0
                argmax[(t1, t2)] = 0
            if tolerances and (t1, t2) in tolerances and max_dev[(t1, t2)] > tolerances[(t1, t2)]:
                flagged.append((t1, t2, max_dev[(t1, t2)], tolerances[(t1, t2)]))
    return CrossValidation(d_max, ds, list(strategies), max_dev, argmax, flagged)
