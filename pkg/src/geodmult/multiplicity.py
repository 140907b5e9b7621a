"""Weighted multiplicities of integer traces and their local factors.

For a trace t > 2 write t^2 - 4 = d*l^2 with d fundamental.  The weighted
multiplicity attached to a group context is

    beta(t) = sum_{f | l} (f/l) * L(1, chi_{d f^2}) * prod_p w_p(d f^2),

where the product runs over the context's primes (the level's prime
divisors, or the ramified primes of the quaternion algebra) with

    level    w_q(D) = 2 if q^2 | D else 1 + (D/q),
    ramified w_p(D) = 0 if p^2 | D else 1 - (D/p).

An equivalent conjugacy-class form sums narrow class numbers against
regulators and needs no L-series; the two disjoint code paths cross-check
each other.

The truncated version beta_truncated replaces each L-value by a partial
Euler product and factors as a product of local terms beta_p(n), each a
finite b-sum of indicator-weighted character factors.  Both the divisor-sum
and product forms are computed in exact rational arithmetic per prime.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from . import lfunctions, quadratic
from .arith import (
    OrderDiscriminant,
    divisors,
    factorize,
    fundamental_split_of_trace,
    kronecker,
    primes_up_to,
)
from .lfunctions import LStrategy, SmoothedSeries, chi_array, l_one


class LocalFlavor(enum.Enum):
    """How a prime interacts with the group context."""

    GENERIC = "generic"      # odd p away from the level / discriminant
    TWO = "two"              # p = 2 (levels and discriminants are odd)
    LEVEL = "level"          # q dividing the congruence level
    RAMIFIED = "ramified"    # p dividing the quaternion discriminant


@lru_cache(maxsize=256)
def _checked_level(Q: int) -> tuple[int, ...]:
    if Q < 1:
        raise ValueError("level must be a positive integer")
    fact = factorize(Q)
    if Q % 2 == 0 or not fact.is_squarefree():
        raise ValueError(f"level must be odd and squarefree, got {Q}")
    return fact.primes


@dataclass(frozen=True)
class Congruence:
    """Hecke congruence context of odd squarefree level Q."""

    level: int

    def __post_init__(self) -> None:
        _checked_level(self.level)

    @property
    def primes(self) -> tuple[int, ...]:
        return _checked_level(self.level)

    @property
    def tag(self) -> str:
        return f"congruence:{self.level}"


@dataclass(frozen=True)
class Quaternion:
    """Maximal-order context for an indefinite rational quaternion algebra.

    The reduced discriminant must be odd, squarefree, and a product of an
    even number >= 2 of primes (indefinite division algebra).  Even
    discriminants are refused: the 2-adic local analysis is not covered.
    """

    discriminant: int

    def __post_init__(self) -> None:
        fact = factorize(self.discriminant)
        if self.discriminant % 2 == 0:
            raise ValueError(
                f"even quaternion discriminant {self.discriminant} is unsupported; "
                "the ramified local factors are defined for odd primes only"
            )
        if not fact.is_squarefree() or len(fact.primes) % 2 or len(fact.primes) < 2:
            raise ValueError(
                "quaternion discriminant must be squarefree with an even number "
                f">= 2 of prime factors, got {self.discriminant}"
            )

    @property
    def primes(self) -> tuple[int, ...]:
        return factorize(self.discriminant).primes

    @property
    def tag(self) -> str:
        return f"quaternion:{self.discriminant}"


GroupContext = Congruence | Quaternion


def flavor_of(p: int, ctx: GroupContext) -> LocalFlavor:
    if p == 2:
        return LocalFlavor.TWO
    if p in ctx.primes:
        return LocalFlavor.LEVEL if isinstance(ctx, Congruence) else LocalFlavor.RAMIFIED
    return LocalFlavor.GENERIC


def trace_exists(t: int, Q: int) -> bool:
    """Whether some level-Q element has trace t: every q | Q must satisfy
    q | l or (d/q) != -1, where t^2 - 4 = d*l^2."""
    primes = _checked_level(Q)
    if t < 3:
        raise ValueError("t must be >= 3")
    split = fundamental_split_of_trace(t)
    for q in primes:
        if split.l % q and kronecker(split.d, q) == -1:
            return False
    return True


def local_weight(D: int, p: int, flavor: LocalFlavor) -> int:
    """Level: 2 if p^2 | D else 1 + (D/p).  Ramified: 0 if p^2 | D else
    1 - (D/p)."""
    if flavor is LocalFlavor.LEVEL:
        return 2 if D % (p * p) == 0 else 1 + kronecker(D, p)
    if flavor is LocalFlavor.RAMIFIED:
        return 0 if D % (p * p) == 0 else 1 - kronecker(D, p)
    raise ValueError(f"local_weight applies to level/ramified primes, not {flavor}")


def _weight_product(D: int, ctx: GroupContext) -> int:
    w = 1
    flavor = LocalFlavor.LEVEL if isinstance(ctx, Congruence) else LocalFlavor.RAMIFIED
    for p in ctx.primes:
        w *= local_weight(D, p, flavor)
        if w == 0:
            return 0
    return w


def beta(t: int, ctx: GroupContext, strategy: LStrategy) -> float:
    """Weighted multiplicity of trace t for the context.

    Dead terms (vanishing weight product) are skipped before any L-value is
    evaluated; a smoothed-series strategy shares one character sieve across
    all conductors f | l.
    """
    if t <= 2:
        raise ValueError("t must be >= 3")
    split = fundamental_split_of_trace(t)
    d, l = split.d, split.l
    terms: list[tuple[int, int]] = []  # (f, weight)
    for f in divisors(l):
        w = _weight_product(d * f * f, ctx)
        if w:
            terms.append((f, w))
    if not terms:
        return 0.0
    if isinstance(strategy, SmoothedSeries):
        return _beta_smoothed(d, l, terms, strategy)
    total = 0.0
    for f, w in terms:
        total += (f / l) * w * l_one(d * f * f, strategy)
    return total


def _beta_smoothed(d: int, l: int, terms: list[tuple[int, int]], strategy: SmoothedSeries) -> float:
    """One chi_d sieve serves every conductor: chi_{d f^2} = chi_d away from
    f and 0 on multiples of its primes."""
    cutoff = strategy.cutoff
    tables = lfunctions._tables(cutoff)
    base = chi_array(d, cutoff)[1:].astype(np.float64)
    w = tables.smoothing_weights(strategy.smoothing_scale, cutoff)
    total = 0.0
    for f, weight in terms:
        if f == 1:
            val = float(np.dot(base, w))
        else:
            masked = base.copy()
            for p, _ in factorize(f).factors:
                masked[p - 1 :: p] = 0.0
            val = float(np.dot(masked, w))
        total += (f / l) * weight * val
    return total


def conjugacy_class_count(t: int, Q: int, f: int) -> int:
    """Number of level-Q classes of trace-t elements whose associated order
    has conductor f: h(d f^2) * prod_{p|Q} (2 if p | f else 1 + (d/p))."""
    primes = _checked_level(Q)
    if t < 3:
        raise ValueError("t must be >= 3")
    split = fundamental_split_of_trace(t)
    if split.l % f:
        raise ValueError(f"f={f} does not divide l={split.l} for t={t}")
    count = quadratic.narrow_class_number(split.d * f * f)
    for p in primes:
        count *= 2 if f % p == 0 else 1 + kronecker(split.d, p)
        if count == 0:
            return 0
    return count


def beta_classcount(t: int, Q: int) -> float:
    """Independent oracle path for beta over a congruence context: class
    counts against regulators, no L-series evaluation."""
    _checked_level(Q)
    if t <= 2:
        raise ValueError("t must be >= 3")
    split = fundamental_split_of_trace(t)
    root = math.sqrt(t * t - 4.0)
    total = 0.0
    for f in divisors(split.l):
        count = conjugacy_class_count(t, Q, f)
        if count:
            reg = quadratic.regulator(OrderDiscriminant(split.d, f, split.d * f * f))
            total += count * reg.log_epsilon / root
    return total


# ---------------------------------------------------------------------------
# Local factors (finite b-sums, exact rationals)
# ---------------------------------------------------------------------------


def indicator(p: int, b: int, n: int, flavor: LocalFlavor) -> int:
    """The b-th local indicator of n.

    generic : 1 if n^2 = 4 (mod p^{2b}) else 0
    two     : additionally (n^2-4)/2^{2b} must be a discriminant
    level   : 2 / 1 + ((n^2-4)q^{-2b} / q) / 0 case table
    ramified: 1 - ((n^2-4)p^{-2b} / p) when q^2 does not divide, else 0
    """
    if b < 0:
        raise ValueError("b must be >= 0")
    if flavor is LocalFlavor.TWO and p != 2:
        raise ValueError("two-flavor requires p = 2")
    if flavor is not LocalFlavor.TWO and p == 2:
        raise ValueError("p = 2 always carries the two-flavor")
    m2 = n * n - 4
    pb = p ** (2 * b)
    if m2 % pb:
        return 0
    m = m2 // pb
    if flavor is LocalFlavor.GENERIC:
        return 1
    if flavor is LocalFlavor.TWO:
        return 1 if m % 4 in (0, 1) else 0
    if flavor is LocalFlavor.LEVEL:
        return 2 if m % (p * p) == 0 else 1 + kronecker(m, p)
    if flavor is LocalFlavor.RAMIFIED:
        return 0 if m % (p * p) == 0 else 1 - kronecker(m, p)
    raise ValueError(f"unknown flavor {flavor}")


def local_summand(p: int, b: int, n: int, flavor: LocalFlavor) -> Fraction:
    """(1 - chi_{(n^2-4)p^{-2b}}(p)/p)^{-1} * I_{p^b}(n) as an exact rational.

    This is the b-th summand of the local factor, before the 1/p^b weight.
    """
    ind = indicator(p, b, n, flavor)
    if ind == 0:
        return Fraction(0)
    m = (n * n - 4) // p ** (2 * b)
    ch = kronecker(m, p)
    return Fraction(ind) / (1 - Fraction(ch, p))


def _b_max(p: int, n: int) -> int:
    # indicator support is finite: n^2 = 4 (mod p^{2b}) forces p^{2b} <= n^2-4
    m2 = n * n - 4
    b = 0
    q = p * p
    while q <= m2:
        b += 1
        q *= p * p
    return b


def local_factor(p: int, n: int, ctx: GroupContext) -> float:
    """beta_p(n) = sum_{b>=0} p^{-b} * local_summand; the sum is finite."""
    return float(local_factor_exact(p, n, ctx))


def local_factor_exact(p: int, n: int, ctx: GroupContext) -> Fraction:
    if n < 3:
        raise ValueError("n must be >= 3")
    flavor = flavor_of(p, ctx)
    total = Fraction(0)
    for b in range(_b_max(p, n) + 1):
        s = local_summand(p, b, n, flavor)
        if s:
            total += s / p**b
    return total


def beta_truncated(n: int, P: int, ctx: GroupContext, checked: bool = True) -> float:
    """Truncated multiplicity: every L-value replaced by its Euler product
    over p <= P, and the (D, v) sum restricted to P-smooth v.

    Computes both the divisor-sum form and the product of local factors; in
    checked mode the two are asserted to agree within 1e-10 (they are equal
    as exact rationals).  Returns the product form.

    P must be at least the largest context prime, so that every level or
    ramified local factor appears in the product.
    """
    if P < max(ctx.primes, default=2):
        raise ValueError(f"P={P} must cover the context primes {ctx.primes}")
    if n < 3:
        raise ValueError("n must be >= 3")
    product = _beta_truncated_product(n, P, ctx)
    if checked:
        double_sum = _beta_truncated_divisor_sum(n, P, ctx)
        if abs(product - double_sum) > 1e-10 * max(1.0, abs(product)):
            raise AssertionError(
                f"local factorization identity violated at n={n}, P={P}: "
                f"{product} vs {double_sum}"
            )
    return product


def _beta_truncated_product(n: int, P: int, ctx: GroupContext) -> float:
    out = 1.0
    for p in primes_up_to(P):
        out *= local_factor(p, n, ctx)
        if out == 0.0:
            return 0.0
    return out


def _beta_truncated_divisor_sum(n: int, P: int, ctx: GroupContext) -> float:
    split = fundamental_split_of_trace(n)
    d, l = split.d, split.l
    primes = primes_up_to(P)
    total = Fraction(0)
    for f in divisors(l):
        v = l // f
        if v > 1 and max(factorize(v).primes) > P:
            continue  # v must be P-smooth
        D = d * f * f
        w = _weight_product(D, ctx)
        if w == 0:
            continue
        euler = Fraction(1)
        for p in primes:
            euler /= 1 - Fraction(kronecker(D, p), p)
        total += Fraction(w, v) * euler
    return float(total)


def seminorm_estimate(
    ctx: GroupContext,
    P: int,
    s: int,
    n_max: int,
    strategy: LStrategy | None = None,
) -> float:
    """Finite-N estimate of the s-seminorm of beta - beta_truncated.

    Diagnostic only: measures how well the P-truncated Euler products track
    the full multiplicity over 3 <= n <= n_max.
    """
    if s not in (1, 2):
        raise ValueError("s must be 1 or 2")
    if strategy is None:
        strategy = SmoothedSeries()
    acc = 0.0
    for n in range(3, n_max + 1):
        diff = abs(beta(n, ctx, strategy) - beta_truncated(n, P, ctx, checked=False))
        acc += diff**s
    return (acc / n_max) ** (1.0 / s)
