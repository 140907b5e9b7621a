"""Exact integer arithmetic: Kronecker symbols, factorization, discriminants.

Everything here is pure and deterministic.  Inputs are bounded to signed
64-bit integers; arbitrary precision is confined to the `quadratic` module.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from functools import lru_cache

INT64_MAX = 2**63 - 1

# Trial division handles primes up to this bound; larger cofactors go to
# Miller-Rabin + Pollard-Brent.
TRIAL_DIVISION_BOUND = 10**6

_DEFAULT_SPLITTING_SEED = 0x5EED_CAFE
_splitting_seed = _DEFAULT_SPLITTING_SEED

# Witnesses making Miller-Rabin deterministic for n < 3.3e24 (covers 64-bit).
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


class OutOfRangeError(ValueError):
    """Input outside the supported signed 64-bit range."""


def set_splitting_seed(seed: int) -> None:
    """Fix the seed used by the randomized factor-splitting step.

    The default is a fixed constant, so factorization is reproducible out of
    the box; this hook exists for CLI --seed plumbing.
    """
    global _splitting_seed
    _splitting_seed = seed


@dataclass(frozen=True)
class Factorization:
    """Prime factorization ``value = prod(p**e)`` with primes ascending."""

    value: int
    factors: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        prev = 1
        acc = 1
        for p, e in self.factors:
            if p <= prev or e <= 0:
                raise ValueError(f"malformed factor list for {self.value}")
            prev = p
            acc *= p**e
        if acc != self.value:
            raise ValueError(f"factors do not recompose {self.value}")

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.factors)

    def is_squarefree(self) -> bool:
        return all(e == 1 for _, e in self.factors)

    def squarefree_kernel(self) -> int:
        """Product of the distinct primes dividing value."""
        k = 1
        for p, _ in self.factors:
            k *= p
        return k

    def square_split(self) -> tuple[int, int]:
        """Return (s, w) with value = s * w**2 and s squarefree."""
        s = w = 1
        for p, e in self.factors:
            if e % 2:
                s *= p
            w *= p ** (e // 2)
        return s, w


@dataclass(frozen=True)
class FundamentalSplit:
    """Decomposition m = d * l**2 with d a fundamental discriminant."""

    m: int
    d: int
    l: int

    def __post_init__(self) -> None:
        if self.d * self.l * self.l != self.m:
            raise ValueError(f"inconsistent split {self.d}*{self.l}^2 != {self.m}")


@dataclass(frozen=True)
class OrderDiscriminant:
    """Discriminant D = d * f**2 of the quadratic order of conductor f."""

    d: int
    f: int
    D: int

    def __post_init__(self) -> None:
        if self.D != self.d * self.f * self.f:
            raise ValueError("D != d*f^2")
        if self.D % 4 not in (0, 1):
            raise ValueError(f"{self.D} is not a discriminant")


def kronecker(D: int, n: int) -> int:
    """Kronecker symbol (D/n), totally extending the Legendre symbol.

    Conventions: (D/0) = 1 iff |D| = 1 else 0; (D/2) is 0 for even D and
    follows the +-1 mod 8 rule otherwise; (D/-1) = sign of D.  Completely
    multiplicative in n.
    """
    if n == 0:
        return 1 if D in (1, -1) else 0
    if D % 2 == 0 and n % 2 == 0:
        return 0
    # Strip twos from the bottom argument.
    v = 0
    while n % 2 == 0:
        n //= 2
        v += 1
    k = 1
    if v % 2 == 1 and D % 8 not in (1, 7):
        k = -1
    if n < 0:
        n = -n
        if D < 0:
            k = -k
    a = D % n
    # Jacobi loop: n odd positive, reciprocity with sign bookkeeping.
    while a != 0:
        v = 0
        while a % 2 == 0:
            a //= 2
            v += 1
        if v % 2 == 1 and n % 8 in (3, 5):
            k = -k
        if a % 4 == 3 and n % 4 == 3:
            k = -k
        a, n = n % a, a
    return k if n == 1 else 0


def is_discriminant(D: int) -> bool:
    """True iff D = 0 or 1 modulo 4."""
    return D % 4 in (0, 1)


def is_fundamental_discriminant(d: int) -> bool:
    """Fundamental: d = 1 mod 4 squarefree (d != 1), or d = 4s with s
    squarefree and s != 1 mod 4."""
    if d == 0 or d == 1:
        return False
    if d % 4 == 1:
        return factorize(abs(d)).is_squarefree()
    if d % 4 == 0:
        s = d // 4
        if s % 4 == 1:
            return False
        return factorize(abs(s)).is_squarefree()
    return False


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin for the 64-bit range."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    r, d = 0, n - 1
    while d % 2 == 0:
        r += 1
        d //= 2
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@lru_cache(maxsize=8)
def primes_up_to(n: int) -> tuple[int, ...]:
    """Ascending primes <= n via a byte sieve."""
    if n < 2:
        return ()
    sieve = bytearray(b"\x01") * (n + 1)
    sieve[0:2] = b"\x00\x00"
    for p in range(2, math.isqrt(n) + 1):
        if sieve[p]:
            start = p * p
            sieve[start :: p] = b"\x00" * ((n - start) // p + 1)
    return tuple(i for i, v in enumerate(sieve) if v)


def _pollard_brent(n: int, rng: random.Random) -> int:
    """A nontrivial factor of composite odd n (Brent's cycle variant)."""
    while True:
        y = rng.randrange(1, n)
        c = rng.randrange(1, n)
        m = 128
        g = r = q = 1
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g


@lru_cache(maxsize=1 << 16)
def _factor_tuple(n: int) -> tuple[tuple[int, int], ...]:
    if _persisted is not None:
        hit = _persisted.get(n)
        if hit is not None:
            return hit
    counts: dict[int, int] = {}
    rem = n
    for p in (2, 3, 5, 7, 11, 13):
        while rem % p == 0:
            counts[p] = counts.get(p, 0) + 1
            rem //= p
    if rem > 1:
        # Trial division with early exit once the cofactor shrinks; the sieve
        # bound is bucketed so the prime table is shared across calls.
        limit = min(TRIAL_DIVISION_BOUND, math.isqrt(rem))
        table = primes_up_to(10**4) if limit <= 10**4 else primes_up_to(TRIAL_DIVISION_BOUND)
        for p in table:
            if p < 17:
                continue
            if p * p > rem:
                break
            while rem % p == 0:
                counts[p] = counts.get(p, 0) + 1
                rem //= p
    if rem > 1:
        stack = [rem]
        rng = random.Random(_splitting_seed ^ n)
        while stack:
            m = stack.pop()
            if is_prime(m):
                counts[m] = counts.get(m, 0) + 1
                continue
            g = _pollard_brent(m, rng)
            stack.extend((g, m // g))
    result = tuple(sorted(counts.items()))
    if _persisted is not None:
        _persisted[n] = result
    return result


def factorize(n: int) -> Factorization:
    """Factor 1 <= n <= 2**63 - 1 into ascending prime powers."""
    if not 1 <= n <= INT64_MAX:
        raise OutOfRangeError(f"factorize requires 1 <= n <= {INT64_MAX}, got {n}")
    factors = _factor_tuple(n)
    if _persisted is not None:
        _persisted.setdefault(n, factors)
    return Factorization(n, factors)


_CACHE_FILE = "factor_cache.json"
_persisted: dict[int, tuple[tuple[int, int], ...]] | None = None  # None = persistence off


def load_factor_cache(cache_dir: str) -> int:
    """Enable on-disk factorization caching, warmed from the cache dir.

    Entries pass through the Factorization validator, so a corrupt file
    cannot poison results.  Returns the number of entries loaded.
    """
    import json
    import os

    global _persisted
    _persisted = {}
    path = os.path.join(cache_dir, _CACHE_FILE)
    if not os.path.exists(path):
        return 0
    with open(path) as fh:
        data = json.load(fh)
    for key, factors in data.items():
        n = int(key)
        fact = tuple((int(p), int(e)) for p, e in factors)
        Factorization(n, fact)  # validates recomposition and primality shape
        _persisted[n] = fact
    return len(_persisted)


def save_factor_cache(cache_dir: str) -> int:
    """Persist the factorizations recorded since load_factor_cache."""
    import json
    import os

    if _persisted is None:
        return 0
    os.makedirs(cache_dir, exist_ok=True)
    path = os.path.join(cache_dir, _CACHE_FILE)
    data = {str(n): [list(f) for f in fact] for n, fact in sorted(_persisted.items())}
    with open(path, "w") as fh:
        json.dump(data, fh)
    return len(data)


def multiply_factorizations(a: Factorization, b: Factorization) -> Factorization:
    counts = dict(a.factors)
    for p, e in b.factors:
        counts[p] = counts.get(p, 0) + e
    return Factorization(a.value * b.value, tuple(sorted(counts.items())))


def trace_poly_factorization(t: int) -> Factorization:
    """Factorization of t**2 - 4 for t >= 3, via the (t-2)(t+2) split.

    Much cheaper than factoring the product directly: both halves are ~t.
    """
    if t < 3:
        raise ValueError("t must be >= 3")
    return multiply_factorizations(factorize(t - 2), factorize(t + 2))


def fundamental_split(m: int, fact: Factorization | None = None) -> FundamentalSplit:
    """Unique (d, l) with m = d*l**2 and d a fundamental discriminant.

    Exists exactly for non-square m = 0, 1 (mod 4); m = t**2 - 4 with t >= 3
    always qualifies.  Algorithm: with m = s*w**2 (s squarefree), take
    (d, l) = (s, w) when s = 1 mod 4, else (4s, w/2); w is even in the second
    branch whenever m is 0 mod 4.
    """
    if m <= 0:
        raise ValueError("m must be positive")
    if fact is None:
        fact = factorize(m)
    s, w = fact.square_split()
    if s == 1:
        raise ValueError(f"{m} is a perfect square; no fundamental split")
    if s % 4 == 1:
        return FundamentalSplit(m, s, w)
    if m % 4 not in (0, 1):
        raise ValueError(f"{m} = 2,3 (mod 4) admits no fundamental split")
    # Here m = 0 mod 4 with squarefree part not 1 mod 4, so w is even.
    return FundamentalSplit(m, 4 * s, w // 2)


def fundamental_split_of_trace(t: int) -> FundamentalSplit:
    """Fundamental split of t**2 - 4."""
    return fundamental_split(t * t - 4, trace_poly_factorization(t))


def order_discriminant(D: int) -> OrderDiscriminant:
    """Split a positive non-square discriminant as D = d * f**2."""
    if D <= 0:
        raise ValueError("D must be positive")
    if not is_discriminant(D):
        raise ValueError(f"{D} is not a discriminant")
    split = fundamental_split(D)
    return OrderDiscriminant(split.d, split.l, D)


def divisors(n: int | Factorization) -> list[int]:
    """All positive divisors, ascending."""
    fact = n if isinstance(n, Factorization) else factorize(n)
    divs = [1]
    for p, e in fact.factors:
        divs = [d * pk for pk in [p**i for i in range(e + 1)] for d in divs]
    return sorted(divs)
