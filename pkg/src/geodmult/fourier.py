"""Fourier analysis of the limit-periodic local factors.

Each local factor beta_p(n) = sum_b p^{-b} g_b(n) is built from b-indexed
periodic summands g_b (the indicator-weighted character factors defined in
`multiplicity.local_summand`).  The period of g_b is

    level / ramified primes : q^{2b+2}   (minimal)
    generic odd primes      : p^{2b+1}   (minimal)
    p = 2                   : 2^{2b+3}   (a period; at b = 0 the summand
                                          is already 2-periodic)

Fourier coefficients of a T-periodic g at a rational phase a/m are exact
finite sums (1/T) * sum_{n mod T} g(n) e^{-2 pi i n a / m} whenever m | T,
and vanish otherwise.  Because g_b is supported on n = +-2 (mod p^{2b}),
the sum has O(p^2) nonzero terms regardless of b, so exact DFT values are
available at any depth; a full-period brute-force fold backs this up as a
test oracle for small periods.

Closed forms for the level and ramified coefficient tables, the assembled
coefficients, the A-values A(p^c) = sum_{a reduced} |beta_p-hat(a/p^c)|^2,
and the local Euler factors M_p = 1 + sum_c A(p^c) are implemented in exact
rational (or rational + Gauss-sign) arithmetic and validated against the
numeric path.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .arith import factorize, kronecker
from .multiplicity import (
    Congruence,
    GroupContext,
    LocalFlavor,
    Quaternion,
    flavor_of,
    local_summand,
)

TWO_PI = 2.0 * math.pi

Side = str  # "congruence" | "quaternion"


def _check_side(side: Side) -> Side:
    if side not in ("congruence", "quaternion"):
        raise ValueError(f"side must be 'congruence' or 'quaternion', got {side!r}")
    return side


@dataclass(frozen=True)
class RationalPhase:
    """Reduced rational a/b in [0, 1); a = 0 forces b = 1."""

    a: int
    b: int

    def __post_init__(self) -> None:
        if self.b < 1 or not 0 <= self.a < self.b:
            raise ValueError(f"need 0 <= a < b, got {self.a}/{self.b}")
        if math.gcd(self.a, self.b) != 1:
            raise ValueError(f"{self.a}/{self.b} is not reduced")
        if self.a == 0 and self.b != 1:
            raise ValueError("zero phase is 0/1")

    @classmethod
    def reduce(cls, a: int, b: int) -> "RationalPhase":
        if b < 1:
            raise ValueError("denominator must be positive")
        a %= b
        g = math.gcd(a, b)
        a, b = a // g, b // g
        if a == 0:
            return cls(0, 1)
        return cls(a, b)


@dataclass(frozen=True)
class FourierCoefficient:
    phase: RationalPhase
    value: complex


def local_period(p: int, b: int, flavor: LocalFlavor) -> int:
    """Period of the b-th local summand: minimal for the odd-prime
    flavors, a (not always minimal) period for p = 2."""
    if b < 0:
        raise ValueError("b must be >= 0")
    if flavor in (LocalFlavor.LEVEL, LocalFlavor.RAMIFIED):
        return p ** (2 * b + 2)
    if flavor is LocalFlavor.GENERIC:
        return p ** (2 * b + 1)
    if flavor is LocalFlavor.TWO:
        if p != 2:
            raise ValueError("two-flavor requires p = 2")
        return 2 ** (2 * b + 3)
    raise ValueError(f"unknown flavor {flavor}")


# ---------------------------------------------------------------------------
# Sparse support enumeration and exact DFT
# ---------------------------------------------------------------------------


@lru_cache(maxsize=4096)
def _support(p: int, b: int, flavor: LocalFlavor) -> tuple[tuple[int, Fraction], ...]:
    """All (n, g_b(n)) with g_b(n) != 0 within one period.

    For b >= 1 and odd p the congruence n^2 = 4 (mod p^{2b}) forces
    n = +-2 (mod p^{2b}); for p = 2 the even solutions lie on the four
    square-root classes of 1 modulo 2^{2b-2}.  Candidates are enumerated
    from those classes and the summand is then evaluated honestly, so the
    enumeration can only be a superset of the support.
    """
    T = local_period(p, b, flavor)
    if b == 0 or (flavor is LocalFlavor.TWO and b <= 2) or T <= 4096:
        candidates = range(T)
    elif flavor is LocalFlavor.TWO:
        k = 2 * b - 2
        roots = {1 % 2**k, (-1) % 2**k, (2 ** (k - 1) - 1) % 2**k, (2 ** (k - 1) + 1) % 2**k}
        candidates = sorted(
            (2 * (r + j * 2**k)) % T for r in roots for j in range(T // 2 ** (k + 1))
        )
    else:
        pb = p ** (2 * b)
        candidates = sorted(
            (s + j * pb) % T for s in (2, -2 % pb) for j in range(T // pb)
        )
    out = []
    for n in candidates:
        v = local_summand(p, b, n, flavor)
        if v:
            out.append((n, v))
    return tuple(out)


def _mean_value(p: int, b: int, flavor: LocalFlavor) -> Fraction:
    T = local_period(p, b, flavor)
    return sum((v for _, v in _support(p, b, flavor)), Fraction(0)) / T


def dft_coefficient(
    p: int, b: int, flavor: LocalFlavor, phase: RationalPhase
) -> complex:
    """Exact Fourier coefficient of the b-th summand at a rational phase.

    (1/T) sum_{n mod T} g_b(n) e^{-2 pi i n a / m}; zero when the phase
    denominator does not divide the period (orthogonality), the plain mean
    at phase zero.  Compensated summation via math.fsum.
    """
    T = local_period(p, b, flavor)
    if phase.b == 1:
        return complex(_mean_value(p, b, flavor))
    if T % phase.b:
        return 0j
    re_parts: list[float] = []
    im_parts: list[float] = []
    for n, v in _support(p, b, flavor):
        ang = -TWO_PI * ((n * phase.a) % phase.b) / phase.b
        fv = float(v)
        re_parts.append(fv * math.cos(ang))
        im_parts.append(fv * math.sin(ang))
    return complex(math.fsum(re_parts) / T, math.fsum(im_parts) / T)


def dft_coefficients(p: int, b: int, flavor: LocalFlavor, modulus: int) -> np.ndarray:
    """All coefficients of the b-th summand at phases a/modulus, a = 0..m-1.

    Folds the sparse support modulo `modulus` and applies one FFT; exact up
    to rounding since the fold has few terms.  Returns zeros when the
    modulus does not divide the period.
    """
    T = local_period(p, b, flavor)
    if T % modulus:
        return np.zeros(modulus, dtype=np.complex128)
    res = np.zeros(modulus, dtype=np.float64)
    folded: dict[int, Fraction] = {}
    for n, v in _support(p, b, flavor):
        r = n % modulus
        folded[r] = folded.get(r, Fraction(0)) + v
    for r, v in folded.items():
        res[r] = float(v)
    return np.fft.fft(res) / T


def dft_coefficient_bruteforce(
    p: int, b: int, flavor: LocalFlavor, phase: RationalPhase
) -> complex:
    """Definitional full-period sum, no support shortcut.  Test oracle;
    cost is one pass over the whole period."""
    T = local_period(p, b, flavor)
    if T % phase.b:
        total = 0j
        period = T * (phase.b // math.gcd(T, phase.b))
        for n in range(period):
            v = local_summand(p, b, n, flavor)
            if v:
                total += float(v) * cmath.exp(-2j * math.pi * n * phase.a / phase.b)
        return total / period
    total = 0j
    for n in range(T):
        v = local_summand(p, b, n, flavor)
        if v:
            total += float(v) * cmath.exp(-2j * math.pi * ((n * phase.a) % phase.b) / phase.b)
    return total / T


# ---------------------------------------------------------------------------
# Gauss and character sums
# ---------------------------------------------------------------------------


def _require_odd_prime(q: int) -> None:
    from .arith import is_prime

    if q == 2 or not is_prime(q):
        raise ValueError(f"{q} is not an odd prime")


def gauss_sign(q: int) -> complex:
    """1 for q = 1 (mod 4), i for q = 3 (mod 4)."""
    _require_odd_prime(q)
    return 1.0 + 0j if q % 4 == 1 else 1j


def gauss_sum(q: int) -> complex:
    """sum_{m=1}^{q} (m/q) e^{2 pi i m / q}; equals gauss_sign(q) * sqrt(q)."""
    _require_odd_prime(q)
    re = []
    im = []
    for m in range(1, q + 1):
        ch = kronecker(m, q)
        if ch:
            ang = TWO_PI * m / q
            re.append(ch * math.cos(ang))
            im.append(ch * math.sin(ang))
    return complex(math.fsum(re), math.fsum(im))


def char_sum(q: int, a: int) -> complex:
    """sum_{n mod q} ((n^2-4)/q) e^{-2 pi i n a / q}.

    At a = 0 the sum is an integer, evaluated exactly: it equals -1 for
    every odd prime q.
    """
    _require_odd_prime(q)
    if a % q == 0:
        return complex(sum(kronecker(n * n - 4, q) for n in range(q)))
    re = []
    im = []
    for n in range(q):
        ch = kronecker(n * n - 4, q)
        if ch:
            ang = -TWO_PI * ((n * a) % q) / q
            re.append(ch * math.cos(ang))
            im.append(ch * math.sin(ang))
    return complex(math.fsum(re), math.fsum(im))


def _char_sum_array(q: int, modulus: int) -> np.ndarray:
    """char_sum(q, a) for all a mod `modulus` (with q | modulus), vectorized."""
    vals = np.array([kronecker(n * n - 4, q) for n in range(q)], dtype=np.float64)
    a = np.arange(modulus)
    n = np.arange(q)
    phases = np.exp(-2j * np.pi * np.outer(a % q, n) / q)
    return phases @ vals


# ---------------------------------------------------------------------------
# Closed forms: b-indexed coefficient tables
# ---------------------------------------------------------------------------


def closed_form_coeff_b(q: int, b: int, c: int, a: int, side: Side) -> complex:
    """Tabulated Fourier coefficient of the b-th level/ramified summand at
    phase a/q^c.  Rejects c > 2b + 2 (out of table; the value is forced to
    zero by periodicity and not tabulated)."""
    _require_odd_prime(q)
    _check_side(side)
    if b < 0 or c < 0:
        raise ValueError("b and c must be >= 0")
    if c > 2 * b + 2:
        raise ValueError(f"(b={b}, c={c}) is outside the coefficient table")
    if c == 0:
        if a != 0:
            raise ValueError("phase denominator 1 forces a = 0")
    elif a % q == 0:
        raise ValueError("a must be coprime to q for c >= 1")

    qc = q**c
    cosv = math.cos(4.0 * math.pi * a / qc)
    Q2 = q ** (2 * b + 2)

    if side == "congruence":
        if b == 0:
            if c == 0:
                return complex(1 - Fraction(2, q * q * (q - 1)))
            if c == 1:
                return -2.0 / (q * q * (q - 1)) * cosv + char_sum(q, a) / (q - 1)
            return complex(2.0 / (q * q) * cosv)  # c == 2
        if c == 2 * b + 2:
            return complex(2.0 / Q2 * cosv)
        if c == 2 * b + 1:
            eps = gauss_sign(q)
            bracket = cmath.exp(-4j * math.pi * a / qc) * kronecker(-a, q) + cmath.exp(
                4j * math.pi * a / qc
            ) * kronecker(a, q)
            return (
                (q / (q - 1)) * q**1.5 * eps * bracket - 2.0 / (q - 1) * cosv
            ) / Q2
        # c <= 2b, including the mean at c = 0
        return complex(2.0 * (q * q + q + 1) / Q2 * cosv)

    # quaternion side
    if b == 0:
        if c == 0:
            return complex(Fraction((q - 1) * (q * q + 2 * q + 2), q * q * (q + 1)))
        if c == 1:
            return -2.0 / (q * q * (q + 1)) * cosv - char_sum(q, a) / (q + 1)
        return complex(-2.0 / (q * q) * cosv)  # c == 2
    if c == 2 * b + 2:
        return complex(-2.0 / Q2 * cosv)
    if c == 2 * b + 1:
        eps = gauss_sign(q)
        bracket = cmath.exp(-4j * math.pi * a / qc) * kronecker(-a, q) + cmath.exp(
            4j * math.pi * a / qc
        ) * kronecker(a, q)
        return -2.0 / (Q2 * (q + 1)) * cosv - math.sqrt(q) * eps * bracket / (
            q ** (2 * b) * (q + 1)
        )
    return complex(2.0 * (q**3 - 1) / (Q2 * (q + 1)) * cosv)


def closed_form_assembled(q: int, c: int, a: int, side: Side) -> complex:
    """Tabulated assembled coefficient of the full local factor at a/q^c."""
    _require_odd_prime(q)
    _check_side(side)
    if c < 0:
        raise ValueError("c must be >= 0")
    if c == 0:
        if a != 0:
            raise ValueError("phase denominator 1 forces a = 0")
        return 1.0 + 0j
    if a % q == 0:
        raise ValueError("a must be coprime to q for c >= 1")
    qc = q**c
    cosv = math.cos(4.0 * math.pi * a / qc)
    sgn = 1.0 if side == "congruence" else -1.0
    denom = (q - 1) if side == "congruence" else (q + 1)
    if c == 1:
        return sgn * char_sum(q, a) / denom
    if c == 2:
        return complex(sgn * 2.0 / (q * denom) * cosv)
    scale = float(q) ** ((3 * c - 4) / 2.0)
    if c % 2 == 0:
        return complex(sgn * 2.0 / denom * cosv / scale)
    eps = gauss_sign(q)
    bracket = cmath.exp(-4j * math.pi * a / qc) * kronecker(-1, q) + cmath.exp(
        4j * math.pi * a / qc
    )
    return sgn * eps * kronecker(a, q) * bracket / (denom * scale)


# ---------------------------------------------------------------------------
# Assembled coefficients by b-series (numeric path, all flavors)
# ---------------------------------------------------------------------------


def _series_tail_constant(p: int, flavor: LocalFlavor) -> float:
    # Uniform per-b magnitude bound C * p^{-2b} for the b-th coefficient.
    if flavor in (LocalFlavor.LEVEL, LocalFlavor.RAMIFIED):
        return 2.0 * (p * p + p + 1) / (p * p)
    if flavor is LocalFlavor.TWO:
        return 16.0
    return 2.0 * p / (p - 1)  # generic: support 2p, weight <= p/(p-1)


def _series_b_max(p: int, flavor: LocalFlavor, tol: float) -> int:
    C = _series_tail_constant(p, flavor)
    b = 1
    while C * p ** (-3.0 * (b + 1)) / (1.0 - p**-3.0) > tol:
        b += 1
    return b


def series_tail_bound(p: int, flavor: LocalFlavor, b_max: int) -> float:
    """Geometric bound on the coefficient mass dropped beyond b_max."""
    C = _series_tail_constant(p, flavor)
    return C * p ** (-3.0 * (b_max + 1)) / (1.0 - p**-3.0)


def series_coefficient(
    p: int, c: int, a: int, ctx: GroupContext, tol: float = 1e-12
) -> complex:
    """Assembled coefficient sum_b p^{-b} g_b-hat (a/p^c), truncated with a
    certified geometric tail below tol."""
    if c < 0:
        raise ValueError("c must be >= 0")
    if c == 0:
        if a != 0:
            raise ValueError("phase denominator 1 forces a = 0")
        phase = RationalPhase(0, 1)
    else:
        if a % p == 0:
            raise ValueError("a must be coprime to p for c >= 1")
        phase = RationalPhase(a % p**c, p**c)
    flavor = flavor_of(p, ctx)
    total = 0j
    for b in range(_series_b_max(p, flavor, tol) + 1):
        total += dft_coefficient(p, b, flavor, phase) / p**b
    return total


def series_coefficients(
    p: int, c: int, ctx: GroupContext, tol: float = 1e-12
) -> np.ndarray:
    """Assembled coefficients at every phase a/p^c, a = 0..p^c - 1."""
    flavor = flavor_of(p, ctx)
    modulus = p**c
    total = np.zeros(modulus, dtype=np.complex128)
    for b in range(_series_b_max(p, flavor, tol) + 1):
        total += dft_coefficients(p, b, flavor, modulus) / p**b
    return total


def coefficient_table(p: int, c: int, ctx: GroupContext, tol: float = 1e-12) -> list[FourierCoefficient]:
    """Assembled coefficients at every reduced phase a/p^c.

    The local factor is nonnegative with mean 1, so every coefficient is
    bounded by that mean plus the truncation tail; the bound is enforced.
    """
    flavor = flavor_of(p, ctx)
    vals = series_coefficients(p, c, ctx, tol)
    mean_abs = abs(series_coefficient(p, 0, 0, ctx, tol))
    bound = mean_abs + series_tail_bound(p, flavor, _series_b_max(p, flavor, tol)) + 2 * tol
    out = []
    for a in range(p**c if c else 1):
        if c >= 1 and a % p == 0:
            continue
        phase = RationalPhase(a, p**c) if c else RationalPhase(0, 1)
        value = complex(vals[a])
        if abs(value) > bound:
            raise AssertionError(f"coefficient bound violated at {phase}: |{value}| > {bound}")
        out.append(FourierCoefficient(phase, value))
    return out


def global_coefficient(a: int, b: int, ctx: GroupContext, tol: float = 1e-12) -> complex:
    """Coefficient of the full multiplicity at a reduced phase a/b, as the
    product over p | b of local coefficients at CRT-split phases a_p/p^c."""
    if b < 1:
        raise ValueError("denominator must be positive")
    a %= b
    if math.gcd(a, b) != 1 and b > 1:
        raise ValueError(f"{a}/{b} is not reduced")
    out = 1.0 + 0j
    for p, e in factorize(b).factors:
        pc = p**e
        cof = b // pc
        ap = (a * pow(cof, -1, pc)) % pc
        out *= series_coefficient(p, e, ap, ctx, tol)
        if out == 0:
            return 0j
    return out


# ---------------------------------------------------------------------------
# A-values and local Euler factors
# ---------------------------------------------------------------------------


def _a_closed_fraction(p: int, c: int, flavor: LocalFlavor) -> Fraction:
    if c < 1:
        raise ValueError("c must be >= 1")
    if flavor is LocalFlavor.TWO:
        if p != 2:
            raise ValueError("two-flavor requires p = 2")
        table = {1: Fraction(1, 9), 2: Fraction(1, 18), 3: Fraction(0), 4: Fraction(1, 144), 5: Fraction(0)}
        if c in table:
            return table[c]
        return Fraction(1, 9 * 2 ** (2 * c - 5))
    if flavor is LocalFlavor.GENERIC:
        if c == 1:
            return Fraction(p * p - 2 * p - 1, (p * p - 1) ** 2)
        return Fraction(2 * (p - 1), (p * p - 1) ** 2 * p ** (2 * c - 3))
    if flavor is LocalFlavor.LEVEL:
        if c == 1:
            return Fraction(p * p - 2 * p - 1, (p - 1) ** 2)
        if c == 2:
            return Fraction(2, p * (p - 1))
        return Fraction(2, p ** (2 * c - 3) * (p - 1))
    if flavor is LocalFlavor.RAMIFIED:
        if c == 1:
            return Fraction(p * p - 2 * p - 1, (p + 1) ** 2)
        if c == 2:
            return Fraction(2 * (p - 1), p * (p + 1) ** 2)
        return Fraction(2 * (p - 1), (p + 1) ** 2 * p ** (2 * c - 3))
    raise ValueError(f"unknown flavor {flavor}")


def a_value(p: int, c: int, ctx: GroupContext, method: str = "closed", tol: float = 1e-12) -> float:
    """A(p^c) = sum over reduced a mod p^c of |assembled coefficient|^2."""
    flavor = flavor_of(p, ctx)
    if method == "closed":
        return float(_a_closed_fraction(p, c, flavor))
    if method == "numeric":
        return _a_numeric(p, c, flavor, tol)
    raise ValueError(f"method must be 'closed' or 'numeric', got {method!r}")


@lru_cache(maxsize=4096)
def _a_numeric(p: int, c: int, flavor: LocalFlavor, tol: float) -> float:
    modulus = p**c
    total = np.zeros(modulus, dtype=np.complex128)
    for b in range(_series_b_max(p, flavor, tol) + 1):
        total += dft_coefficients(p, b, flavor, modulus) / p**b
    mask = np.arange(modulus) % p != 0
    return float(np.sum(np.abs(total[mask]) ** 2))


def _euler_factor_fraction(p: int, flavor: LocalFlavor) -> Fraction:
    """M_p = 1 + sum_{c>=1} A(p^c), summed in closed form."""
    if flavor is LocalFlavor.TWO:
        return Fraction(1015, 864)
    if flavor is LocalFlavor.GENERIC:
        return Fraction(p * p * (p**3 + p * p - p - 3), (p * p - 1) ** 2 * (p + 1))
    if flavor is LocalFlavor.LEVEL:
        return Fraction(2 * p * (p * p - p - 1), (p + 1) * (p - 1) ** 2)
    if flavor is LocalFlavor.RAMIFIED:
        return Fraction(2 * p * (p * p + p + 1), (p + 1) ** 3)
    raise ValueError(f"unknown flavor {flavor}")


def local_euler_factor(p: int, ctx: GroupContext) -> float:
    return float(_euler_factor_fraction(p, flavor_of(p, ctx)))


def euler_factor_term_sum(p: int, flavor: LocalFlavor, c_split: int = 3) -> Fraction:
    """1 + sum_{c<=c_split} A(p^c) + exact geometric tail; must equal the
    closed M_p.  Exposed for the identity checks."""
    total = Fraction(1)
    for c in range(1, c_split + 1):
        total += _a_closed_fraction(p, c, flavor)
    c0 = c_split + 1
    if flavor is LocalFlavor.TWO:
        c0 = max(c0, 6)
        for c in range(c_split + 1, c0):
            total += _a_closed_fraction(p, c, flavor)
        # sum_{c>=c0} 1/(9*2^{2c-5}) = (1/(9*2^{2c0-5})) * 4/3
        total += Fraction(1, 9 * 2 ** (2 * c0 - 5)) * Fraction(4, 3)
        return total
    c0 = max(c0, 3)
    for c in range(c_split + 1, c0):
        total += _a_closed_fraction(p, c, flavor)
    # remaining terms are K / p^{2c-3}: geometric with ratio 1/p^2
    if flavor is LocalFlavor.GENERIC:
        K = Fraction(2 * (p - 1), (p * p - 1) ** 2)
    elif flavor is LocalFlavor.LEVEL:
        K = Fraction(2, p - 1)
    else:
        K = Fraction(2 * (p - 1), (p + 1) ** 2)
    total += K * Fraction(1, p ** (2 * c0 - 3)) * Fraction(p * p, p * p - 1)
    return total
