"""Real quadratic order arithmetic built on reduced indefinite forms.

One engine drives everything: the cycle structure of reduced primitive
binary quadratic forms of positive non-square discriminant D.

* The number of cycles is the narrow class number h(D).
* Walking once around any cycle and multiplying the step matrices gives the
  fundamental automorph, i.e. the minimal (x, y) with x^2 - D*y^2 = 4.  That
  is the proper fundamental unit eps_D = (x + y*sqrt(D))/2 of the order of
  discriminant D (norm +1 by construction; when the +-1 Pell unit has norm
  -1 this automorph is its square, as it must be).
* The same walk in log-scaled floating point yields the regulator
  ln(eps_D) without materializing the unit, for discriminants whose unit
  would be astronomically large.

A form (a, b, c), b^2 - 4ac = D > 0, is reduced iff 0 < b < sqrt(D) and
sqrt(D) - b < 2|a| < sqrt(D) + b.  The reduction step rho maps (a, b, c) to
(c, r, (r^2 - D)/(4c)) with r = -b (mod 2|c|) chosen in (sqrt(D) - 2|c|,
sqrt(D)); reduced forms are permuted by rho and partition into cycles.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from .arith import (
    OrderDiscriminant,
    factorize,
    is_fundamental_discriminant,
    kronecker,
    order_discriminant,
)

# Units larger than this (in bits of x) are never materialized; the
# regulator falls back to scaled floating-point accumulation.
UNIT_BIT_THRESHOLD = 4096

Form = tuple[int, int, int]


@dataclass(frozen=True)
class PellUnit:
    """Minimal positive solution of x^2 - d*y^2 = 4 (norm-one unit)."""

    d: int
    x: int
    y: int

    def __post_init__(self) -> None:
        if self.x * self.x - self.d * self.y * self.y != 4:
            raise ValueError("not a solution of x^2 - d y^2 = 4")
        if self.y < 1:
            raise ValueError("y must be >= 1")

    def log(self) -> float:
        """ln((x + y*sqrt(d))/2) = ln((x + sqrt(x^2-4))/2), stable for huge x."""
        return _log_half_sum(self.x)

    def float_value(self) -> float:
        return math.exp(self.log())


@dataclass(frozen=True)
class Regulator:
    """Natural log of the proper fundamental unit of the order of disc D."""

    D: int
    log_epsilon: float

    def __post_init__(self) -> None:
        if not self.log_epsilon > 0:
            raise ValueError("regulator must be positive")


def _log_half_sum(x: int) -> float:
    # ln((x + sqrt(x^2 - 4)) / 2) without overflow for big integers.
    if x.bit_length() <= 500:
        fx = float(x)
        return math.log((fx + math.sqrt(fx * fx - 4.0)) / 2.0)
    # (1 + sqrt(1 - 4/x^2))/2 == 1 to double precision here.
    return math.log(x)


def _validate_positive_nonsquare_discriminant(D: int) -> int:
    if D <= 0:
        raise ValueError(f"discriminant must be positive, got {D}")
    if D % 4 not in (0, 1):
        raise ValueError(f"{D} is not a discriminant")
    r = math.isqrt(D)
    if r * r == D:
        raise ValueError(f"{D} is a perfect square")
    return r


def reduced_forms(D: int) -> list[Form]:
    """All reduced primitive indefinite forms of discriminant D, sorted."""
    sq = _validate_positive_nonsquare_discriminant(D)
    forms: list[Form] = []
    for b in range(2 - (D % 2), sq + 1, 2):
        ac = (b * b - D) // 4
        # sqrt(D) - b < 2a < sqrt(D) + b, integer-safe for non-square D
        lo2 = sq - b  # 2a > sqrt(D) - b  <=>  2a >= floor(sqrt(D)) - b + 1
        hi2 = sq + b  # 2a < sqrt(D) + b  <=>  2a <= floor(sqrt(D)) + b
        a_min = max(1, (lo2 + 2) // 2 if lo2 >= 0 else 1)
        a_max = hi2 // 2
        for a in range(a_min, a_max + 1):
            if (2 * a - b) ** 2 >= D or (2 * a + b) ** 2 <= D:
                continue
            if ac % a:
                continue
            c = ac // a
            if math.gcd(math.gcd(a, b), abs(c)) == 1:
                forms.append((a, b, c))
                forms.append((-a, b, -c))
    forms.sort()
    return forms


def _rho(form: Form, D: int, sq: int) -> tuple[Form, int]:
    """One reduction step; returns the successor form and the partial
    quotient m = (b + r) / (2c) of the step matrix [[0, -1], [1, m]]."""
    _a, b, c = form
    mmod = 2 * abs(c)
    r = sq - (sq - (-b) % mmod) % mmod
    c_next = (r * r - D) // (4 * c)
    m, rem = divmod(b + r, 2 * c)
    if rem:
        raise ArithmeticError("rho step lost exact divisibility")
    return (c, r, c_next), m


def _cycle_of(form: Form, D: int, sq: int) -> list[Form]:
    cycle = [form]
    nxt, _ = _rho(form, D, sq)
    while nxt != form:
        cycle.append(nxt)
        nxt, _ = _rho(nxt, D, sq)
    return cycle


@lru_cache(maxsize=1 << 14)
def _cycles(D: int) -> tuple[tuple[Form, ...], ...]:
    sq = _validate_positive_nonsquare_discriminant(D)
    remaining = set(reduced_forms(D))
    if not remaining:
        raise ArithmeticError(f"no reduced forms of discriminant {D}")
    cycles = []
    while remaining:
        seed = min(remaining)
        cyc = _cycle_of(seed, D, sq)
        cycles.append(tuple(cyc))
        remaining.difference_update(cyc)
    return tuple(cycles)


def narrow_class_number(D: int | OrderDiscriminant) -> int:
    """Number of cycles of reduced primitive forms of discriminant D."""
    if isinstance(D, OrderDiscriminant):
        D = D.D
    return len(_cycles(D))


def _principal_reduced(D: int, sq: int) -> Form:
    """The reduced principal form (1, b0, (b0^2 - D)/4).

    With b0 the largest integer below sqrt(D) of the same parity as D, the
    reduction inequalities hold outright, so no preparatory rho steps are
    needed and no enumeration of all forms takes place.
    """
    b0 = sq if (sq - D) % 2 == 0 else sq - 1
    return (1, b0, (b0 * b0 - D) // 4)


def _automorph(D: int) -> tuple[int, int]:
    """Minimal (x, y), x^2 - D*y^2 = 4, from one full cycle walk (exact)."""
    sq = _validate_positive_nonsquare_discriminant(D)
    start = _principal_reduced(D, sq)
    m11, m12, m21, m22 = 1, 0, 0, 1
    form = start
    while True:
        form, m = _rho(form, D, sq)
        # right-multiply by [[0, -1], [1, m]]
        m11, m12 = m12, -m11 + m * m12
        m21, m22 = m22, -m21 + m * m22
        if form == start:
            break
    x = abs(m11 + m22)
    y, rem = divmod(abs(m21), abs(start[0]))
    if rem or x * x - D * y * y != 4:
        raise ArithmeticError(f"cycle automorph failed for D={D}")
    return x, y


def _log_automorph(D: int) -> float:
    """ln(eps_D) by the same cycle walk in rescaled floating point."""
    sq = _validate_positive_nonsquare_discriminant(D)
    start = _principal_reduced(D, sq)
    m11, m12, m21, m22 = 1.0, 0.0, 0.0, 1.0
    log_scale = 0.0
    form = start
    while True:
        form, m = _rho(form, D, sq)
        fm = float(m)
        m11, m12 = m12, -m11 + fm * m12
        m21, m22 = m22, -m21 + fm * m22
        norm = max(abs(m11), abs(m12), abs(m21), abs(m22))
        if norm > 1e100:
            m11, m12, m21, m22 = m11 / norm, m12 / norm, m21 / norm, m22 / norm
            log_scale += math.log(norm)
        if form == start:
            break
    trace = abs(m11 + m22)
    # Largest eigenvalue of the det-1 cycle matrix is the unit itself.
    disc = trace * trace - 4.0 * math.exp(-2.0 * log_scale)
    lam = (trace + math.sqrt(max(disc, 0.0))) / 2.0
    return log_scale + math.log(lam)


def proper_fundamental_unit(d: int) -> PellUnit:
    """Minimal-y positive solution of x^2 - d*y^2 = 4, d fundamental > 0."""
    if not is_fundamental_discriminant(d) or d < 0:
        raise ValueError(f"{d} is not a positive fundamental discriminant")
    x, y = _automorph(d)
    return PellUnit(d, x, y)


def unit_index(d: int, f: int) -> int:
    """Smallest k >= 1 with eps_d^k lying in the order of conductor f.

    Membership of (x_k + y_k*sqrt(d))/2 in Z + f*omega*Z, omega =
    (d + sqrt(d))/2, reduces to f | y_k.  The y_k satisfy the integer
    recurrence y_{k+1} = x_1*y_k - y_{k-1}, so only residues mod f are
    tracked; the index divides f * prod_{p|f}(1 - (d/p)/p) * h-ratio and in
    particular is at most f * prod_{p|f}(1 + 1/p).
    """
    if f < 1:
        raise ValueError("f must be >= 1")
    if f == 1:
        return 1
    unit = proper_fundamental_unit(d)
    x1 = unit.x % f
    y_prev, y_cur = 0, unit.y % f
    cap = f
    for p, e in factorize(f).factors:
        cap = cap // p * (p + 1)
    k = 1
    while y_cur % f:
        y_prev, y_cur = y_cur, (x1 * y_cur - y_prev) % f
        k += 1
        if k > cap + 1:
            raise ArithmeticError(f"unit index search exceeded bound for d={d}, f={f}")
    return k


def regulator(D: int | OrderDiscriminant) -> Regulator:
    """ln(eps_D) for the order of discriminant D = d*f^2.

    Computed as unit_index(d, f) * ln(eps_d); ln(eps_d) comes from the exact
    Pell unit when it fits below UNIT_BIT_THRESHOLD bits, otherwise from the
    scaled-float cycle walk.
    """
    od = D if isinstance(D, OrderDiscriminant) else order_discriminant(D)
    log_fund = _regulator_fundamental(od.d)
    if od.f == 1:
        return Regulator(od.D, log_fund)
    return Regulator(od.D, unit_index(od.d, od.f) * log_fund)


@lru_cache(maxsize=1 << 14)
def _regulator_fundamental(d: int) -> float:
    approx = _log_automorph(d)
    if approx / math.log(2) <= UNIT_BIT_THRESHOLD:
        return proper_fundamental_unit(d).log()
    return approx


def class_number_L(D: int | OrderDiscriminant) -> float:
    """L(1, chi_D) evaluated through h(D) * ln(eps_D) = sqrt(D) * L(1, chi_D)."""
    od = D if isinstance(D, OrderDiscriminant) else order_discriminant(D)
    return narrow_class_number(od.D) * regulator(od).log_epsilon / math.sqrt(od.D)


def norm_of_trace(t: int) -> float:
    """Norm ((|t| + sqrt(t^2 - 4)) / 2)^2 of a hyperbolic element of trace t."""
    if abs(t) <= 2:
        raise ValueError("norm is defined for |t| > 2")
    t = abs(t)
    return ((t + math.sqrt(t * t - 4.0)) / 2.0) ** 2


def norm_gap(t: int) -> float:
    """sqrt(N) - 1/sqrt(N) = sqrt(t^2 - 4), the weight denominator."""
    if abs(t) <= 2:
        raise ValueError("defined for |t| > 2")
    return math.sqrt(t * t - 4.0)


def order_class_number_relation(d: int, f: int) -> int:
    """h(d) * f * prod_{p|f}(1 - (d/p)/p) as an exact integer.

    Classical order relation: equals h(d*f^2) * unit_index(d, f); used as an
    independent consistency oracle in tests.
    """
    rhs = narrow_class_number(d) * f
    for p, _ in factorize(f).factors:
        rhs = rhs // p * (p - kronecker(d, p))
    return rhs
