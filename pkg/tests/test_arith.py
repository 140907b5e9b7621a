"""Integer-arithmetic primitives against independent oracles."""

import math
import random

import gmpy2
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from geodmult.arith import (
    INT64_MAX,
    Factorization,
    OutOfRangeError,
    divisors,
    factorize,
    fundamental_split,
    fundamental_split_of_trace,
    is_discriminant,
    is_fundamental_discriminant,
    is_prime,
    kronecker,
    order_discriminant,
    primes_up_to,
    trace_poly_factorization,
)


class TestKronecker:
    def test_square_top(self):
        assert kronecker(5, 4) == 1

    def test_two_rule(self):
        # 5 = -3 (mod 8)
        assert kronecker(5, 2) == -1
        assert kronecker(17, 2) == 1
        assert kronecker(12, 2) == 0

    def test_shared_factor(self):
        assert kronecker(12, 3) == 0

    def test_zero_bottom(self):
        assert kronecker(1, 0) == 1
        assert kronecker(-1, 0) == 1
        assert kronecker(5, 0) == 0

    def test_euler_criterion_oracle(self):
        """(D/p) = D^((p-1)/2) mod p for odd primes p with p not dividing D."""
        for p in primes_up_to(1000):
            if p == 2:
                continue
            for D in (5, 8, 12, 13, 17, 21, 24, 28, 33, -4, -7, 997):
                if D % p == 0:
                    continue
                e = pow(D % p, (p - 1) // 2, p)
                expected = 1 if e == 1 else -1
                assert kronecker(D, p) == expected, (D, p)

    def test_matches_gmpy2(self):
        rng = random.Random(20240521)
        for _ in range(50_000):
            D = rng.randint(-10**6, 10**6)
            n = rng.randint(-10**6, 10**6)
            assert kronecker(D, n) == gmpy2.kronecker(D, n), (D, n)

    @given(
        D=st.integers(-10**9, 10**9),
        n1=st.integers(-10**4, 10**4),
        n2=st.integers(-10**4, 10**4),
    )
    @settings(max_examples=300)
    def test_completely_multiplicative(self, D, n1, n2):
        assert kronecker(D, n1 * n2) == kronecker(D, n1) * kronecker(D, n2)

    def test_zero_iff_common_factor(self):
        for D in range(-50, 50):
            for n in range(1, 60):
                assert (kronecker(D, n) == 0) == (math.gcd(D, n) > 1), (D, n)


class TestFactorize:
    def test_one(self):
        assert factorize(1).factors == ()

    def test_small(self):
        assert factorize(45).factors == ((3, 2), (5, 1))

    def test_mersenne_prime(self):
        m = 2**61 - 1
        assert sympy.isprime(m)  # oracle
        assert factorize(m).factors == ((m, 1),)

    def test_out_of_range(self):
        with pytest.raises(OutOfRangeError, match=str(INT64_MAX)):
            factorize(INT64_MAX + 1)
        with pytest.raises(OutOfRangeError):
            factorize(0)

    def test_roundtrip_random_63bit(self):
        rng = random.Random(99)
        for _ in range(10_000):
            n = rng.randint(1, INT64_MAX)
            fact = factorize(n)
            acc = 1
            for p, e in fact.factors:
                acc *= p**e
            assert acc == n

    def test_factors_are_prime(self):
        rng = random.Random(3)
        for _ in range(200):
            n = rng.randint(2, INT64_MAX)
            for p, _ in factorize(n).factors:
                assert sympy.isprime(p), (n, p)

    def test_deterministic(self):
        n = 614889782588491410  # primorial-ish composite
        assert factorize(n).factors == factorize(n).factors

    @given(n=st.integers(1, INT64_MAX))
    @settings(max_examples=200)
    def test_roundtrip_property(self, n):
        fact = factorize(n)
        acc = 1
        for p, e in fact.factors:
            acc *= p**e
        assert acc == n

    def test_trace_poly(self):
        for t in (3, 4, 100, 12345):
            assert trace_poly_factorization(t).value == t * t - 4


class TestIsPrime:
    def test_against_sympy(self):
        for n in range(0, 2000):
            assert is_prime(n) == sympy.isprime(n), n
        rng = random.Random(5)
        for _ in range(500):
            n = rng.randint(1, INT64_MAX)
            assert is_prime(n) == sympy.isprime(n), n


class TestFundamentalSplit:
    def test_already_fundamental(self):
        s = fundamental_split(5)
        assert (s.d, s.l) == (5, 1)

    def test_odd_square_part(self):
        s = fundamental_split(45)
        assert (s.d, s.l) == (5, 3)
        assert s.d * s.l**2 == 45
        assert is_fundamental_discriminant(s.d)

    def test_even_kernel(self):
        s = fundamental_split(32)
        assert (s.d, s.l) == (8, 2)
        assert is_fundamental_discriminant(8)

    def test_perfect_square_rejected(self):
        with pytest.raises(ValueError, match="square"):
            fundamental_split(49)

    def test_bad_residue_rejected(self):
        with pytest.raises(ValueError):
            fundamental_split(3)  # 3 mod 4, no split exists

    def test_all_traces_to_1e5(self):
        for t in range(3, 100_001):
            s = fundamental_split_of_trace(t)
            assert s.d * s.l * s.l == t * t - 4
            if t % 9999 == 0 or t < 50:  # full fundamentality check on a subsample
                assert is_fundamental_discriminant(s.d), t


class TestDiscriminantPredicates:
    def test_is_discriminant(self):
        assert is_discriminant(12)
        assert is_discriminant(5)
        assert not is_discriminant(7)
        assert is_discriminant(0)
        assert is_discriminant(-4)
        assert not is_discriminant(-2)

    def test_fundamental(self):
        for d in (5, 8, 12, 13, 17, 21, 24, 28, 29, 33, -3, -4, -7, -8):
            assert is_fundamental_discriminant(d), d
        for d in (1, 9, 25, 45, 20, 32, 48, 4, -12, -9):
            assert not is_fundamental_discriminant(d), d

    def test_order_discriminant(self):
        od = order_discriminant(45)
        assert (od.d, od.f, od.D) == (5, 3, 45)
        with pytest.raises(ValueError):
            order_discriminant(7)


class TestDivisors:
    @pytest.mark.parametrize(
        "n,expected",
        [(1, [1]), (12, [1, 2, 3, 4, 6, 12]), (45, [1, 3, 5, 9, 15, 45])],
    )
    def test_examples(self, n, expected):
        assert divisors(n) == expected

    def test_brute_force(self):
        for n in range(1, 500):
            assert divisors(n) == [d for d in range(1, n + 1) if n % d == 0]


def test_factorization_validates():
    with pytest.raises(ValueError):
        Factorization(10, ((5, 1), (2, 1)))  # primes out of order
    with pytest.raises(ValueError):
        Factorization(10, ((2, 1),))  # does not recompose
