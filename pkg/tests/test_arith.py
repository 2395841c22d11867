import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from charscan.arith import (
    SearchExhaustedError,
    build_spf,
    is_prime,
    kronecker,
    liouville,
    sieve_primes,
    smallest_prime_above,
)


# Oracles: trial division only, no shared code with the library.

def trial_primes(limit):
    return [
        n
        for n in range(2, limit + 1)
        if all(n % d for d in range(2, math.isqrt(n) + 1))
    ]


def trial_spf(n):
    for d in range(2, math.isqrt(n) + 1):
        if n % d == 0:
            return d
    return n


def trial_omega(n):
    count, d = 0, 2
    while d * d <= n:
        while n % d == 0:
            n //= d
            count += 1
        d += 1
    return count + (n > 1)


def square_residues(p):
    return {k * k % p for k in range(1, p)}


class TestSievePrimes:
    def test_examples(self):
        assert list(sieve_primes(10)) == [2, 3, 5, 7]
        assert list(sieve_primes(1)) == []
        assert list(sieve_primes(0)) == []
        assert list(sieve_primes(2)) == [2]

    def test_against_trial_division(self):
        assert list(sieve_primes(10**4)) == trial_primes(10**4)
        assert len(sieve_primes(10**4)) == 1229

    def test_negative_rejected(self):
        with pytest.raises(ValueError):
            sieve_primes(-1)


class TestBuildSpf:
    def test_examples(self):
        t = build_spf(100)
        assert t.spf[9] == 3
        assert t.spf[7] == 7
        assert t.spf[91] == 7

    def test_too_small_rejected(self):
        with pytest.raises(ValueError):
            build_spf(1)

    def test_matches_trial_division(self):
        t = build_spf(3000)
        for n in range(2, 3001):
            assert t.spf[n] == trial_spf(n)

    def test_prime_fixed_points_match_sieve(self):
        limit = 5000
        t = build_spf(limit)
        n = np.arange(limit + 1)
        fixed = np.flatnonzero(t.spf == n)
        fixed = fixed[fixed >= 2]
        assert list(fixed) == list(sieve_primes(limit))

    def test_small_factor_or_prime(self):
        t = build_spf(2000)
        for n in range(2, 2001):
            s = int(t.spf[n])
            assert n % s == 0
            assert s * s <= n or s == n

    def test_require(self):
        t = build_spf(50)
        t.require(50)
        with pytest.raises(ValueError):
            t.require(51)

    def test_read_only(self):
        t = build_spf(10)
        with pytest.raises(ValueError):
            t.spf[3] = 9


class TestKronecker:
    def test_examples(self):
        assert kronecker(0, 3) == 0
        assert kronecker(4, 7) == 1
        assert kronecker(3, 7) == -1

    def test_unit_lower_argument(self):
        assert kronecker(5, 1) == 1
        assert kronecker(0, 1) == 1

    def test_invalid_lower_argument(self):
        for n in (0, -3, 2, 10):
            with pytest.raises(ValueError):
                kronecker(1, n)

    def test_euler_criterion_small_primes(self):
        for p in trial_primes(300):
            if p == 2:
                continue
            residues = square_residues(p)
            for a in range(p):
                expected = 0 if a == 0 else (1 if a in residues else -1)
                assert kronecker(a, p) == expected

    @given(st.integers(-10**6, 10**6), st.integers(-10**6, 10**6),
           st.integers(0, 10**4))
    def test_multiplicative_in_top(self, a, b, k):
        n = 2 * k + 1
        assert kronecker(a * b, n) == kronecker(a, n) * kronecker(b, n)

    @given(st.integers(-10**9, 10**9), st.integers(0, 10**4))
    def test_periodic_in_top(self, a, k):
        n = 2 * k + 1
        assert kronecker(a, n) == kronecker(a % n, n)


class TestLiouville:
    def test_examples(self):
        lam = liouville(12)
        assert lam[0] == 1
        assert lam[1] == -1
        assert lam[3] == 1
        assert lam[11] == -1

    def test_limit_one(self):
        assert list(liouville(1)) == [1]

    def test_bad_limit(self):
        with pytest.raises(ValueError):
            liouville(0)

    def test_against_omega_oracle(self):
        lam = liouville(2000)
        for n in range(1, 2001):
            assert lam[n - 1] == (-1) ** trial_omega(n)

    def test_completely_multiplicative(self):
        limit = 400
        lam = liouville(limit)
        for m in range(1, limit + 1):
            for n in range(1, limit // m + 1):
                assert lam[m * n - 1] == lam[m - 1] * lam[n - 1]


class TestSmallestPrimeAbove:
    def test_examples(self):
        assert smallest_prime_above(2, 3, 4) == 3
        assert smallest_prime_above(20, 3, 4) == 23
        assert smallest_prime_above(3, 3, 4) == 7  # strict bound excludes 3

    def test_non_coprime_rejected(self):
        with pytest.raises(ValueError):
            smallest_prime_above(10, 2, 4)

    def test_exhaustion_is_distinct(self):
        with pytest.raises(SearchExhaustedError):
            smallest_prime_above(100, 3, 4, search_ceiling=102)

    def test_against_enumeration(self):
        primes = trial_primes(10**4)
        for bound in (1, 2, 9.5, 50, 977, 1000):
            for residue, modulus in ((1, 4), (3, 4), (1, 2), (2, 3)):
                expected = next(
                    p for p in primes if p > bound and p % modulus == residue
                )
                assert smallest_prime_above(bound, residue, modulus) == expected


class TestIsPrime:
    def test_against_trial_division(self):
        truth = set(trial_primes(5000))
        for n in range(5001):
            assert is_prime(n) == (n in truth)
