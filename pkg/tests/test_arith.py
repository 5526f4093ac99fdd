"""Tests for integer arithmetic: factorization, square-free sieves, Kronecker.

Oracles are deliberately naive re-implementations: trial division for
factorization and primality, divisor-square scans for square-freeness, and
Euler's criterion for quadratic residues.
"""

import math

import pytest

from twistrank.arith import (
    canonical_residue,
    count_squarefree,
    factorize,
    is_perfect_cube,
    is_perfect_square,
    is_prime,
    is_squarefree,
    kronecker,
    squarefree_flags,
    squarefree_part,
    xgcd,
)


def naive_is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % d for d in range(2, math.isqrt(n) + 1))


def naive_factor(n: int) -> dict:
    out = {}
    m = abs(n)
    d = 2
    while d * d <= m:
        while m % d == 0:
            out[d] = out.get(d, 0) + 1
            m //= d
        d += 1
    if m > 1:
        out[m] = out.get(m, 0) + 1
    return out


def naive_squarefree(n: int) -> bool:
    m = abs(n)
    return m > 0 and all(m % (d * d) for d in range(2, math.isqrt(m) + 1))


def euler_legendre(a: int, p: int) -> int:
    """Legendre symbol for odd prime p via Euler's criterion."""
    r = pow(a % p, (p - 1) // 2, p)
    return r - p if r == p - 1 else r


# ---------------------------------------------------------------------------
# Primality and factorization


def test_is_prime_matches_trial_division_below_10000():
    for n in range(-3, 10000):
        assert is_prime(n) == naive_is_prime(n), n


@pytest.mark.parametrize(
    "n,expected",
    [
        (2**61 - 1, True),  # Mersenne prime
        (2**61 + 1, False),
        (561, False),  # Carmichael number
        (1000000007, True),
        (10**18 + 9, True),
        (10**18 + 7, False),
    ],
)
def test_is_prime_large_known_values(n, expected):
    assert is_prime(n) is expected


def test_factorize_frozen_examples():
    assert str(factorize(60)) == "1 * 2^2 * 3 * 5"
    f = factorize(-35)
    assert f.sign == -1 and f.factors == ((5, 1), (7, 1))
    assert str(f) == "-1 * 5 * 7"
    assert factorize(1).factors == () and factorize(1).sign == 1
    assert factorize(-1).sign == -1


def test_factorize_rejects_zero():
    with pytest.raises(ValueError):
        factorize(0)


def test_factorize_matches_naive_oracle():
    for n in list(range(1, 600)) + list(range(-600, 0)) + [2**31 - 1, 3 * 5 * 7 * 11 * 13]:
        f = factorize(n)
        assert dict(f.factors) == naive_factor(n), n
        assert f.sign == (1 if n > 0 else -1)
        prod = f.sign
        for p, e in f.factors:
            assert is_prime(p)
            prod *= p**e
        assert prod == n


def test_factorize_semiprime_beyond_trial_bound():
    p, q = 1000003, 1000033
    f = factorize(p * q)
    assert f.factors == ((p, 1), (q, 1))


def test_prime_support():
    assert factorize(60).prime_support() == (2, 3, 5)
    assert factorize(-35).prime_support() == (5, 7)


# ---------------------------------------------------------------------------
# Square-free machinery


def test_squarefree_part_matches_naive():
    for n in list(range(-400, 0)) + list(range(1, 400)):
        part = squarefree_part(n)
        assert naive_squarefree(part)
        q = n // part
        assert q > 0 and is_perfect_square(q)
        assert part * q == n


def test_is_squarefree_matches_naive():
    for n in range(-500, 500):
        if n == 0:
            continue
        assert is_squarefree(n) == naive_squarefree(n), n


def test_squarefree_flags_matches_naive():
    flags = squarefree_flags(300)
    for n in range(1, 301):
        assert bool(flags[n]) == naive_squarefree(n), n


def test_count_squarefree_frozen_values():
    assert count_squarefree(2) == 1
    assert count_squarefree(11) == 7
    assert count_squarefree(10001) == 6083
    # 6/pi^2 * 10^6 = 607927.1...; the exact strict count n < 10^6
    assert count_squarefree(10**6) == 607926


def test_count_squarefree_is_strict_upper_bound():
    # 10 = 2 * 5 is square-free, so the strict count jumps at 11, not at 10
    assert count_squarefree(10) == count_squarefree(9)
    assert count_squarefree(11) == count_squarefree(10) + 1


# ---------------------------------------------------------------------------
# Kronecker symbol


def test_kronecker_matches_euler_criterion_at_odd_primes():
    primes = [p for p in range(3, 200) if naive_is_prime(p)]
    for p in primes:
        for a in range(-50, 51):
            assert kronecker(a, p) == euler_legendre(a, p), (a, p)


def test_kronecker_frozen_examples():
    assert kronecker(-4, 5) == 1
    assert kronecker(-23, 5) == -1
    assert kronecker(-23, 1) == 1


def test_kronecker_completely_multiplicative_in_bottom():
    for a in (-23, -4, 5, 12, -35):
        for m in range(1, 40):
            for n in range(1, 40):
                assert kronecker(a, m * n) == kronecker(a, m) * kronecker(a, n)


def test_kronecker_special_cases():
    assert kronecker(1, 0) == 1
    assert kronecker(-1, 0) == 1
    assert kronecker(2, 0) == 0
    assert kronecker(0, 3) == 0
    assert kronecker(0, 1) == 1
    assert kronecker(2, 2) == 0
    # (a/2) for odd a depends on a mod 8
    assert kronecker(7, 2) == 1
    assert kronecker(3, 2) == -1
    # (a/-1) is the sign character
    assert kronecker(-5, -1) == -1
    assert kronecker(5, -1) == 1


def test_kronecker_periodicity_of_discriminant_character():
    """chi(n) = (delta/n) has period |delta| for a fundamental discriminant."""
    for delta in (-23, -4, -52, 140, 229):
        for n in range(1, 120):
            assert kronecker(delta, n) == kronecker(delta, n + abs(delta))


# ---------------------------------------------------------------------------
# Small helpers


def test_perfect_powers():
    squares = {n * n for n in range(60)}
    cubes = {n**3 for n in range(-40, 40)}
    for n in range(-3000, 3000):
        assert is_perfect_square(n) == (n in squares)
        assert is_perfect_cube(n) == (n in cubes)


def test_xgcd_bezout_identity():
    for a in range(-120, 120, 7):
        for b in range(-120, 120, 11):
            g, x, y = xgcd(a, b)
            assert g == math.gcd(a, b)
            assert a * x + b * y == g


def test_canonical_residue():
    assert canonical_residue(-35, 36) == 1
    assert canonical_residue(-23, 36) == 13
    assert canonical_residue(7, 4) == 3
    with pytest.raises(ValueError):
        canonical_residue(5, 0)
