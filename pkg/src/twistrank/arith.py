"""Exact integer arithmetic kernel.

Everything here works on arbitrary-precision Python integers: deterministic
primality testing, factorization by trial division plus Pollard rho, the full
Kronecker symbol, canonical residues, and square-free sieves.  These are the
primitives the discriminant and class group layers are built on.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import gcd, isqrt

TRIAL_DIVISION_BOUND = 10**6

# Deterministic Miller-Rabin witness set, proved sufficient for n < 3.3 * 10**24
# (so in particular for every n < 2**64).
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin primality test (exact for n < 2**64)."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _pollard_rho(n: int) -> int:
    """Brent-cycle Pollard rho: a nontrivial factor of an odd composite n.

    The polynomial constant is swept deterministically, so repeated runs
    factor the same n the same way.
    """
    if n % 2 == 0:
        return 2
    for c in range(1, 100):
        y, r, q, g = 2, 1, 1, 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(128, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = gcd(q, n)
                k += 128
            r *= 2
        if g == n:
            g = 1
            y = ys
            while g == 1:
                y = (y * y + c) % n
                g = gcd(abs(x - y), n)
        if g != n:
            return g
    raise ArithmeticError(f"pollard rho failed on {n}")


@dataclass(frozen=True)
class Factorization:
    """Signed prime factorization: value = sign * prod(p**e)."""

    value: int
    sign: int
    factors: tuple[tuple[int, int], ...]

    def __str__(self) -> str:
        parts = [f"{p}^{e}" if e > 1 else str(p) for p, e in self.factors]
        head = "-1" if self.sign < 0 else "1"
        return " * ".join([head] + parts) if parts else head

    def prime_support(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.factors)


def factorize(n: int) -> Factorization:
    """Complete signed factorization of a nonzero integer.

    Trial division up to 10**6, then deterministic Miller-Rabin plus Pollard
    rho on whatever survives, so results are exact and reproducible.
    """
    if n == 0:
        raise ValueError("0 has no prime factorization")
    sign = -1 if n < 0 else 1
    m = abs(n)
    powers: dict[int, int] = {}

    def _account(p: int) -> None:
        powers[p] = powers.get(p, 0) + 1

    for p in (2, 3, 5):
        while m % p == 0:
            _account(p)
            m //= p
    i = 7
    while i <= TRIAL_DIVISION_BOUND and i * i <= m:
        while m % i == 0:
            _account(i)
            m //= i
        i += 2
    if m > 1:
        stack = [m]
        while stack:
            v = stack.pop()
            if v == 1:
                continue
            if is_prime(v):
                _account(v)
                continue
            root = isqrt(v)
            if root * root == v:
                stack.extend((root, root))
                continue
            d = _pollard_rho(v)
            stack.extend((d, v // d))
    factors = tuple(sorted(powers.items()))
    assert sign * _product(factors) == n
    return Factorization(value=n, sign=sign, factors=factors)


def _product(factors: tuple[tuple[int, int], ...]) -> int:
    out = 1
    for p, e in factors:
        out *= p**e
    return out


def squarefree_part(n: int) -> int:
    """Square-free kernel of n, keeping the sign: product of primes with odd exponent."""
    fac = factorize(n)
    out = fac.sign
    for p, e in fac.factors:
        if e % 2 == 1:
            out *= p
    return out


def is_squarefree(n: int) -> bool:
    """True when no prime square divides n (sign ignored, n != 0)."""
    if n == 0:
        return False
    m = abs(n)
    if m % 4 == 0 or m % 9 == 0 or m % 25 == 0:
        return False
    return all(e == 1 for _, e in factorize(m).factors)


def kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a | n), the full extension to all integer pairs."""
    if n == 0:
        return 1 if a in (1, -1) else 0
    result = 1
    if n < 0:
        n = -n
        if a < 0:
            result = -result
    t = 0
    while n % 2 == 0:
        n //= 2
        t += 1
    if t:
        if a % 2 == 0:
            return 0
        if t % 2 == 1 and a % 8 in (3, 5):
            result = -result
    # Jacobi symbol on the remaining odd positive n via reciprocity.
    a %= n
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def canonical_residue(n: int, modulus: int) -> int:
    """Representative of n mod modulus inside [0, modulus)."""
    if modulus < 1:
        raise ValueError("modulus must be a positive integer")
    return n % modulus


@lru_cache(maxsize=8)
def squarefree_flags(limit: int) -> bytearray:
    """Bitmap over 0..limit: flags[n] == 1 exactly when n is square-free.

    Treat the returned buffer as read-only; it is cached and shared.
    """
    if limit < 0:
        raise ValueError("limit must be nonnegative")
    flags = bytearray(b"\x01" * (limit + 1))
    flags[0:1] = b"\x00"
    d = 2
    while d * d <= limit:
        step = d * d
        flags[step :: step] = bytes((limit - step) // step + 1)
        d += 1
    return flags


def count_squarefree(x: int) -> int:
    """Number of square-free integers n with 0 < n < x."""
    if x <= 1:
        return 0
    return sum(squarefree_flags(x - 1))


def is_perfect_square(n: int) -> bool:
    if n < 0:
        return False
    r = isqrt(n)
    return r * r == n


def is_perfect_cube(n: int) -> bool:
    m = abs(n)
    r = round(m ** (1.0 / 3.0)) if m else 0
    while r**3 > m:
        r -= 1
    while (r + 1) ** 3 <= m:
        r += 1
    return r**3 == m


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Extended gcd: (g, x, y) with g = gcd(a, b) >= 0 and a*x + b*y = g."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t
