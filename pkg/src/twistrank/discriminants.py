"""Fundamental discriminants and arithmetic-progression families.

A fundamental discriminant is the discriminant of a quadratic field: either
delta ≡ 1 mod 4 and square-free, or delta = 4d with d square-free and
d ≡ 2, 3 mod 4.  The integer 1 is excluded (it is not the discriminant of a
quadratic field).  Families N^±(X, m, N) collect the fundamental discriminants
of one sign below X in a fixed residue class m mod N; the mean of the
3-torsion count over such a family is governed by a congruence condition on
the pair (m, N), checked here clause by clause.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd

from .arith import canonical_residue, factorize, is_squarefree, squarefree_flags

NEGATIVE = "negative"
POSITIVE = "positive"

#: Largest |delta| the scan layers accept; keeps sieves and form enumeration
#: inside comfortably exact int64 territory for the vectorized paths.
MAX_DISCRIMINANT = 10**9


def is_fundamental(delta: int) -> bool:
    """True when delta is the discriminant of a quadratic field."""
    if delta == 1 or delta == 0:
        return False
    r = delta % 4
    if r == 1:
        return is_squarefree(delta)
    if r == 0:
        d = delta // 4
        return d % 4 in (2, 3) and is_squarefree(d)
    return False


@dataclass(frozen=True)
class ProgressionFamily:
    """Fundamental discriminants delta ≡ residue_m mod modulus_n with 0 < |delta| < bound_x.

    The sign field selects N^-(X, m, N) (negative discriminants) or
    N^+(X, m, N).  The residue is canonicalized into [0, N) on construction.
    """

    bound_x: int
    residue_m: int
    modulus_n: int
    sign: str

    def __post_init__(self) -> None:
        if self.bound_x < 1:
            raise ValueError("bound_x must be a positive integer")
        if self.modulus_n < 1:
            raise ValueError("modulus_n must be a positive integer")
        if self.sign not in (NEGATIVE, POSITIVE):
            raise ValueError(f"sign must be {NEGATIVE!r} or {POSITIVE!r}")
        object.__setattr__(
            self, "residue_m", canonical_residue(self.residue_m, self.modulus_n)
        )

    def membership(self, delta: int) -> bool:
        if delta == 0:
            return False
        if self.sign == NEGATIVE and not (-self.bound_x < delta < 0):
            return False
        if self.sign == POSITIVE and not (0 < delta < self.bound_x):
            return False
        if canonical_residue(delta, self.modulus_n) != self.residue_m:
            return False
        return is_fundamental(delta)


def _is_fundamental_flagged(delta: int, flags: bytearray) -> bool:
    """is_fundamental with square-freeness answered by a precomputed sieve."""
    r = delta % 4
    if r == 1:
        return delta != 1 and flags[abs(delta)] == 1
    if r == 0:
        d = delta // 4
        return d % 4 in (2, 3) and flags[abs(d)] == 1
    return False


def enumerate_progression(family: ProgressionFamily) -> list[int]:
    """All members of the family, sorted by absolute value (ascending)."""
    x, m, n = family.bound_x, family.residue_m, family.modulus_n
    if x > MAX_DISCRIMINANT:
        raise ValueError(f"bound_x exceeds the scan limit {MAX_DISCRIMINANT}")
    flags = squarefree_flags(x)
    out = []
    if family.sign == NEGATIVE:
        first = m - n
        for delta in range(first, -x, -n):
            if _is_fundamental_flagged(delta, flags):
                out.append(delta)
    else:
        first = m if m > 0 else n
        for delta in range(first, x, n):
            if _is_fundamental_flagged(delta, flags):
                out.append(delta)
    return out


@dataclass(frozen=True)
class ConditionCheck:
    """Outcome of the mean-value congruence condition, naming the first failing clause."""

    ok: bool
    failing_clause: str | None = field(default=None)

    def __bool__(self) -> bool:
        return self.ok


def condition_star(m: int, n: int) -> ConditionCheck:
    """Congruence condition on (m, N) under which the 3-torsion mean theorems apply.

    Requires for every odd prime p dividing gcd(m, N) that p**2 | N and
    p**2 does not divide m; and when N is even, that either 4 | N with
    m ≡ 1 mod 4, or 16 | N with m ≡ 8 or 12 mod 16.
    """
    if m < 1 or n < 1:
        raise ValueError("m and N must be positive integers")
    g = gcd(m, n)
    for p, _ in factorize(g).factors:
        if p == 2:
            continue
        if n % (p * p) != 0:
            return ConditionCheck(
                False, f"odd prime {p} divides gcd(m, N) but {p}^2 does not divide N"
            )
        if m % (p * p) == 0:
            return ConditionCheck(
                False, f"odd prime {p} divides gcd(m, N) and {p}^2 divides m"
            )
    if n % 2 == 0:
        if n % 4 == 0 and m % 4 == 1:
            return ConditionCheck(True)
        if n % 16 == 0 and m % 16 in (8, 12):
            return ConditionCheck(True)
        return ConditionCheck(
            False,
            "N is even but neither (4 | N with m ≡ 1 mod 4) nor "
            "(16 | N with m ≡ 8, 12 mod 16) holds",
        )
    return ConditionCheck(True)
