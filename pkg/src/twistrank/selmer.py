"""Selmer dimensions and rank bounds for twists of Mordell curves y**2 = x**3 - A.

For coefficients A with -A ≡ 2 mod 3 whose curve satisfies the right local
conditions, the F_3-dimension of the isogeny Selmer group is an explicit
affine function of the 3-rank of one quadratic field: Q(sqrt(-A)) when
-A ≡ 2, 8 mod 9, and Q(sqrt(3A)) when -A ≡ 5 mod 9, with parity decided by
the sign of A.  The dimension bounds rank E(Q).  Quadratic twists by D
replace A with A*D**3; D ≡ 1 mod 12 keeps every hypothesis intact and moves
the field to Q(sqrt(-A*D)).  Cubic twists replace A with A*D**2 and leave
the field, hence the dimension, unchanged.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from math import gcd

from .arith import (
    canonical_residue,
    factorize,
    is_perfect_cube,
    is_perfect_square,
    is_squarefree,
)
from .classgroup import ClassGroupSummary, class_group_summary


class ValidationError(ValueError):
    """Input outside the formula's reach; the message names the failing clause."""


class StollCase(Enum):
    """Which branch of the dimension formula applies, by -A mod 9 and sign of A."""

    NEG2_8_A_NEG = "NEG2_8_A_NEG"  # -A ≡ 2, 8 mod 9, A < 0: dim = 1 + 2*r3(Q(sqrt(-A)))
    NEG2_8_A_POS = "NEG2_8_A_POS"  # -A ≡ 2, 8 mod 9, A > 0: dim = 2*r3(Q(sqrt(-A)))
    NEG5_A_NEG = "NEG5_A_NEG"      # -A ≡ 5 mod 9, A < 0: dim = 2*r3(Q(sqrt(3A)))
    NEG5_A_POS = "NEG5_A_POS"      # -A ≡ 5 mod 9, A > 0: dim = 1 + 2*r3(Q(sqrt(3A)))

    @property
    def dimension_parity(self) -> int:
        return 1 if self in (StollCase.NEG2_8_A_NEG, StollCase.NEG5_A_POS) else 0

    @property
    def uses_sqrt_3a(self) -> bool:
        return self in (StollCase.NEG5_A_NEG, StollCase.NEG5_A_POS)


#: Residues mod 36 with -A ≡ 2, 8 mod 9 (the family pipeline's cases).
FAMILY_RESIDUES = (1, 25)
#: Residue mod 36 with -A ≡ 5 mod 9 (recognized for direct evaluation only).
DIRECT_ONLY_RESIDUE = 13


def validate_coefficient(a: int) -> StollCase:
    """Classify a Mordell coefficient, rejecting anything outside the formula."""
    if a == 0:
        raise ValidationError("A must be nonzero")
    if not is_squarefree(a):
        raise ValidationError(f"A = {a} is not square-free")
    r = canonical_residue(a, 36)
    if r in FAMILY_RESIDUES:
        return StollCase.NEG2_8_A_POS if a > 0 else StollCase.NEG2_8_A_NEG
    if r == DIRECT_ONLY_RESIDUE:
        return StollCase.NEG5_A_POS if a > 0 else StollCase.NEG5_A_NEG
    raise ValidationError(
        f"A = {a} has A mod 36 = {r}; need 1 or 25 (family cases) or 13 (direct case)"
    )


def validate_twist_pair(a: int, d: int) -> StollCase:
    """Accept a quadratic twist parameter D for the coefficient A."""
    case = validate_coefficient(a)
    if d < 1:
        raise ValidationError("D must be a positive integer")
    if canonical_residue(d, 12) != 1:
        raise ValidationError(f"D = {d} is not ≡ 1 mod 12")
    if not is_squarefree(d):
        raise ValidationError(f"D = {d} is not square-free")
    if gcd(a, d) != 1:
        raise ValidationError(f"D = {d} shares the factor {gcd(a, d)} with A = {a}")
    return case


def _squarefree_radicand(a: int, d: int, d_exponent: int) -> int:
    """Square-free part of -A * D**d_exponent, computed from the factorizations.

    A and D are square-free and coprime, so the kernel must come out to
    -A * D (odd exponent) or -A (even exponent); the identity is recomputed
    from prime exponents and asserted rather than assumed.
    """
    exponents: dict[int, int] = {}
    for p, e in factorize(a).factors:
        exponents[p] = exponents.get(p, 0) + e
    for p, e in factorize(d).factors:
        exponents[p] = exponents.get(p, 0) + e * d_exponent
    kernel = -1 if a > 0 else 1
    for p, e in sorted(exponents.items()):
        if e % 2 == 1:
            kernel *= p
    expected = -a * d if d_exponent % 2 == 1 else -a
    if kernel != expected:
        raise ArithmeticError(
            f"square-free kernel of -({a})*({d})^{d_exponent} came out {kernel}, "
            f"expected {expected}"
        )
    return kernel


def _field_discriminant(radicand: int) -> int:
    """Discriminant of Q(sqrt(radicand)) for a square-free radicand."""
    return radicand if canonical_residue(radicand, 4) == 1 else 4 * radicand


def twist_field_discriminant(a: int, d: int) -> int:
    """Discriminant of the quadratic field attached to the twist E_D: y^2 = x^3 - A*D^3."""
    case = validate_twist_pair(a, d)
    radicand = _squarefree_radicand(a, d, 3)
    if case.uses_sqrt_3a:
        radicand = -3 * radicand
    return _field_discriminant(radicand)


def _dimension_from_summary(case: StollCase, summary: ClassGroupSummary) -> int:
    return case.dimension_parity + 2 * summary.three_rank


def selmer_dimension(a: int, d: int, *, summary: ClassGroupSummary | None = None) -> int:
    """F_3-dimension of the isogeny Selmer group of y**2 = x**3 - A*D**3.

    A precomputed ClassGroupSummary for the twist's field discriminant may be
    supplied to avoid recomputing the class group; it is checked against the
    expected discriminant.
    """
    case = validate_twist_pair(a, d)
    delta = twist_field_discriminant(a, d)
    if summary is None:
        summary = class_group_summary(delta)
    elif summary.delta != delta:
        raise ValueError(f"summary is for delta = {summary.delta}, expected {delta}")
    return _dimension_from_summary(case, summary)


def cubic_twist_selmer_dimension(a: int, d: int) -> int:
    """Selmer dimension of the cubic twist y**2 = x**3 - A*D**2 for D ≡ 1 mod 9.

    The field Q(sqrt(-A*D**2)) equals Q(sqrt(-A)), so the dimension matches
    the untwisted curve's; the kernel normalization computes that collapse
    honestly rather than assuming it.
    """
    case = validate_coefficient(a)
    if d < 1:
        raise ValidationError("D must be a positive integer")
    if canonical_residue(d, 9) != 1:
        raise ValidationError(f"D = {d} is not ≡ 1 mod 9")
    if d % 2 == 0:
        raise ValidationError(f"D = {d} must be odd so that A*D^2 stays 1 mod 12")
    if not is_squarefree(d):
        raise ValidationError(f"D = {d} is not square-free")
    if gcd(a, d) != 1:
        raise ValidationError(f"D = {d} shares the factor {gcd(a, d)} with A = {a}")
    radicand = _squarefree_radicand(a, d, 2)
    if case.uses_sqrt_3a:
        radicand = -3 * radicand
    return _dimension_from_summary(case, class_group_summary(_field_discriminant(radicand)))


def torsion_is_trivial(b: int) -> bool:
    """One-sided certificate that y**2 = x**3 + B has trivial rational torsion.

    True certifies triviality (B outside {-432, 1}, not a cube, not a
    square); False is inconclusive, not a claim of nontrivial torsion.
    """
    if b == 0:
        raise ValueError("B must be nonzero (the curve must be nonsingular)")
    if b in (-432, 1):
        return False
    if is_perfect_cube(b):
        return False
    if is_perfect_square(b):
        return False
    return True


@dataclass(frozen=True)
class TwistRecord:
    """Certified data for one quadratic twist y**2 = x**3 - A*D**3."""

    a: int
    d: int
    twisted_coefficient: int
    field_discriminant: int
    case: StollCase
    selmer_dim: int
    rank_bound: int
    torsion_trivial: bool

    def to_json_dict(self) -> dict:
        return {
            "A": self.a,
            "D": self.d,
            "delta": self.field_discriminant,
            "case": self.case.value,
            "selmer_dim": self.selmer_dim,
            "rank_bound": self.rank_bound,
            "torsion_trivial": self.torsion_trivial,
        }


def twist_record(a: int, d: int, *, summary: ClassGroupSummary | None = None) -> TwistRecord:
    """Full certified record for the pair (A, D): dimension, rank bound, torsion flag."""
    case = validate_twist_pair(a, d)
    delta = twist_field_discriminant(a, d)
    if summary is None:
        summary = class_group_summary(delta)
    elif summary.delta != delta:
        raise ValueError(f"summary is for delta = {summary.delta}, expected {delta}")
    dim = _dimension_from_summary(case, summary)
    return TwistRecord(
        a=a,
        d=d,
        twisted_coefficient=-a * d**3,
        field_discriminant=delta,
        case=case,
        selmer_dim=dim,
        rank_bound=dim,
        torsion_trivial=torsion_is_trivial(-a * d**3),
    )
