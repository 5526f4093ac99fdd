"""Family statistics for quadratic twists: exact constants and empirical scans.

The theoretical side is exact rational arithmetic: the mean-to-proportion
rearrangement factor (3**(k+1) - 2)/(3**(k+1) - 1), the family density
constant (1/8) * prod_{p | A} p/((p-1)(p+1)), their product (a certified
asymptotic lower bound for the density of twists with rank <= 2k), and the
asymptotic average-dimension bounds 1 (A > 0) and 4/3 (A < 0).  The
empirical side scans a twist family, aggregates 3-ranks into certified
proportions and averages, and checks the correspondence D -> -4*A*D against
the progression family it is in bijection with.
"""

from __future__ import annotations

import multiprocessing
import warnings
from dataclasses import dataclass
from fractions import Fraction

from .arith import count_squarefree, squarefree_flags
from .classgroup import class_group_summary, summary_from_counts
from .discriminants import (
    NEGATIVE,
    POSITIVE,
    ProgressionFamily,
    condition_star,
    enumerate_progression,
)
from .selmer import StollCase, TwistRecord, twist_record, validate_coefficient

ClassData = dict[int, tuple[int, int]]


class EmptyFamilyError(ValueError):
    """The requested scan bound admits no twist parameters."""


def low_rank_factor(k: int) -> Fraction:
    """Asymptotic lower bound for the proportion of discriminants with 3-rank <= k,
    given that the mean of the 3-torsion count is 2: (3**(k+1) - 2)/(3**(k+1) - 1)."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    return proportion_bound_from_mean(Fraction(2), k)


def proportion_bound_from_mean(mean_bound: Fraction, k: int) -> Fraction:
    """Rearrangement bound: values are 1, 3, 9, ... so a mean <= B forces at least
    a (3**(k+1) - B)/(3**(k+1) - 1) fraction of values <= 3**k."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    b = Fraction(mean_bound)
    cutoff = 3 ** (k + 1)
    return Fraction(cutoff - b, cutoff - 1)


def _family_case(a: int) -> StollCase:
    case = validate_coefficient(a)
    if case.uses_sqrt_3a:
        raise ValueError(
            f"A = {a} is in the direct-evaluation case (A ≡ 13 mod 36); "
            "family statistics cover A ≡ 1, 25 mod 36 only"
        )
    return case


def density_constant(a: int) -> Fraction:
    """Asymptotic density of the twist family inside the square-free integers:
    (1/8) * prod over primes p | A of p / ((p - 1) * (p + 1)), exactly."""
    _family_case(a)
    from .arith import factorize

    out = Fraction(1, 8)
    for p, _ in factorize(a).factors:
        out *= Fraction(p, (p - 1) * (p + 1))
    return out


def certified_density_bound(a: int, k: int) -> Fraction:
    """Certified asymptotic lower bound for the density, among all square-free
    integers, of twist parameters whose curve gets rank bound <= 2k."""
    return low_rank_factor(k) * density_constant(a)


def average_dimension_bound(a: int) -> Fraction:
    """Asymptotic upper bound for the family-average Selmer dimension: 1 for
    A > 0 (even branch), 4/3 for A < 0 (odd branch)."""
    _family_case(a)
    return Fraction(1) if a > 0 else Fraction(4, 3)


# ---------------------------------------------------------------------------
# Scans


def scan_parameters(a: int, x: int) -> list[int]:
    """Twist parameters D for the family at bound X: square-free D ≡ 1 mod 12|A|
    with 0 < D < X/(4|A|); equivalently the D with -4*A*D in the progression
    family the correspondence maps onto."""
    _family_case(a)
    if x < 1:
        raise ValueError("X must be a positive integer")
    d_max = (x - 1) // (4 * abs(a))
    if d_max < 1:
        return []
    flags = squarefree_flags(d_max)
    return [d for d in range(1, d_max + 1, 12 * abs(a)) if flags[d]]


def _class_worker(delta: int) -> tuple[int, int, int]:
    s = class_group_summary(delta)
    return delta, s.class_number, s.three_torsion


def compute_class_data(deltas: list[int], jobs: int = 1) -> ClassData:
    """Class number and 3-torsion for each discriminant, optionally in parallel.

    The result does not depend on jobs; partitioning only affects wall time.
    """
    if jobs < 1:
        raise ValueError("jobs must be a positive integer")
    todo = sorted(set(deltas))
    if jobs == 1 or len(todo) < 8:
        return {d: (h, t) for d, h, t in map(_class_worker, todo)}
    chunk = max(1, len(todo) // (jobs * 8))
    with multiprocessing.Pool(jobs) as pool:
        return {
            d: (h, t)
            for d, h, t in pool.imap_unordered(_class_worker, todo, chunksize=chunk)
        }


@dataclass(frozen=True)
class FamilyReport:
    """Aggregated scan output with exact rational statistics."""

    a: int
    x: int
    k: int
    family_size: int
    squarefree_count: int
    h3_mean: Fraction
    avg_selmer_dim: Fraction
    certified_proportion_per_k: dict[int, Fraction]
    certified_proportion_within_family: dict[int, Fraction]
    theoretical: dict[str, Fraction]

    def to_json_dict(self) -> dict:
        return {
            "A": self.a,
            "X": self.x,
            "k": self.k,
            "family_size": self.family_size,
            "squarefree_count": self.squarefree_count,
            "h3_mean": _rational_json(self.h3_mean),
            "avg_selmer_dim": _rational_json(self.avg_selmer_dim),
            "certified_proportion_per_k": {
                str(kk): _rational_json(v)
                for kk, v in sorted(self.certified_proportion_per_k.items())
            },
            "certified_proportion_within_family": {
                str(kk): _rational_json(v)
                for kk, v in sorted(self.certified_proportion_within_family.items())
            },
            "theoretical": {
                name: _rational_json(v) for name, v in sorted(self.theoretical.items())
            },
        }


@dataclass(frozen=True)
class ScanResult:
    report: FamilyReport
    records: list[TwistRecord]
    class_data: ClassData
    new_class_data: ClassData


def _rational_json(fr: Fraction) -> dict:
    return {"exact": f"{fr.numerator}/{fr.denominator}", "float": render_float(fr)}


def render_float(value) -> float:
    """Floats are rendered to 12 significant digits, round-tripped exactly."""
    return float(f"{float(value):.12g}")


def scan_family(
    a: int, x: int, *, k: int = 0, jobs: int = 1, class_data: ClassData | None = None
) -> ScanResult:
    """Scan the twist family of A up to X and aggregate certified statistics.

    class_data may carry previously computed (h, three_torsion) pairs keyed by
    discriminant; anything missing is computed (in parallel when jobs > 1)
    and reported back in new_class_data.
    """
    if k < 0:
        raise ValueError("k must be nonnegative")
    params = scan_parameters(a, x)
    if not params:
        raise EmptyFamilyError(
            f"no twist parameters below X/(4|A|) = {x}/{4 * abs(a)}; raise X"
        )
    deltas = [-4 * a * d for d in params]
    supplied = dict(class_data) if class_data else {}
    missing = [delta for delta in deltas if delta not in supplied]
    fresh = compute_class_data(missing, jobs=jobs)
    data = {**supplied, **fresh}
    records = []
    for d, delta in zip(params, deltas):
        h, torsion = data[delta]
        records.append(
            twist_record(a, d, summary=summary_from_counts(delta, h, torsion))
        )
    n = len(records)
    d_max = (x - 1) // (4 * abs(a))
    squarefree_count = count_squarefree(d_max + 1)
    ranks = [(rec.selmer_dim - rec.case.dimension_parity) // 2 for rec in records]
    h3_mean = Fraction(sum(3**r for r in ranks), n)
    avg_dim = Fraction(sum(rec.selmer_dim for rec in records), n)
    k_hi = max(k, max(ranks) + (0 if a > 0 else 1))
    per_k: dict[int, Fraction] = {}
    within: dict[int, Fraction] = {}
    for kk in range(k_hi + 1):
        certified = sum(1 for rec in records if rec.rank_bound <= 2 * kk)
        per_k[kk] = Fraction(certified, squarefree_count)
        within[kk] = Fraction(certified, n)
    report = FamilyReport(
        a=a,
        x=x,
        k=k,
        family_size=n,
        squarefree_count=squarefree_count,
        h3_mean=h3_mean,
        avg_selmer_dim=avg_dim,
        certified_proportion_per_k=per_k,
        certified_proportion_within_family=within,
        theoretical={
            "low_rank_factor": low_rank_factor(k),
            "density_constant": density_constant(a),
            "certified_density_bound": certified_density_bound(a, k),
            "average_dimension_bound": average_dimension_bound(a),
        },
    )
    used = {delta: data[delta] for delta in deltas}
    return ScanResult(
        report=report, records=records, class_data=used, new_class_data=fresh
    )


# ---------------------------------------------------------------------------
# Progression means and the correspondence


def nh_mean(
    family: ProgressionFamily, *, jobs: int = 1, class_data: ClassData | None = None
) -> Fraction:
    """Exact mean of the 3-torsion count over a progression family.

    Warns when the congruence condition on (m, N) fails, since the mean-value
    theorems do not apply there.
    """
    check = condition_star(family.residue_m, family.modulus_n)
    if not check:
        warnings.warn(
            f"condition on (m, N) fails ({check.failing_clause}); "
            "the 3-torsion mean theorems do not cover this family",
            stacklevel=2,
        )
    deltas = enumerate_progression(family)
    if not deltas:
        raise EmptyFamilyError("the progression family is empty below the bound")
    supplied = dict(class_data) if class_data else {}
    missing = [d for d in deltas if d not in supplied]
    data = {**supplied, **compute_class_data(missing, jobs=jobs)}
    return Fraction(sum(data[d][1] for d in deltas), len(deltas))


def correspondence_check(a: int, x: int) -> bool:
    """Verify D -> -4*A*D maps the twist parameters bijectively onto the
    progression family of discriminants ≡ m mod 48*A**2 below X, where
    m = 48*A**2 - 4*A for A > 0 and m = -4*A for A < 0."""
    _family_case(a)
    params = scan_parameters(a, x)
    m = 48 * a * a - 4 * a if a > 0 else -4 * a
    family = ProgressionFamily(
        x, m, 48 * a * a, NEGATIVE if a > 0 else POSITIVE
    )
    image = {-4 * a * d for d in params}
    if len(image) != len(params):
        return False
    return image == set(enumerate_progression(family))


# ---------------------------------------------------------------------------
# Rearrangement check and average-dimension report


@dataclass(frozen=True)
class RearrangementCheck:
    sample_mean: Fraction
    small_fraction: Fraction
    bound: Fraction
    holds: bool


def rearrangement_check(values, mean_bound, k: int) -> RearrangementCheck:
    """Finite-sample rearrangement inequality for lists of 3-power values.

    Whenever the sample mean is <= mean_bound, the fraction of values <= 3**k
    must be at least (3**(k+1) - mean_bound)/(3**(k+1) - 1); a sample mean
    above the target makes the claim vacuous.
    """
    values = list(values)
    if not values:
        raise ValueError("values must be nonempty")
    for v in values:
        t = v
        while t % 3 == 0:
            t //= 3
        if t != 1 or v < 1:
            raise ValueError(f"value {v} is not a positive power of 3")
    mean = Fraction(sum(values), len(values))
    small = Fraction(sum(1 for v in values if v <= 3**k), len(values))
    bound = proportion_bound_from_mean(mean_bound, k)
    holds = mean > mean_bound or small >= bound
    return RearrangementCheck(
        sample_mean=mean, small_fraction=small, bound=bound, holds=holds
    )


@dataclass(frozen=True)
class AverageDimensionReport:
    a: int
    x: int
    family_size: int
    avg_selmer_dim: Fraction
    asymptotic_bound: Fraction
    per_sample_inequality_ok: bool


def average_dimension_report(
    a: int, x: int, *, jobs: int = 1, class_data: ClassData | None = None,
    scan: ScanResult | None = None,
) -> AverageDimensionReport:
    """Family-average Selmer dimension against its asymptotic bound.

    Also verifies, sample by sample, that twice the 3-rank never exceeds
    (3-torsion count) - 1, the inequality the asymptotic bound rests on.
    """
    if scan is None:
        scan = scan_family(a, x, jobs=jobs, class_data=class_data)
    ok = True
    for rec in scan.records:
        rank = (rec.selmer_dim - rec.case.dimension_parity) // 2
        if 2 * rank > 3**rank - 1:
            ok = False
    return AverageDimensionReport(
        a=a,
        x=x,
        family_size=scan.report.family_size,
        avg_selmer_dim=scan.report.avg_selmer_dim,
        asymptotic_bound=average_dimension_bound(a),
        per_sample_inequality_ok=ok,
    )
