"""Class groups of quadratic fields through binary quadratic forms.

For delta < 0 the class group is realized by the unique reduced positive
definite forms; for delta > 0 the narrow class group is realized by
rho-cycles of reduced indefinite forms (the narrow and ordinary groups share
their odd part, which is all the 3-rank machinery consumes).  Composition is
Dirichlet's, 3-torsion is counted by cubing every class, and two independent
oracles cross-check the enumeration: the exact finite character sum behind
the analytic class number formula, and elementary divisors recovered from a
brute-force composition table.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd, isqrt
from typing import NamedTuple

import numpy as np

from .arith import factorize, kronecker, xgcd
from .discriminants import MAX_DISCRIMINANT, is_fundamental


class Form(NamedTuple):
    """Integral binary quadratic form a*x**2 + b*x*y + c*y**2."""

    a: int
    b: int
    c: int

    def discriminant(self) -> int:
        return self.b * self.b - 4 * self.a * self.c

    def content(self) -> int:
        return gcd(gcd(abs(self.a), abs(self.b)), abs(self.c))


@dataclass(frozen=True)
class ClassGroupSummary:
    """Class number and 3-torsion data for one fundamental discriminant.

    class_number is the narrow class number when delta > 0; three_torsion is
    the number of classes killed by cubing, always a power of 3.
    """

    delta: int
    class_number: int
    three_torsion: int
    three_rank: int


class ExtraUnitsDiscriminant(ValueError):
    """delta in {-3, -4}: the unit group exceeds {1, -1}; h = 1 is known."""

    def __init__(self, delta: int):
        super().__init__(f"delta = {delta} has extra units; class number is 1")
        self.delta = delta
        self.class_number = 1


class InconclusiveOracle(ArithmeticError):
    """The character sum failed its exact integrality check."""


def principal_form(delta: int) -> Form:
    """Identity class representative (1, b0, (b0**2 - delta)/4) with b0 = delta mod 2."""
    _check_discriminant(delta)
    b = delta & 1
    return Form(1, b, (b * b - delta) // 4)


def _check_discriminant(delta: int) -> None:
    if delta % 4 not in (0, 1):
        raise ValueError(f"{delta} is not a discriminant (need 0 or 1 mod 4)")
    if delta == 0:
        raise ValueError("discriminant must be nonzero")
    if delta > 0:
        s = isqrt(delta)
        if s * s == delta:
            raise ValueError(f"square discriminant {delta} is degenerate")


# ---------------------------------------------------------------------------
# Reduction


def _reduce_definite_raw(a: int, b: int, c: int) -> tuple[int, int, int]:
    while True:
        if a > c:
            a, b, c = c, -b, a
            continue
        if b > a or b <= -a:
            r = b % (2 * a)
            if r > a:
                r -= 2 * a
            c += (r * r - b * b) // (4 * a)
            b = r
            continue
        break
    if b < 0 and a == c:
        b = -b
    return a, b, c


def _is_reduced_indefinite(a: int, b: int, s: int, delta: int) -> bool:
    if b <= 0 or b > s:
        return False
    t = 2 * abs(a)
    if (t + b) ** 2 <= delta:
        return False
    return t <= b or (t - b) ** 2 < delta


def _rho_raw(a: int, b: int, c: int, delta: int, s: int) -> tuple[int, int, int]:
    t = 2 * abs(c)
    if abs(c) > s:
        r = (-b) % t
        if r > abs(c):
            r -= t
    else:
        r = s - (s + b) % t
    return c, r, (r * r - delta) // (4 * c)


def _reduce_indefinite_raw(a: int, b: int, c: int, delta: int, s: int) -> tuple[int, int, int]:
    steps = 0
    while not _is_reduced_indefinite(a, b, s, delta):
        a, b, c = _rho_raw(a, b, c, delta, s)
        steps += 1
        if steps > 100000:
            raise ArithmeticError(f"reduction of ({a},{b},{c}) did not terminate")
    return a, b, c


def reduce_form(form: Form) -> Form:
    """Reduced representative: the canonical one for delta < 0, a cycle member for delta > 0."""
    delta = form.discriminant()
    _check_discriminant(delta)
    if form.content() != 1:
        raise ValueError("reduction requires a primitive form")
    if delta < 0:
        if form.a <= 0:
            raise ValueError("definite forms must be positive definite (a > 0)")
        return Form(*_reduce_definite_raw(form.a, form.b, form.c))
    return Form(*_reduce_indefinite_raw(form.a, form.b, form.c, delta, isqrt(delta)))


def is_reduced(form: Form) -> bool:
    delta = form.discriminant()
    _check_discriminant(delta)
    if delta < 0:
        a, b, c = form
        if a <= 0:
            return False
        if not (-a < b <= a <= c):
            return False
        return b >= 0 or a != c
    return _is_reduced_indefinite(form.a, form.b, isqrt(delta), delta)


def reduction_cycle(form: Form) -> list[Form]:
    """Rho-cycle through an indefinite form's class, lexicographically least form first."""
    delta = form.discriminant()
    if delta <= 0:
        raise ValueError("reduction cycles exist only for positive discriminants")
    _check_discriminant(delta)
    s = isqrt(delta)
    start = _reduce_indefinite_raw(form.a, form.b, form.c, delta, s)
    cycle = [start]
    g = _rho_raw(*start, delta, s)
    while g != start:
        cycle.append(g)
        g = _rho_raw(*g, delta, s)
    lead = min(range(len(cycle)), key=cycle.__getitem__)
    return [Form(*t) for t in cycle[lead:] + cycle[:lead]]


# ---------------------------------------------------------------------------
# Composition


def _positive_leading_raw(a: int, b: int, c: int, delta: int, s: int) -> tuple[int, int, int]:
    if a > 0:
        return a, b, c
    a, b, c = _reduce_indefinite_raw(a, b, c, delta, s)
    if a < 0:
        # Reduced indefinite forms have a*c < 0, so the rho-neighbor leads with c > 0.
        a, b, c = _rho_raw(a, b, c, delta, s)
    return a, b, c


def _compose_raw(
    a1: int, b1: int, c1: int, a2: int, b2: int, c2: int, delta: int
) -> tuple[int, int, int]:
    s = (b1 + b2) // 2
    d1, u1, v1 = xgcd(a1, a2)
    d, u2, v2 = xgcd(d1, s)
    a3 = a1 * a2 // (d * d)
    num = u2 * u1 * a1 * b2 + u2 * v1 * a2 * b1 + v2 * ((b1 * b2 + delta) // 2)
    if num % d:
        raise ArithmeticError("composition congruence failed; forms not primitive?")
    b3 = (num // d) % (2 * a3)
    c3 = (b3 * b3 - delta) // (4 * a3)
    return a3, b3, c3


def compose(f1: Form, f2: Form) -> Form:
    """Dirichlet composition of primitive forms of one discriminant (Gauss product)."""
    delta = f1.discriminant()
    if f2.discriminant() != delta:
        raise ValueError("cannot compose forms of different discriminants")
    _check_discriminant(delta)
    if f1.content() != 1 or f2.content() != 1:
        raise ValueError("composition requires primitive forms")
    if delta < 0:
        if f1.a <= 0 or f2.a <= 0:
            raise ValueError("definite forms must be positive definite (a > 0)")
        t1, t2 = tuple(f1), tuple(f2)
    else:
        s = isqrt(delta)
        t1 = _positive_leading_raw(*f1, delta, s)
        t2 = _positive_leading_raw(*f2, delta, s)
    return Form(*_compose_raw(*t1, *t2, delta))


def is_equivalent(f1: Form, f2: Form) -> bool:
    """Proper (narrow, for delta > 0) equivalence of two forms."""
    delta = f1.discriminant()
    if f2.discriminant() != delta:
        return False
    if delta < 0:
        return reduce_form(f1) == reduce_form(f2)
    return reduce_form(f2) in set(reduction_cycle(f1))


# ---------------------------------------------------------------------------
# Reduced form enumeration

_NUMPY_THRESHOLD = 6000


def _reduced_forms_definite_py(n: int) -> list[tuple[int, int, int]]:
    parity = n & 1
    out = []
    for a in range(1, isqrt(n // 3) + 1):
        start = -a if (a & 1) == parity else -a + 1
        fa = 4 * a
        for b in range(start, a + 1, 2):
            num = b * b + n
            if num % fa:
                continue
            c = num // fa
            if c < a:
                continue
            if b < 0 and (c == a or -b == a):
                continue
            out.append((a, b, c))
    return out


def _reduced_forms_definite_np(n: int) -> list[tuple[int, int, int]]:
    parity = n & 1
    amax = isqrt(n // 3)
    a = np.arange(1, amax + 1, dtype=np.int64)
    bmin = np.where((a & 1) == parity, -a, 1 - a)
    counts = (a - bmin) // 2 + 1
    total = int(counts.sum())
    starts = np.concatenate(([0], np.cumsum(counts)[:-1]))
    a_flat = np.repeat(a, counts)
    pos = np.arange(total, dtype=np.int64) - np.repeat(starts, counts)
    b_flat = np.repeat(bmin, counts) + 2 * pos
    num = b_flat * b_flat + n
    den = 4 * a_flat
    sel = num % den == 0
    a_s, b_s, num_s = a_flat[sel], b_flat[sel], num[sel]
    c_s = num_s // (4 * a_s)
    keep = (c_s >= a_s) & ~((b_s < 0) & ((c_s == a_s) | (-b_s == a_s)))
    return [
        (int(x), int(y), int(z))
        for x, y, z in zip(a_s[keep], b_s[keep], c_s[keep])
    ]


def _reduced_forms_indefinite(delta: int) -> list[tuple[int, int, int]]:
    s = isqrt(delta)
    parity = delta & 1
    out = []
    for b in range(2 - parity, s + 1, 2):
        n = (delta - b * b) // 4
        for d in range(1, isqrt(n) + 1):
            if n % d:
                continue
            for aa in {d, n // d}:
                t = 2 * aa
                if (t + b) ** 2 > delta and (t <= b or (t - b) ** 2 < delta):
                    out.append((aa, b, -(n // aa)))
                    out.append((-aa, b, n // aa))
    out.sort()
    return out


def reduced_forms(delta: int) -> list[Form]:
    """Every primitive reduced form of the discriminant, sorted lexicographically.

    For fundamental discriminants every form is automatically primitive; for
    other discriminants the imprimitive ones are filtered out, so the count
    is always the form class number.
    """
    _check_discriminant(delta)
    if abs(delta) > MAX_DISCRIMINANT:
        raise ValueError(f"|delta| exceeds the scan limit {MAX_DISCRIMINANT}")
    if delta < 0:
        n = -delta
        raw = (
            _reduced_forms_definite_np(n)
            if n >= _NUMPY_THRESHOLD
            else _reduced_forms_definite_py(n)
        )
    else:
        raw = _reduced_forms_indefinite(delta)
    forms = [Form(*t) for t in raw]
    return [f for f in forms if f.content() == 1]


# ---------------------------------------------------------------------------
# Class group summary

def _cube_reduced(t: tuple[int, int, int], delta: int, s: int) -> tuple[int, int, int]:
    if delta < 0:
        sq = _reduce_definite_raw(*_compose_raw(*t, *t, delta))
        return _reduce_definite_raw(*_compose_raw(*sq, *t, delta))
    t = _positive_leading_raw(*t, delta, s)
    sq = _reduce_indefinite_raw(*_compose_raw(*t, *t, delta), delta, s)
    sq = _positive_leading_raw(*sq, delta, s)
    return _reduce_indefinite_raw(*_compose_raw(*sq, *t, delta), delta, s)


def _exact_three_rank(three_torsion: int) -> int:
    rank = 0
    t = three_torsion
    while t % 3 == 0:
        t //= 3
        rank += 1
    if t != 1:
        raise ArithmeticError(f"3-torsion count {three_torsion} is not a power of 3")
    return rank


def summary_from_counts(delta: int, class_number: int, three_torsion: int) -> ClassGroupSummary:
    """Rebuild a validated summary from stored (h, 3-torsion) counts.

    Used when reloading cached class data: the structural invariants (torsion
    is a power of 3 dividing h) are re-checked, so a corrupted pair cannot
    silently enter a dimension computation.
    """
    if class_number < 1:
        raise ValueError(f"class number {class_number} must be positive")
    rank = _exact_three_rank(three_torsion)
    if class_number % three_torsion:
        raise ArithmeticError(
            f"3-torsion {three_torsion} does not divide h = {class_number}"
        )
    return ClassGroupSummary(
        delta=delta,
        class_number=class_number,
        three_torsion=three_torsion,
        three_rank=rank,
    )


def class_group_summary(delta: int) -> ClassGroupSummary:
    """Class number and 3-torsion of the (narrow, if delta > 0) class group."""
    if not is_fundamental(delta):
        raise ValueError(f"{delta} is not a fundamental discriminant")
    if abs(delta) > MAX_DISCRIMINANT:
        raise ValueError(f"|delta| exceeds the scan limit {MAX_DISCRIMINANT}")
    s = isqrt(delta) if delta > 0 else 0
    forms = reduced_forms(delta)
    if delta < 0:
        identity = _reduce_definite_raw(*principal_form(delta))
        reps = [tuple(f) for f in forms]
        torsion = sum(1 for t in reps if _cube_reduced(t, delta, s) == identity)
        h = len(reps)
    else:
        cycles, index = _cycles_indefinite(forms, delta, s)
        h = len(cycles)
        identity_cid = index[_reduce_indefinite_raw(*principal_form(delta), delta, s)]
        torsion = sum(
            1
            for cyc in cycles
            if index[_cube_reduced(cyc[0], delta, s)] == identity_cid
        )
    rank = _exact_three_rank(torsion)
    if h % torsion:
        raise ArithmeticError(f"3-torsion {torsion} does not divide h = {h}")
    return ClassGroupSummary(
        delta=delta, class_number=h, three_torsion=torsion, three_rank=rank
    )


def _cycles_indefinite(
    forms: list[Form], delta: int, s: int
) -> tuple[list[list[tuple[int, int, int]]], dict[tuple[int, int, int], int]]:
    """Partition the reduced forms into rho-cycles; every form lands in exactly one."""
    index: dict[tuple[int, int, int], int] = {}
    cycles: list[list[tuple[int, int, int]]] = []
    for f in forms:
        t = tuple(f)
        if t in index:
            continue
        cid = len(cycles)
        cyc = []
        g = t
        while g not in index:
            index[g] = cid
            cyc.append(g)
            g = _rho_raw(*g, delta, s)
        if g != t:
            raise ArithmeticError(f"rho walk from {t} did not close into a cycle")
        lead = min(range(len(cyc)), key=cyc.__getitem__)
        cycles.append(cyc[lead:] + cyc[:lead])
    return cycles, index


# ---------------------------------------------------------------------------
# Independent oracles

_spf_cache: dict[str, np.ndarray] = {}


def _spf_table(limit: int) -> np.ndarray:
    """Smallest-prime-factor table 0..limit, grown geometrically and cached."""
    table = _spf_cache.get("table")
    if table is None or len(table) <= limit:
        size = max(limit + 1, 2 * len(table) if table is not None else 10**4 + 1)
        spf = np.zeros(size, dtype=np.int64)
        for i in range(2, size):
            if spf[i] == 0:
                sl = spf[i::i]
                sl[sl == 0] = i
        _spf_cache["table"] = spf
        table = spf
    return table


def analytic_class_number_oracle(delta: int, terms: int | None = None) -> int:
    """Imaginary quadratic class number by Dirichlet's analytic formula.

    Evaluates h = w * sqrt|delta| / (2*pi) * L(1, chi) through the exact
    finite character sum  h = |sum_{t=1}^{|delta|-1} t * chi(t)| / |delta|
    (unit count w = 2), a route fully independent of form reduction and
    composition.  `terms` must cover one full character period; the sum is
    checked for exact integrality and anything else fails loudly.
    """
    if delta >= 0:
        raise ValueError("the analytic oracle handles negative discriminants only")
    if not is_fundamental(delta):
        raise ValueError(f"{delta} is not a fundamental discriminant")
    if delta in (-3, -4):
        raise ExtraUnitsDiscriminant(delta)
    n = -delta
    if terms is None:
        terms = max(n, 10**4)
    if terms < n:
        raise ValueError(f"terms = {terms} does not cover the character period {n}")
    spf = _spf_table(n)
    chi = np.zeros(n, dtype=np.int64)
    chi[1] = 1
    for t in range(2, n):
        p = int(spf[t])
        if p == t:
            chi[t] = kronecker(delta, t)
        else:
            chi[t] = chi[p] * chi[t // p]
    total = int(np.dot(np.arange(n, dtype=np.int64), chi))
    if total % n:
        raise InconclusiveOracle(
            f"character sum {total} for delta = {delta} is not divisible by {n}"
        )
    h = abs(total) // n
    if h == 0:
        raise InconclusiveOracle(f"character sum vanished for delta = {delta}")
    return h


def brute_force_group_structure(delta: int, max_order: int = 200) -> list[int]:
    """Invariant factors [d1, d2, ...] (d1 | d2 | ...) from the full composition table.

    Orders of all classes are computed by repeated composition and the
    elementary divisors recovered by order counting, independent of the
    cubing shortcut.  Refuses groups larger than max_order.
    """
    summary_forms = reduced_forms(delta)
    s = isqrt(delta) if delta > 0 else 0
    if delta < 0:
        reps = [tuple(f) for f in summary_forms]
        lookup = {t: i for i, t in enumerate(reps)}
        identity = lookup[_reduce_definite_raw(*principal_form(delta))]

        def mul(i: int, j: int) -> int:
            return lookup[_reduce_definite_raw(*_compose_raw(*reps[i], *reps[j], delta))]

    else:
        cycles, index = _cycles_indefinite(summary_forms, delta, s)
        reps = [cyc[0] for cyc in cycles]
        lookup = index
        identity = index[_reduce_indefinite_raw(*principal_form(delta), delta, s)]

        def mul(i: int, j: int) -> int:
            f1 = _positive_leading_raw(*reps[i], delta, s)
            f2 = _positive_leading_raw(*reps[j], delta, s)
            prod = _reduce_indefinite_raw(*_compose_raw(*f1, *f2, delta), delta, s)
            return lookup[prod]

    h = len(reps)
    if h > max_order:
        raise ValueError(f"class number {h} exceeds the brute-force guard {max_order}")
    orders = []
    for i in range(h):
        acc, order = i, 1
        while acc != identity:
            acc = mul(acc, i)
            order += 1
            if order > h:
                raise ArithmeticError("element order exceeded the group size")
        orders.append(order)
    for order in orders:
        if h % order:
            raise ArithmeticError(f"order {order} does not divide h = {h}")
    return _invariant_factors(orders, h)


def _invariant_factors(orders: list[int], h: int) -> list[int]:
    """Elementary divisors of a finite abelian group from its element orders."""
    if h == 1:
        return []
    per_prime: dict[int, list[int]] = {}
    for p, e in factorize(h).factors:
        sylow = p**e
        # ranks[j] = log_p #{x : x**(p**j) == identity}; in an abelian group the
        # count climbs strictly to the Sylow size and each count is a p-power.
        ranks = [0]
        j = 1
        while p ** ranks[-1] < sylow:
            if j > e:
                raise ArithmeticError("order counting stalled below the Sylow size")
            count = sum(1 for o in orders if o <= p**j and _is_p_power(o, p))
            r = 0
            while count % p == 0:
                count //= p
                r += 1
            if count != 1:
                raise ArithmeticError(f"element count for {p}^{j}-torsion is not a p-power")
            ranks.append(r)
            j += 1
        # m[j] = number of cyclic p-factors with exponent >= j.
        m = [ranks[i] - ranks[i - 1] for i in range(1, len(ranks))]
        powers = []
        for exp in range(1, len(m) + 1):
            mult = m[exp - 1] - (m[exp] if exp < len(m) else 0)
            powers.extend([p**exp] * mult)
        per_prime[p] = sorted(powers, reverse=True)
    width = max(len(v) for v in per_prime.values())
    descending = []
    for rank_pos in range(width):
        d = 1
        for p, powers in per_prime.items():
            if rank_pos < len(powers):
                d *= powers[rank_pos]
        descending.append(d)
    factors = list(reversed(descending))
    for i in range(len(factors) - 1):
        if factors[i + 1] % factors[i]:
            raise ArithmeticError(f"invariant factors {factors} fail divisibility")
    product = 1
    for d in factors:
        product *= d
    if product != h:
        raise ArithmeticError(f"invariant factors {factors} do not multiply to h = {h}")
    return factors


def _is_p_power(n: int, p: int) -> bool:
    while n % p == 0:
        n //= p
    return n == 1
