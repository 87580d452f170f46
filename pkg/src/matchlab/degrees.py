"""Closed-form degree thresholds and their brute-force counterparts."""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, isqrt

from .constructions import ExtremalSpec, Variant, build_bt, extremal_specs
from .errors import InvalidQueryError, ResourceGuardError
from .hypercore import min_degree

DEFAULT_GUARD = 60_000_000


def codegree_threshold(n: int, k: int) -> Fraction:
    """Largest minimum codegree over the extremal family, by the piecewise formula.

    The two odd-k cases refer to the parity of (n-1)/2 and so only arise for
    odd n; every other combination falls through to n/2 - k + 1.
    """
    if k < 2 or n % k:
        raise InvalidQueryError(f"need k >= 2 and k | n, got n={n}, k={k}")
    half = Fraction(n, 2)
    if k % 4 == 0 and (n // k) % 2 == 1:
        return half - k + 2
    if k % 2 == 1 and n % 2 == 1:
        if ((n - 1) // 2) % 2 == 1:
            return half - k + Fraction(3, 2)
        return half - k + Fraction(1, 2)
    return half - k + 1


@dataclass(frozen=True)
class PairDegreeFormulas:
    """The six pair degrees of B_{n,4}(t) and its complement."""

    n: int
    t: int
    b_aa: int
    b_bb: int
    b_ab: int
    bbar_aa: int
    bbar_bb: int
    bbar_ab: int

    def as_dict(self) -> dict[str, int]:
        return {
            "B-AA": self.b_aa, "B-BB": self.b_bb, "B-AB": self.b_ab,
            "Bbar-AA": self.bbar_aa, "Bbar-BB": self.bbar_bb, "Bbar-AB": self.bbar_ab,
        }

    def min_for(self, variant: Variant) -> int:
        """Minimum pair degree, skipping classes with fewer than two vertices."""
        a, b = self.n // 2 + self.t, self.n // 2 - self.t
        if Variant(variant) is Variant.B:
            vals = {"AA": self.b_aa, "BB": self.b_bb, "AB": self.b_ab}
        else:
            vals = {"AA": self.bbar_aa, "BB": self.bbar_bb, "AB": self.bbar_ab}
        present = [vals["AB"]]
        if a >= 2:
            present.append(vals["AA"])
        if b >= 2:
            present.append(vals["BB"])
        return min(present)


def b4_pair_degrees(n: int, t: int) -> PairDegreeFormulas:
    if n % 4:
        raise InvalidQueryError(f"n must be divisible by 4, got {n}")
    if not -n // 2 < t < n // 2:
        raise InvalidQueryError(f"need -n/2 < t < n/2, got t={t}")
    q = Fraction(n * n, 4)
    vals = [
        q - n - t * t + 2 * t,
        q - n - t * t - 2 * t,
        q - Fraction(3 * n, 2) + t * t + 2,
        q - Fraction(3 * n, 2) + t * t - 2 * t + 3,
        q - Fraction(3 * n, 2) + t * t + 2 * t + 3,
        q - n - t * t + 1,
    ]
    assert all(v.denominator == 1 for v in vals)
    return PairDegreeFormulas(n, t, *(int(v) for v in vals))


@dataclass(frozen=True)
class SurdValue:
    """An exact number ``rational + coeff * sqrt(radicand)``."""

    rational: Fraction
    coeff: Fraction
    radicand: int

    @property
    def is_rational(self) -> bool:
        return self.coeff == 0 or isqrt(self.radicand) ** 2 == self.radicand

    def exact(self) -> Fraction:
        if not self.is_rational:
            raise ValueError("value is irrational")
        return self.rational + self.coeff * isqrt(self.radicand)

    def __float__(self) -> float:
        return float(self.rational) + float(self.coeff) * math.sqrt(self.radicand)

    def _ge(self, z: Fraction) -> bool:
        # decide rational + coeff*sqrt(m) >= z exactly
        lhs = self.rational - z
        c, m = self.coeff, self.radicand
        if c == 0 or m == 0:
            return lhs >= 0
        if c > 0:
            # lhs + c*sqrt(m) >= 0
            return lhs >= 0 or c * c * m >= lhs * lhs
        # lhs >= |c| sqrt(m)
        return lhs >= 0 and lhs * lhs >= c * c * m

    def floor(self) -> int:
        guess = math.floor(float(self))
        for z in range(guess + 2, guess - 3, -1):
            if self._ge(Fraction(z)):
                return z
        raise ArithmeticError("floor search failed")  # pragma: no cover

    def compare(self, value: Fraction | int) -> int:
        """-1, 0 or 1 as self is below, equal to or above ``value``."""
        value = Fraction(value)
        ge = self._ge(value)
        if not ge:
            return -1
        if self.is_rational and self.exact() == value:
            return 0
        return 1


def delta_n42_closed_form(n: int) -> SurdValue:
    """The 2-degree bound n^2/4 - 5n/4 - sqrt(n-3)/2 + 3/2 for 4-uniform hypergraphs."""
    if n < 12 or n % 4:
        raise InvalidQueryError(f"need n >= 12 with 4 | n, got {n}")
    return SurdValue(Fraction(n * n, 4) - Fraction(5 * n, 4) + Fraction(3, 2), Fraction(-1, 2), n - 3)


@dataclass(frozen=True)
class OptimalT:
    variant: Variant
    value: SurdValue

    @property
    def is_integer(self) -> bool:
        return self.value.is_rational and self.value.exact().denominator == 1

    @property
    def parity(self) -> str | None:
        if not self.is_integer:
            return None
        return "odd" if int(self.value.exact()) % 2 else "even"

    def __float__(self) -> float:
        return float(self.value)


def optimal_t(n: int, variant: Variant) -> OptimalT:
    """Offset balancing the two competing pair-degree forms.

    (-1 + sqrt(n-3))/2 for B and (1 + sqrt(n-3))/2 for the complement.
    """
    if n < 12 or n % 4:
        raise InvalidQueryError(f"need n >= 12 with 4 | n, got {n}")
    variant = Variant(variant)
    shift = Fraction(-1, 2) if variant is Variant.B else Fraction(1, 2)
    return OptimalT(variant, SurdValue(shift, Fraction(1, 2), n - 3))


def tight_instances(limit: int, brute_force_up_to: int = 28) -> list[tuple[int, int]]:
    """All n <= limit of the form (4m+1)^(2s) + 3 with their optimal offsets.

    Each instance is checked: 4 | n, t odd, and the minimum 2-degree of the
    complement construction at offset t equals the closed-form bound. The
    minimum 2-degree comes from the pair-degree formulas, and is recomputed by
    brute force when n <= ``brute_force_up_to``.
    """
    out = []
    m = 1
    while (4 * m + 1) ** 2 + 3 <= limit:
        s = 1
        while (n := (4 * m + 1) ** (2 * s) + 3) <= limit:
            t = (1 + (4 * m + 1) ** s) // 2
            assert n % 4 == 0 and t % 2 == 1
            bound = delta_n42_closed_form(n)
            value = b4_pair_degrees(n, t).min_for(Variant.BBAR)
            if n <= brute_force_up_to:
                h, _ = build_bt(n, 4, t, Variant.BBAR)
                if min_degree(h, 2) != value:
                    raise AssertionError(f"pair-degree formulas disagree with brute force at n={n}")
            if bound.compare(value) != 0:
                raise AssertionError(f"closed form not attained at n={n}, t={t}")
            out.append((n, t))
            s += 1
        m += 1
    return sorted(set(out))


@dataclass
class ThresholdReport:
    n: int
    k: int
    ell: int
    value: int
    argmax_spec: ExtremalSpec
    per_spec_table: list[tuple[ExtremalSpec, int]] = field(default_factory=list)

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "k": self.k,
            "l": self.ell,
            "value": self.value,
            "argmax": {"variant": self.argmax_spec.variant.value, "a_size": self.argmax_spec.a_size,
                       "t": self.argmax_spec.t},
            "table": [
                {"variant": s.variant.value, "a_size": s.a_size, "t": s.t, "min_degree": d}
                for s, d in self.per_spec_table
            ],
        }


def _member_min_degree(args: tuple[ExtremalSpec, int]) -> int:
    spec, ell = args
    return min_degree(spec.build(), ell)


def bruteforce_cost(n: int, k: int, ell: int) -> int:
    return len(extremal_specs(n, k)) * comb(n, k) * comb(k, ell)


def delta_threshold_bruteforce(n: int, k: int, ell: int, guard: int = DEFAULT_GUARD,
                               workers: int = 1) -> ThresholdReport:
    """Build every extremal-family member and take the largest minimum l-degree.

    Ties are broken toward the complement construction, then toward larger |A|
    (the t >= 0 representative of each isomorphic pair).
    """
    if k < 2 or n % k:
        raise InvalidQueryError(f"need k >= 2 and k | n, got n={n}, k={k}")
    if not 1 <= ell <= k - 1:
        raise InvalidQueryError(f"need 1 <= l <= k-1, got l={ell}")
    cost = bruteforce_cost(n, k, ell)
    if cost > guard:
        raise ResourceGuardError(f"brute-force scan of the extremal family for n={n}, k={k}, l={ell}",
                                 cost, guard)
    specs = extremal_specs(n, k)
    jobs = [(s, ell) for s in specs]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            degs = list(pool.map(_member_min_degree, jobs))
    else:
        degs = [_member_min_degree(j) for j in jobs]
    table = list(zip(specs, degs))
    best = max(table, key=lambda sd: (sd[1], sd[0].variant is Variant.BBAR, sd[0].a_size))
    return ThresholdReport(n, k, ell, best[1], best[0], table)
