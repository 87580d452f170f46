"""Randomised absorbing families and absorption of leftover vertices."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb, factorial
from typing import Iterable

import numpy as np

from ..errors import InvalidQueryError, InvariantViolation, MatchlabError, ResourceGuardError
from ..hypercore import Hypergraph, _canonical_vertices
from ..solver.exact import Matching, matching_problems
from .sets import perfect_matching_on

DEFAULT_Q_BUDGET = 2000


def make_rng(seed: int, stream: int = 0) -> np.random.Generator:
    """Counter-based generator keyed by (seed, stream); distinct streams are independent."""
    if seed < 0 or stream < 0:
        raise InvalidQueryError("seed and stream must be non-negative")
    return np.random.Generator(np.random.Philox(key=(seed % (1 << 64)) | (stream << 64)))


def unrank_combination(n: int, k: int, rank: int) -> tuple[int, ...]:
    """The ``rank``-th k-subset of 0..n-1 in lexicographic order."""
    if not 0 <= rank < comb(n, k):
        raise InvalidQueryError(f"rank {rank} out of range for C({n},{k})")
    out = []
    v = 0
    for slots in range(k, 0, -1):
        while True:
            block = comb(n - v - 1, slots - 1)
            if rank < block:
                out.append(v)
                v += 1
                break
            rank -= block
            v += 1
    return tuple(out)


def family_size_expectation(n: int, k: int, xi: float | Fraction) -> dict:
    """E|F| = p*C(n,2k) with p = xi/n^(2k-1), next to the bound xi*n/(2k)!."""
    xi = Fraction(xi)
    p = xi / n ** (2 * k - 1)
    expected = p * comb(n, 2 * k)
    bound = xi * n / factorial(2 * k)
    return {"p": p, "expected_size": expected, "bound": bound, "below_bound": expected < bound or xi == 0,
            "concentration_cap": 2 * expected}


@dataclass(frozen=True)
class AbsorbingMember:
    s_set: tuple[int, ...]
    inner: Matching
    outers: dict = field(compare=False, repr=False)  # Q -> Matching on S u Q

    @property
    def absorbs(self) -> frozenset[tuple[int, ...]]:
        return frozenset(self.outers)


@dataclass(frozen=True)
class FamilyStats:
    sampled: int
    rate: float
    expected_size: float
    concentration_ok: bool
    discarded_not_absorbing: int
    discarded_intersecting: int
    q_checked: int
    q_total: int
    exhaustive: bool
    hits: dict  # Q -> |L_Q n F'|

    @property
    def min_hits(self) -> int:
        return min(self.hits.values(), default=0)


@dataclass(frozen=True)
class AbsorbingFamily:
    n: int
    k: int
    members: tuple[AbsorbingMember, ...]
    xi: float
    seed: int
    stats: FamilyStats

    def matching(self) -> Matching:
        """The matching formed by the members' inner matchings."""
        return Matching.of(self.n, (e for m in self.members for e in m.inner.edges))

    def as_dict(self) -> dict:
        s = self.stats
        return {
            "n": self.n, "k": self.k, "xi": self.xi, "seed": self.seed,
            "members": [list(m.s_set) for m in self.members],
            "sampled": s.sampled, "rate": s.rate, "expected_size": s.expected_size,
            "concentration_ok": s.concentration_ok,
            "discarded_not_absorbing": s.discarded_not_absorbing,
            "discarded_intersecting": s.discarded_intersecting,
            "q_checked": s.q_checked, "q_total": s.q_total, "exhaustive": s.exhaustive,
            "min_hits": s.min_hits,
        }


class FamilyBoundViolation(MatchlabError):
    """A sampled family broke one of the two required bounds; ``family`` holds it."""

    def __init__(self, bound: str, detail: str, family: AbsorbingFamily):
        super().__init__(f"{bound}: {detail}")
        self.bound = bound
        self.family = family


class AbsorptionFailure(MatchlabError):
    def __init__(self, q: tuple[int, ...]):
        super().__init__(f"no unused family member absorbs {q}")
        self.q = q


def _sample_ranks(rng: np.random.Generator, total: int, p: float) -> list[int]:
    if total >= 1 << 62:
        raise ResourceGuardError("sampling the 2k-subsets", total, 1 << 62)
    count = int(rng.binomial(total, p)) if p > 0 else 0
    if count == 0:
        return []
    return sorted(int(x) for x in rng.choice(total, size=count, replace=False))


def build_absorbing_family(h: Hypergraph, xi: float, seed: int, p: float | None = None,
                           q_budget: int = DEFAULT_Q_BUDGET) -> AbsorbingFamily:
    """Sample 2k-sets at rate p, keep disjoint absorbing ones, and verify the family bounds.

    Candidates are checked against every k-set Q when there are at most
    ``q_budget`` of them, otherwise against ``q_budget`` sampled Q's. The
    returned family satisfies |F'| <= xi*n/k and, for every checked Q, more
    than xi^2*n/k members absorb Q; otherwise :class:`FamilyBoundViolation`
    is raised (no reseeding happens here). With xi = 0 the hit bound is
    vacuous, since only W = {} can then be absorbed.
    """
    n, k = h.n, h.k
    if n % k:
        raise InvalidQueryError(f"k = {k} does not divide n = {n}")
    if xi < 0:
        raise InvalidQueryError("xi must be non-negative")
    if 2 * k > n:
        raise InvalidQueryError("need n >= 2k")
    rate = xi / n ** (2 * k - 1) if p is None else p
    if not 0 <= rate <= 1:
        raise InvalidQueryError(f"sampling rate {rate} outside [0, 1]")
    rng = make_rng(seed, 0)
    total = comb(n, 2 * k)
    candidates = [unrank_combination(n, 2 * k, r) for r in _sample_ranks(rng, total, rate)]

    q_total = comb(n, k)
    if q_total <= q_budget:
        checked = list(combinations(range(n), k))
        exhaustive = True
    else:
        qrng = make_rng(seed, 1)
        checked = [unrank_combination(n, k, int(r)) for r in sorted(qrng.choice(q_total, q_budget, replace=False))]
        exhaustive = False

    absorbing: list[AbsorbingMember] = []
    not_absorbing = 0
    for s in candidates:
        inner = perfect_matching_on(h, s)
        if inner is None:
            not_absorbing += 1
            continue
        ss = set(s)
        outers = {}
        for q in checked:
            if ss.isdisjoint(q):
                outer = perfect_matching_on(h, s + q)
                if outer is not None:
                    outers[q] = outer
        if not outers:
            not_absorbing += 1
            continue
        absorbing.append(AbsorbingMember(s, inner, outers))

    members: list[AbsorbingMember] = []
    taken: set[int] = set()
    intersecting = 0
    for m in absorbing:
        if taken.isdisjoint(m.s_set):
            members.append(m)
            taken.update(m.s_set)
        else:
            intersecting += 1

    hits = {q: 0 for q in checked}
    for m in members:
        for q in m.outers:
            hits[q] += 1
    expected = rate * total
    stats = FamilyStats(len(candidates), rate, expected, len(candidates) <= 2 * expected or not candidates,
                        not_absorbing, intersecting, len(checked), q_total, exhaustive, hits)
    family = AbsorbingFamily(n, k, tuple(members), xi, seed, stats)
    size_cap = xi * n / k
    if len(members) > size_cap:
        raise FamilyBoundViolation("size bound", f"|F'| = {len(members)} exceeds xi*n/k = {size_cap:g}", family)
    need = xi * xi * n / k
    if xi > 0:
        starved = [q for q, c in hits.items() if not c > need]
        if starved:
            raise FamilyBoundViolation(
                "hit bound", f"{len(starved)} of {len(hits)} checked Q have at most xi^2*n/k = {need:g} "
                f"absorbing members (e.g. Q = {starved[0]} with {hits[starved[0]]})", family)
    return family


def absorb(h: Hypergraph, family: AbsorbingFamily, m: Matching, w: Iterable[int]) -> Matching:
    """Swallow W into M by swapping absorbing members' inner matchings for outer ones.

    W is cut into consecutive k-sets (in label order); each gets the first
    unused member that absorbs it. M must contain each member it uses as
    edges inside that member.
    """
    k = h.k
    w_set = _canonical_vertices(w, h.n)
    if len(w_set) % k:
        raise InvalidQueryError(f"|W| = {len(w_set)} is not divisible by k = {k}")
    if set(w_set) & m.covered:
        raise InvalidQueryError("W meets the matching")
    cap = family.xi ** 2 * h.n
    if len(w_set) > cap + 1e-12:
        raise InvalidQueryError(f"|W| = {len(w_set)} exceeds xi^2*n = {cap:g}")
    edges = set(m.edges)
    used: set[int] = set()
    for i in range(0, len(w_set), k):
        q = w_set[i:i + k]
        choice = None
        for j, member in enumerate(family.members):
            if j in used:
                continue
            outer = member.outers.get(q)
            if outer is None:
                continue
            inside = {e for e in edges if set(e) <= set(member.s_set)}
            if {v for e in inside for v in e} != set(member.s_set):
                continue
            choice = (j, inside, outer)
            break
        if choice is None:
            raise AbsorptionFailure(q)
        j, inside, outer = choice
        used.add(j)
        edges -= inside
        edges |= set(outer.edges)
    result = Matching.of(h.n, edges)
    problems = matching_problems(h, result.edges, cover=m.covered | set(w_set))
    if problems:
        raise InvariantViolation(f"absorption produced an invalid matching: {problems[:3]}")
    return result

