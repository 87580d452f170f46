"""Absorbing sets: the certificate check and the two pattern enumerators."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable

from ..errors import InvalidQueryError
from ..hypercore import Hypergraph, _canonical_vertices, induced
from ..solver.exact import Matching, find_perfect_matching


@dataclass(frozen=True)
class AbsorbingCertificate:
    q_set: tuple[int, ...]
    s_set: tuple[int, ...]
    m_inner: Matching
    m_outer: Matching
    standard: bool = True


def perfect_matching_on(h: Hypergraph, vertices: Iterable[int], budget: int | None = None) -> Matching | None:
    """Perfect matching of H[vertices] in the original labels (None if there is none)."""
    vs = _canonical_vertices(vertices, h.n)
    if not vs:
        return Matching.of(h.n, ())
    if len(vs) % h.k:
        return None
    sub, labels = induced(h, vs)
    pm = find_perfect_matching(sub, budget)
    if pm is None:
        return None
    return Matching.of(h.n, (tuple(labels[v] for v in e) for e in pm.edges))


def is_absorbing(h: Hypergraph, s: Iterable[int], q: Iterable[int], budget: int | None = None
                 ) -> AbsorbingCertificate | None:
    """Certificate that both H[S] and H[S u Q] have perfect matchings, else None.

    The usual sizes are |S| = k (a single patterned edge) and |S| = 2k; other
    multiples of k are accepted and flagged ``standard=False``. Raises
    :class:`~matchlab.errors.SearchBudgetExceeded` when the search is undecided.
    """
    s_set = _canonical_vertices(s, h.n)
    q_set = _canonical_vertices(q, h.n)
    k = h.k
    if set(s_set) & set(q_set):
        raise InvalidQueryError("S and Q must be disjoint")
    if len(s_set) % k or (len(s_set) + len(q_set)) % k:
        raise InvalidQueryError(f"|S| = {len(s_set)} and |S u Q| = {len(s_set) + len(q_set)} "
                                f"must both be divisible by k = {k}")
    inner = perfect_matching_on(h, s_set, budget)
    if inner is None:
        return None
    outer = perfect_matching_on(h, s_set + q_set, budget)
    if outer is None:
        return None
    return AbsorbingCertificate(q_set, s_set, inner, outer, standard=len(s_set) in (k, 2 * k))


def _halves(h: Hypergraph, q: Iterable[int]) -> tuple[int, tuple[int, ...], list[tuple[tuple[int, ...], tuple[int, ...]]]]:
    k = h.k
    if k % 2:
        raise InvalidQueryError(f"pattern enumeration needs even k, got {k}")
    q_set = _canonical_vertices(q, h.n)
    if len(q_set) != k:
        raise InvalidQueryError(f"|Q| must equal k = {k}, got {len(q_set)}")
    r = k // 2
    splits = []
    for x in combinations(q_set, r):
        y = tuple(v for v in q_set if v not in x)
        if (y, x) not in splits:
            splits.append((x, y))
    return r, q_set, splits


def link_neighbourhoods(h: Hypergraph, r: int) -> dict[tuple[int, ...], list[tuple[int, ...]]]:
    """For every r-set x inside an edge, the sorted r-sets x' with x u x' an edge."""
    out: dict[tuple[int, ...], set[tuple[int, ...]]] = {}
    for e in h.edges:
        for x in combinations(e, r):
            rest = tuple(v for v in e if v not in x)
            out.setdefault(x, set()).add(rest)
    return {x: sorted(v) for x, v in out.items()}


def enumerate_absorbing_2k(h: Hypergraph, q: Iterable[int]) -> list[tuple[int, ...]]:
    """Every k-set x' u y' with x'y', xx', yy' edges, over all splits Q = x u y.

    The name follows the 2r-set convention for the host's half-edge size r.
    """
    r, q_set, splits = _halves(h, q)
    nbr = link_neighbourhoods(h, r)
    qs = set(q_set)
    found: set[tuple[int, ...]] = set()
    for x, y in splits:
        for xp in nbr.get(x, ()):
            if qs.intersection(xp):
                continue
            for yp in nbr.get(y, ()):
                if qs.intersection(yp) or set(xp).intersection(yp):
                    continue
                s = tuple(sorted(xp + yp))
                if s in h.edge_set:
                    found.add(s)
    return sorted(found)


@dataclass(frozen=True)
class EnumerationResult:
    sets: list[tuple[int, ...]]
    truncated: bool


def enumerate_absorbing_4k(h: Hypergraph, q: Iterable[int], budget: int = 1000) -> EnumerationResult:
    """2k-sets x' u w' u y' u z' with x'w', y'z', w'z', xx', yy' all edges.

    Stops after ``budget`` distinct sets and flags the result as truncated.
    """
    r, q_set, splits = _halves(h, q)
    nbr = link_neighbourhoods(h, r)
    qs = set(q_set)
    found: list[tuple[int, ...]] = []
    seen: set[tuple[int, ...]] = set()
    for x, y in splits:
        for xp in nbr.get(x, ()):
            if qs.intersection(xp):
                continue
            used1 = qs | set(xp)
            for wp in nbr.get(xp, ()):
                if used1.intersection(wp):
                    continue
                used2 = used1 | set(wp)
                for yp in nbr.get(y, ()):
                    if used2.intersection(yp):
                        continue
                    used3 = used2 | set(yp)
                    wz = set(nbr.get(wp, ()))
                    for zp in nbr.get(yp, ()):
                        if used3.intersection(zp) or zp not in wz:
                            continue
                        s = tuple(sorted(xp + wp + yp + zp))
                        if s in seen:
                            continue
                        if len(found) >= budget:
                            return EnumerationResult(found, True)
                        seen.add(s)
                        found.append(s)
    return EnumerationResult(found, False)
