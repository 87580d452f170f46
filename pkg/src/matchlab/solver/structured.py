"""Goodness classification and the greedy matchers for pattern-structured instances."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from typing import Callable, Iterable

from ..constructions import build_k_r
from ..errors import InvalidQueryError, InvariantViolation, MatchlabError, PreconditionError
from ..hypercore import Hypergraph, Partition
from .exact import Matching, find_perfect_matching, matching_problems


@dataclass(frozen=True)
class GoodnessReport:
    reference: Hypergraph
    alpha: float | Fraction
    threshold: float | Fraction
    bad_vertices: frozenset[int]
    per_vertex_deficiency: tuple[int, ...]

    def is_good(self, v: int) -> bool:
        return v not in self.bad_vertices


def goodness(h: Hypergraph, reference: Hypergraph, alpha: float | Fraction) -> GoodnessReport:
    """Per-vertex count of reference edges missing from ``h``, thresholded at alpha*n^(k-1)."""
    if h.n != reference.n or h.k != reference.k:
        raise InvalidQueryError("goodness needs hypergraphs on the same vertex set and uniformity")
    deficiency = [0] * h.n
    present = h.edge_set
    for e in reference.edges:
        if e not in present:
            for v in e:
                deficiency[v] += 1
    threshold = alpha * h.n ** (h.k - 1)
    bad = frozenset(v for v, d in enumerate(deficiency) if d > threshold)
    return GoodnessReport(reference, alpha, threshold, bad, tuple(deficiency))


def pattern_deficiency(h: Hypergraph, a: Iterable[int], b: Iterable[int], r: int) -> dict[int, int]:
    """Missing K_r(A, B) edges at each vertex of A u B, counted inside A u B only."""
    a, b = sorted(a), sorted(b)
    out = {v: 0 for v in a + b}
    present = h.edge_set
    for x in combinations(a, r):
        for y in combinations(b, h.k - r):
            e = tuple(sorted(x + y))
            if e not in present:
                for v in e:
                    out[v] += 1
    return out


def greedy_alpha_bound(k: int) -> Fraction:
    """The goodness constant below which the greedy matcher is guaranteed to finish."""
    return Fraction(1, k * (2 * k * (k - 1)) ** (k - 1))


def claim_edge_avoiding(h: Hypergraph, v: int, avoid: Iterable[int],
                        predicate: Callable[[tuple[int, ...]], bool] | None = None) -> tuple[int, ...] | None:
    """First edge (lexicographically) through ``v`` that misses ``avoid`` and passes ``predicate``."""
    blocked = set(avoid)
    if v in blocked:
        raise InvalidQueryError(f"vertex {v} lies in the avoided set")
    for i in h.incidence[v]:
        e = h.edges[i]
        if blocked.isdisjoint(e) and (predicate is None or predicate(e)):
            return e
    return None


class GreedyStall(MatchlabError):
    """The greedy matcher could not complete a perfect matching."""

    def __init__(self, message: str, partial: list[tuple[int, ...]]):
        super().__init__(message)
        self.partial = partial


@dataclass
class GreedyTrace:
    exchanges: int = 0
    sizes: list[int] = field(default_factory=list)
    exact_fallback: bool = False
    diagnostics: list[str] = field(default_factory=list)


def _feasible_for(v: int, group: tuple[tuple[int, ...], ...], in_a: set[int], r: int,
                  present: frozenset) -> bool:
    base = 1 if v in in_a else 0
    for pick in product(*group):
        if base + sum(1 for u in pick if u in in_a) == r:
            if tuple(sorted((v,) + pick)) not in present:
                return False
    return True


def _exchange_edges(s: list[int], group: tuple[tuple[int, ...], ...], in_a: set[int], r: int
                    ) -> list[tuple[int, ...]]:
    """Split S plus the k-1 matched edges into k disjoint A^r B^(k-r) sets."""
    need = [r - (1 if v in in_a else 0) for v in s]
    rows: list[list[int]] = [[v] for v in s]
    for e in group:
        a_part = [u for u in e if u in in_a]
        b_part = [u for u in e if u not in in_a]
        order = sorted(range(len(s)), key=lambda j: (-need[j], j))
        chosen = set(order[: len(a_part)])
        ai = bi = 0
        for j in range(len(s)):
            if j in chosen:
                rows[j].append(a_part[ai])
                ai += 1
                need[j] -= 1
            else:
                rows[j].append(b_part[bi])
                bi += 1
    if any(x != 0 for x in need):
        raise InvariantViolation("exchange assignment left unmet A-demand")
    return [tuple(sorted(row)) for row in rows]


def greedy_structured_matching(h: Hypergraph, a: Iterable[int], b: Iterable[int], r: int,
                               alpha: float | Fraction, *, enforce_constants: bool = True,
                               trace: GreedyTrace | None = None) -> Matching:
    """Perfect matching of A^r B^(k-r) edges covering A u B, built by greedy growth and exchanges.

    A maximal matching of pattern edges is grown in lexicographic order. While
    it is short, the first free r A-vertices and k-r B-vertices form a set S;
    a (k-1)-tuple of matched edges feasible for every vertex of S is traded,
    together with S, for k new disjoint pattern edges.

    Size divisibility and alpha-goodness of every vertex (relative to
    n = |A u B|) are always required. With ``enforce_constants`` the
    quantitative bounds t >= 2(k-1) and alpha < 1/(k(2k(k-1))^(k-1)) are
    required too, and a stall is a bug. Without it a stall falls back to
    exact search over the pattern edges before giving up with
    :class:`GreedyStall`.
    """
    trace = trace if trace is not None else GreedyTrace()
    k = h.k
    a, b = sorted(set(a)), sorted(set(b))
    if set(a) & set(b):
        raise InvalidQueryError("A and B must be disjoint")
    if not 0 <= r <= k:
        raise InvalidQueryError(f"r must lie in 0..{k}")
    # number of edges in a perfect matching
    if r > 0:
        t = len(a) // r
    else:
        t = len(b) // k
    if (r and len(a) != t * r) or len(b) != t * (k - r) or (r == 0 and a):
        raise PreconditionError(f"sizes |A|={len(a)}, |B|={len(b)} are not t*r, t*(k-r) for r={r}, k={k}")
    if t == 0:
        return Matching.of(h.n, ())
    m = len(a) + len(b)
    defic = pattern_deficiency(h, a, b, r)
    limit = alpha * m ** (k - 1)
    bad = sorted(v for v, d in defic.items() if d > limit)
    if bad:
        raise PreconditionError(f"vertices {bad[:10]} are not {alpha}-good w.r.t. K_{r}(A,B)")
    if t < 2 * (k - 1):
        msg = f"t = {t} < 2(k-1) = {2 * (k - 1)}"
        if enforce_constants:
            raise PreconditionError(msg)
        trace.diagnostics.append(msg)
    if Fraction(alpha) >= greedy_alpha_bound(k):
        msg = f"alpha = {alpha} is not below 1/(k(2k(k-1))^(k-1)) = {greedy_alpha_bound(k)}"
        if enforce_constants:
            raise PreconditionError(msg)
        trace.diagnostics.append(msg)

    in_a = set(a)
    live = set(a) | set(b)
    present = h.edge_set
    pattern = [e for e in h.edges if live.issuperset(e) and sum(1 for u in e if u in in_a) == r]
    matched: list[tuple[int, ...]] = []
    used: set[int] = set()

    def extend() -> None:
        for e in pattern:
            if used.isdisjoint(e):
                matched.append(e)
                used.update(e)

    extend()
    trace.sizes.append(len(matched))
    while len(matched) < t:
        free_a = [v for v in a if v not in used]
        free_b = [v for v in b if v not in used]
        s = free_a[:r] + free_b[: k - r]
        swap = None
        if len(matched) >= k - 1:
            for idx in combinations(range(len(matched)), k - 1):
                group = tuple(matched[i] for i in idx)
                if all(_feasible_for(v, group, in_a, r, present) for v in s):
                    swap = idx
                    break
        if swap is None:
            if enforce_constants:
                raise InvariantViolation(
                    f"greedy stalled at {len(matched)}/{t} edges although every hypothesis holds")
            trace.exact_fallback = True
            sub = Hypergraph(h.n, k, tuple(pattern))
            restricted, labels = _restrict(sub, sorted(live))
            pm = find_perfect_matching(restricted)
            if pm is None:
                raise GreedyStall(f"no perfect matching of A^{r}B^{k - r} edges exists "
                                  f"(greedy reached {len(matched)}/{t})", list(matched))
            matched = [tuple(labels[u] for u in e) for e in pm.edges]
            break
        group = tuple(matched[i] for i in swap)
        new_edges = _exchange_edges(s, group, in_a, r)
        if any(e not in present for e in new_edges):
            raise InvariantViolation("exchange produced a non-edge")
        before = len(matched)
        matched = [e for i, e in enumerate(matched) if i not in swap] + new_edges
        used.update(s)
        if len(matched) != before + 1:
            raise InvariantViolation("exchange did not grow the matching by one edge")
        trace.exchanges += 1
        extend()
        trace.sizes.append(len(matched))
        if trace.exchanges > t:
            raise InvariantViolation("more exchanges than edges in a perfect matching")
    result = Matching.of(h.n, matched)
    problems = matching_problems(h, result.edges, cover=live)
    if problems:
        raise InvariantViolation(f"greedy produced an invalid matching: {problems[:3]}")
    return result


def _restrict(h: Hypergraph, labels: list[int]) -> tuple[Hypergraph, list[int]]:
    index = {v: i for i, v in enumerate(labels)}
    edges = tuple(tuple(index[v] for v in e) for e in h.edges if all(v in index for v in e))
    return Hypergraph(max(len(labels), h.k), h.k, edges), labels


def balanced_split(a: list[int], b: list[int], k: int) -> tuple[list[int], list[int], list[int], list[int]]:
    a, b = sorted(a), sorted(b)
    a1, a2 = a[: len(a) // k], a[len(a) // k:]
    nb1 = len(b) * (k - 1) // k
    b1, b2 = b[:nb1], b[nb1:]
    return a1, a2, b1, b2


def balanced_split_matching(h: Hypergraph, a: Iterable[int], b: Iterable[int], alpha: float | Fraction, *,
                       enforce_constants: bool = False, trace: GreedyTrace | None = None
                       ) -> tuple[Matching, str]:
    """Perfect matching of H[A u B] for balanced A, B whose vertices are good w.r.t. B_{.,k}(A,B).

    Returns the matching and the branch used: ``"b"`` runs the greedy matcher
    with r = k/2 when k/2 is odd; ``"a"`` splits into (A1, B1) with r = 1 and
    (A2, B2) with r = k-1 when 2k divides |A u B|.
    """
    k = h.k
    a, b = sorted(set(a)), sorted(set(b))
    if k % 2:
        raise PreconditionError("the balanced-split matcher needs even k")
    if len(a) != len(b):
        raise PreconditionError(f"|A| = {len(a)} differs from |B| = {len(b)}")
    m = len(a) + len(b)
    if m == 0:
        return Matching.of(h.n, ()), "empty"
    # goodness w.r.t. the odd edges inside A u B
    odd = [r for r in range(1, k, 2)]
    defic = {v: 0 for v in a + b}
    for r in odd:
        for v, d in pattern_deficiency(h, a, b, r).items():
            defic[v] += d
    limit = alpha * m ** (k - 1)
    bad = sorted(v for v, d in defic.items() if d > limit)
    if bad:
        raise PreconditionError(f"vertices {bad[:10]} are not {alpha}-good w.r.t. the odd construction")
    if (k // 2) % 2 == 1 and m % k == 0:
        mt = greedy_structured_matching(h, a, b, k // 2, alpha, enforce_constants=enforce_constants, trace=trace)
        return mt, "b"
    if m % (2 * k) == 0:
        a1, a2, b1, b2 = balanced_split(a, b, k)
        boosted = alpha * 2 ** (k - 1)
        m1 = greedy_structured_matching(h, a1, b1, 1, boosted, enforce_constants=enforce_constants, trace=trace)
        m2 = greedy_structured_matching(h, a2, b2, k - 1, boosted, enforce_constants=enforce_constants,
                                        trace=trace)
        return Matching.of(h.n, m1.edges + m2.edges), "a"
    raise PreconditionError(f"|A u B| = {m} is not divisible by 2k = {2 * k}"
                            + (" (nor by k with k/2 odd)" if (k // 2) % 2 else ""))


def balanced_good_matcher(h: Hypergraph, partition: Partition, alpha: float | Fraction, *,
                           enforce_constants: bool = False) -> Matching:
    """Perfect matching of ``h`` from a balanced partition with all vertices alpha-good."""
    if partition.n != h.n:
        raise InvalidQueryError("partition and hypergraph disagree on n")
    matching, _ = balanced_split_matching(h, partition.a_side, partition.b_side, alpha,
                                     enforce_constants=enforce_constants)
    return matching
