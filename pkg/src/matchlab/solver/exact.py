"""Exact perfect-matching search, matching validation and parity certificates."""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Iterable, Sequence

from ..errors import SearchBudgetExceeded
from ..hypercore import Hypergraph, Partition

DEFAULT_BUDGET = 2_000_000
BUDGET_ENV = "MATCHLAB_BUDGET"


def default_budget() -> int:
    raw = os.environ.get(BUDGET_ENV)
    return int(raw) if raw else DEFAULT_BUDGET


@dataclass(frozen=True)
class Matching:
    n: int
    edges: tuple[tuple[int, ...], ...]

    @classmethod
    def of(cls, n: int, edges: Iterable[Sequence[int]]) -> "Matching":
        return cls(n, tuple(sorted(tuple(sorted(e)) for e in edges)))

    @property
    def covered(self) -> frozenset[int]:
        return frozenset(v for e in self.edges for v in e)

    @property
    def is_perfect(self) -> bool:
        return len(self.covered) == self.n

    def __len__(self) -> int:
        return len(self.edges)


def matching_problems(h: Hypergraph, edges: Iterable[Sequence[int]],
                      cover: Iterable[int] | None = None) -> list[str]:
    """Independent check of a claimed matching; returns a list of defects.

    ``cover`` is the vertex set the matching must cover exactly (default: all
    of ``0..n-1``); pass an empty iterable to skip the coverage test.
    """
    problems = []
    seen: dict[int, tuple[int, ...]] = {}
    for e in edges:
        e = tuple(e)
        if tuple(sorted(e)) not in h.edge_set:
            problems.append(f"{e} is not an edge")
        for v in e:
            if v in seen:
                problems.append(f"vertex {v} lies in {seen[v]} and {e}")
            seen[v] = e
    target = set(range(h.n)) if cover is None else set(cover)
    if target and set(seen) != target:
        missing = sorted(target - set(seen))
        extra = sorted(set(seen) - target)
        if missing:
            problems.append(f"uncovered vertices {missing}")
        if extra:
            problems.append(f"vertices outside the target {extra}")
    return problems


def is_valid_matching(h: Hypergraph, edges: Iterable[Sequence[int]], cover: Iterable[int] | None = None) -> bool:
    return not matching_problems(h, edges, cover)


class _Search:
    def __init__(self, h: Hypergraph, budget: int):
        self.full = (1 << h.n) - 1
        self.budget = budget
        self.nodes = 0
        self.failed: set[int] = set()
        masks = h.masks
        self.edges = h.edges
        # per vertex: edge masks in lexicographic edge order
        self.by_vertex = [[masks[i] for i in inc] for inc in h.incidence]

    def run(self, covered: int) -> list[int] | None:
        if covered == self.full:
            return []
        if covered in self.failed:
            return None
        self.nodes += 1
        if self.nodes > self.budget:
            raise SearchBudgetExceeded(self.nodes, self.budget)
        best_v, best_opts = -1, None
        free = ~covered & self.full
        v = 0
        while free:
            if free & 1:
                opts = [m for m in self.by_vertex[v] if not m & covered]
                if not opts:
                    self.failed.add(covered)
                    return None
                if best_opts is None or len(opts) < len(best_opts):
                    best_v, best_opts = v, opts
            free >>= 1
            v += 1
        for m in best_opts:
            rest = self.run(covered | m)
            if rest is not None:
                return [m] + rest
        self.failed.add(covered)
        return None


def _mask_to_edge(mask: int) -> tuple[int, ...]:
    out = []
    v = 0
    while mask:
        if mask & 1:
            out.append(v)
        mask >>= 1
        v += 1
    return tuple(out)


def find_perfect_matching(h: Hypergraph, budget: int | None = None) -> Matching | None:
    """Exhaustive search for a perfect matching.

    Branches on the uncovered vertex with fewest surviving edges (lowest label
    on ties), trying its edges in lexicographic order; dead covered-sets are
    memoised. Returns None when no perfect matching exists and raises
    :class:`SearchBudgetExceeded` when the node budget runs out first.
    """
    if h.n % h.k:
        return None
    if budget is None:
        budget = default_budget()
    found = _Search(h, budget).run(0)
    if found is None:
        return None
    return Matching.of(h.n, (_mask_to_edge(m) for m in found))


def search_nodes(h: Hypergraph, budget: int | None = None) -> tuple[Matching | None, int]:
    """Like :func:`find_perfect_matching` but also reports the nodes expanded."""
    if h.n % h.k:
        return None, 0
    s = _Search(h, default_budget() if budget is None else budget)
    found = s.run(0)
    m = None if found is None else Matching.of(h.n, (_mask_to_edge(x) for x in found))
    return m, s.nodes


@dataclass(frozen=True)
class ParityCertificate:
    partition: Partition
    edge_parity: str
    divisibility_reason: str

    def validates(self, h: Hypergraph) -> bool:
        """Re-derive the obstruction from scratch on ``h``."""
        again = parity_certificate(h, self.partition)
        return again is not None and again.edge_parity == self.edge_parity


def parity_certificate(h: Hypergraph, partition: Partition) -> ParityCertificate | None:
    """Certificate that no perfect matching exists, from edge parities w.r.t. A.

    All edges even with |A| odd, or all edges odd with |A| and n/k of
    opposite parity (|A| is then a sum of n/k odd numbers), rule out a
    perfect matching.
    """
    if h.n % h.k or partition.n != h.n:
        return None
    a = partition.a_side
    parities = {len(a.intersection(e)) % 2 for e in h.edges}
    if len(parities) > 1:
        return None
    a_size, blocks = partition.a_size, h.n // h.k
    if parities in ({0}, set()) and a_size % 2 == 1:
        return ParityCertificate(
            partition, "even",
            f"every edge meets A in an even number of vertices, so a perfect matching "
            f"would cover an even number of A-vertices, but |A| = {a_size} is odd")
    if parities in ({1}, set()) and a_size % 2 != blocks % 2:
        return ParityCertificate(
            partition, "odd",
            f"every edge meets A in an odd number of vertices, so a perfect matching "
            f"of n/k = {blocks} edges covers a number of A-vertices with the parity of "
            f"{blocks}, but |A| = {a_size}")
    return None


def search_parity_certificate(h: Hypergraph, max_n: int = 16) -> ParityCertificate | None:
    """Try every ordered bipartition with both sides non-empty, smallest A-mask first."""
    if h.n > max_n:
        return None
    n = h.n
    masks = h.masks
    for a_mask in range(1, (1 << n) - 1):
        par = {bin(m & a_mask).count("1") % 2 for m in masks}
        if len(par) > 1:
            continue
        part = Partition.from_a_side(n, (v for v in range(n) if a_mask >> v & 1))
        cert = parity_certificate(h, part)
        if cert is not None:
            return cert
    return None

