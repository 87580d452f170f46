"""The link graph on r-subsets and the bipartite-structure extraction."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import comb
from typing import Iterable

from ..errors import InvalidQueryError
from ..hypercore import Hypergraph


@dataclass(frozen=True)
class AuxGraph:
    """A simple graph on ``N`` vertices, stored as neighbour bit masks.

    When built from a 2r-uniform host, vertex ``i`` is the i-th r-subset of
    the host in lexicographic order (``labels[i]``).
    """

    r: int
    num_vertices: int
    adjacency: tuple[int, ...]
    labels: tuple[tuple[int, ...], ...] = ()
    candidate_partition: tuple[frozenset[int], int] | None = None

    @classmethod
    def from_edges(cls, num_vertices: int, edges: Iterable[tuple[int, int]], r: int = 0) -> "AuxGraph":
        adj = [0] * num_vertices
        for i, j in edges:
            if i == j:
                raise InvalidQueryError("self-loops are not allowed")
            adj[i] |= 1 << j
            adj[j] |= 1 << i
        return cls(r, num_vertices, tuple(adj))

    @property
    def edges(self) -> frozenset[tuple[int, int]]:
        out = set()
        for i, mask in enumerate(self.adjacency):
            m = mask >> (i + 1)
            j = i + 1
            while m:
                if m & 1:
                    out.add((i, j))
                m >>= 1
                j += 1
        return frozenset(out)

    @property
    def num_edges(self) -> int:
        return sum(m.bit_count() for m in self.adjacency) // 2

    def degree(self, v: int) -> int:
        return self.adjacency[v].bit_count()

    def neighbours(self, v: int) -> int:
        return self.adjacency[v]


def build_aux_graph(h: Hypergraph) -> AuxGraph:
    """G(H): r-subsets adjacent when disjoint with union an edge (k = 2r)."""
    if h.k % 2:
        raise InvalidQueryError(f"the link graph needs even k, got {h.k}")
    r = h.k // 2
    labels = tuple(combinations(range(h.n), r))
    index = {x: i for i, x in enumerate(labels)}
    adj = [0] * len(labels)
    for e in h.edges:
        for x in combinations(e, r):
            if x[0] != e[0]:
                continue  # each unordered split once: x holds the smallest vertex
            y = tuple(v for v in e if v not in x)
            i, j = index[x], index[y]
            adj[i] |= 1 << j
            adj[j] |= 1 << i
    return AuxGraph(r, len(labels), tuple(adj), labels)


def expected_aux_edges(h: Hypergraph) -> int:
    return h.num_edges * comb(h.k, h.k // 2) // 2


@dataclass(frozen=True)
class CaseReport:
    gamma: float
    num_vertices: int
    good_pair_counts: tuple[int, ...]  # per a: #b with |N(a) n N(b)| >= gamma*N
    heavy_count: int
    case_a: bool
    case_b: bool

    def as_dict(self) -> dict:
        return {"gamma": self.gamma, "N": self.num_vertices, "case_a": self.case_a, "case_b": self.case_b,
                "heavy_count": self.heavy_count, "min_good_pairs": min(self.good_pair_counts, default=0)}


def case_report(g: AuxGraph, gamma: float) -> CaseReport:
    n_vert = g.num_vertices
    adj = g.adjacency
    thresh = gamma * n_vert
    counts = tuple(sum(1 for b in range(n_vert) if (adj[a] & adj[b]).bit_count() >= thresh)
                   for a in range(n_vert))
    heavy = sum(1 for a in range(n_vert) if adj[a].bit_count() >= (0.5 + gamma) * n_vert)
    case_a = all(c >= (0.5 + gamma) * n_vert for c in counts) if n_vert else False
    case_b = heavy >= 2 * gamma * n_vert if n_vert else False
    return CaseReport(gamma, n_vert, counts, heavy, case_a, case_b)


def case_ab_detector(h: Hypergraph, gamma: float) -> CaseReport:
    """Which of the two absorbing-rich situations holds for the r-tuples of H."""
    return case_report(build_aux_graph(h), gamma)


@dataclass(frozen=True)
class Extraction:
    applicable: bool
    branch: str | None
    witness: int | None
    v1: frozenset[int]
    v2: frozenset[int]
    distance: int | None
    reason: str = ""

    def as_dict(self) -> dict:
        return {"applicable": self.applicable, "branch": self.branch, "witness": self.witness,
                "V1": sorted(self.v1), "distance": self.distance, "reason": self.reason}


def _bits(mask: int) -> list[int]:
    out = []
    v = 0
    while mask:
        if mask & 1:
            out.append(v)
        mask >>= 1
        v += 1
    return out


def bipartite_distance(g: AuxGraph, v1: Iterable[int]) -> int:
    """|E(G) symmetric-difference E(K_{V1,V2})|."""
    s = 0
    for v in v1:
        s |= 1 << v
    full = (1 << g.num_vertices) - 1
    diff = 0
    for i, mask in enumerate(g.adjacency):
        target = (full ^ s) if s >> i & 1 else s
        diff += (mask ^ target).bit_count()
    return diff // 2


def clique_pair_distance(g: AuxGraph, v1: Iterable[int]) -> int:
    """|E(G) symmetric-difference E(K_{V1} + K_{V2})|, the complement target."""
    s = 0
    for v in v1:
        s |= 1 << v
    full = (1 << g.num_vertices) - 1
    diff = 0
    for i, mask in enumerate(g.adjacency):
        side = s if s >> i & 1 else full ^ s
        diff += (mask ^ (side & ~(1 << i))).bit_count()
    return diff // 2


def bipartite_extract(g: AuxGraph, gamma: float = 1e-3, force: bool = False) -> Extraction:
    """Balanced bipartition of G close to K_{N/2,N/2} or to its complement.

    The witness a is the lowest-labelled vertex with at most (1/2+gamma)N
    vertices b sharing gamma*N neighbours with it. With A = N(a) and
    B = {b : |A n N(b)| < gamma*N}: if at most gamma^(1/4)*N vertices lie
    outside A u B, V1 is the half closest to A (complement branch);
    otherwise V1 is a half with |V1 n A| maximal (bipartite branch). Ties are
    resolved by neighbours in A: the complement branch prefers vertices with
    more, the bipartite branch vertices with fewer, then lower labels.
    Without ``force`` the extraction also requires that fewer than 2*gamma*N
    vertices have degree at least (1/2+gamma)N.
    """
    n_vert = g.num_vertices
    if n_vert % 2:
        raise InvalidQueryError(f"need an even number of vertices, got {n_vert}")
    adj = g.adjacency
    empty = frozenset()
    if not force:
        heavy = sum(1 for a in range(n_vert) if adj[a].bit_count() >= (0.5 + gamma) * n_vert)
        if heavy >= 2 * gamma * n_vert:
            return Extraction(False, None, None, empty, empty, None, f"{heavy} high-degree vertices")
    witness = None
    for a in range(n_vert):
        good = sum(1 for b in range(n_vert) if (adj[a] & adj[b]).bit_count() >= gamma * n_vert)
        if good <= (0.5 + gamma) * n_vert:
            witness = a
            break
    if witness is None:
        return Extraction(False, None, None, empty, empty, None, "no witnessing vertex")
    a_mask = adj[witness]
    b_mask = 0
    for b in range(n_vert):
        if (a_mask & adj[b]).bit_count() < gamma * n_vert:
            b_mask |= 1 << b
    full = (1 << n_vert) - 1
    outside = (full & ~(a_mask | b_mask)).bit_count()
    a_list = _bits(a_mask)
    rest = [v for v in range(n_vert) if not a_mask >> v & 1]
    into_a = {v: (adj[v] & a_mask).bit_count() for v in range(n_vert)}
    half = n_vert // 2
    if outside <= gamma ** 0.25 * n_vert:
        branch = "complement"
        keep = sorted(a_list, key=lambda v: (-into_a[v], v))[:half]
        pad = sorted(rest, key=lambda v: (-into_a[v], v))[: half - len(keep)]
    else:
        branch = "bipartite"
        keep = sorted(a_list, key=lambda v: (into_a[v], v))[:half]
        pad = sorted(rest, key=lambda v: (into_a[v], v))[: half - len(keep)]
    v1 = frozenset(keep + pad)
    v2 = frozenset(range(n_vert)) - v1
    dist = clique_pair_distance(g, v1) if branch == "complement" else bipartite_distance(g, v1)
    return Extraction(True, branch, witness, v1, v2, dist)


def exhaustive_min_distance(g: AuxGraph, target: str = "bipartite") -> int:
    """Minimum distance over all balanced bipartitions (small N only)."""
    n_vert = g.num_vertices
    if n_vert > 22:
        raise InvalidQueryError("exhaustive bisection search is limited to N <= 22")
    dist = bipartite_distance if target == "bipartite" else clique_pair_distance
    best = None
    for rest in combinations(range(1, n_vert), n_vert // 2 - 1):
        d = dist(g, (0,) + rest)
        if best is None or d < best:
            best = d
    return best if best is not None else 0
