"""Immutable k-uniform hypergraphs, degree queries and the text file format."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from math import comb
from typing import Iterable, Mapping, Sequence, TextIO

from .errors import FormatError, InvalidQueryError

Edge = tuple[int, ...]


def _canonical_vertices(members: Iterable[int], n: int | None = None) -> tuple[int, ...]:
    out = tuple(sorted(set(int(v) for v in members)))
    if n is not None and out and (out[0] < 0 or out[-1] >= n):
        raise InvalidQueryError(f"vertex set {out} not contained in 0..{n - 1}")
    return out


@dataclass(frozen=True)
class Hypergraph:
    """A k-uniform hypergraph on the labelled vertices ``0..n-1``.

    Edges are stored as sorted tuples in lexicographic order. Instances are
    immutable; derived tables (incidence lists, bit masks, l-degree tables)
    are built lazily and cached on the instance.
    """

    n: int
    k: int
    edges: tuple[Edge, ...]
    meta: Mapping[str, object] = field(default_factory=dict, compare=False, repr=False)
    _tables: dict = field(default_factory=dict, compare=False, repr=False, init=False)

    def __post_init__(self) -> None:
        if not 2 <= self.k <= self.n:
            raise InvalidQueryError(f"need 2 <= k <= n, got n={self.n}, k={self.k}")
        canon = set()
        for e in self.edges:
            t = tuple(sorted(e))
            if len(t) != self.k or len(set(t)) != self.k:
                raise InvalidQueryError(f"edge {e} is not a {self.k}-set")
            if t[0] < 0 or t[-1] >= self.n:
                raise InvalidQueryError(f"edge {e} has a vertex outside 0..{self.n - 1}")
            if t in canon:
                raise InvalidQueryError(f"duplicate edge {t}")
            canon.add(t)
        object.__setattr__(self, "edges", tuple(sorted(canon)))

    @classmethod
    def from_edges(cls, n: int, k: int, edges: Iterable[Sequence[int]], **meta) -> "Hypergraph":
        return cls(n, k, tuple(tuple(e) for e in edges), meta=meta)

    @classmethod
    def complete(cls, n: int, k: int) -> "Hypergraph":
        return cls(n, k, tuple(combinations(range(n), k)))

    @classmethod
    def empty(cls, n: int, k: int) -> "Hypergraph":
        return cls(n, k, ())

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def __len__(self) -> int:
        return len(self.edges)

    def __contains__(self, edge: object) -> bool:
        if not isinstance(edge, (tuple, list, set, frozenset)):
            return False
        return tuple(sorted(edge)) in self.edge_set

    @cached_property
    def edge_set(self) -> frozenset[Edge]:
        return frozenset(self.edges)

    @cached_property
    def masks(self) -> tuple[int, ...]:
        """Bit mask of every edge, aligned with :attr:`edges`."""
        return tuple(sum(1 << v for v in e) for e in self.edges)

    @cached_property
    def mask_set(self) -> frozenset[int]:
        return frozenset(self.masks)

    @cached_property
    def incidence(self) -> tuple[tuple[int, ...], ...]:
        """For each vertex, the indices (into :attr:`edges`) of edges containing it."""
        inc: list[list[int]] = [[] for _ in range(self.n)]
        for i, e in enumerate(self.edges):
            for v in e:
                inc[v].append(i)
        return tuple(tuple(x) for x in inc)

    def vertex_degrees(self) -> tuple[int, ...]:
        return tuple(len(x) for x in self.incidence)

    def degree_table(self, ell: int) -> Counter:
        """Counter mapping each l-subset contained in some edge to its degree.

        Subsets of degree zero are absent. Built on first use per l.
        """
        if not 0 <= ell <= self.k:
            raise InvalidQueryError(f"l must lie in 0..{self.k}, got {ell}")
        table = self._tables.get(ell)
        if table is None:
            table = Counter()
            for e in self.edges:
                table.update(combinations(e, ell))
            self._tables[ell] = table
        return table


@dataclass(frozen=True)
class Partition:
    """An ordered bipartition (A, B) of ``0..n-1``."""

    n: int
    a_side: frozenset[int]
    b_side: frozenset[int]

    def __post_init__(self) -> None:
        a, b = frozenset(self.a_side), frozenset(self.b_side)
        object.__setattr__(self, "a_side", a)
        object.__setattr__(self, "b_side", b)
        if a & b:
            raise InvalidQueryError("partition sides intersect")
        if a | b != frozenset(range(self.n)):
            raise InvalidQueryError("partition sides do not cover the vertex set")

    @classmethod
    def from_a_side(cls, n: int, a_side: Iterable[int]) -> "Partition":
        a = frozenset(_canonical_vertices(a_side, n))
        return cls(n, a, frozenset(range(n)) - a)

    @property
    def a_size(self) -> int:
        return len(self.a_side)

    @property
    def a_parity(self) -> str:
        return "even" if self.a_size % 2 == 0 else "odd"

    @property
    def offset(self) -> int:
        """The t with |A| = floor(n/2) + t."""
        return self.a_size - self.n // 2

    def swapped(self) -> "Partition":
        return Partition(self.n, self.b_side, self.a_side)


def degree(h: Hypergraph, s: Iterable[int]) -> int:
    """Number of edges of ``h`` containing the vertex set ``s``."""
    sv = _canonical_vertices(s, h.n)
    if len(sv) > h.k:
        raise InvalidQueryError(f"|S| = {len(sv)} exceeds k = {h.k}")
    if not sv:
        return h.num_edges
    inc = h.incidence
    pivot = min(sv, key=lambda v: len(inc[v]))
    if len(sv) == 1:
        return len(inc[pivot])
    need = set(sv)
    return sum(1 for i in inc[pivot] if need.issubset(h.edges[i]))


def min_degree(h: Hypergraph, ell: int) -> int:
    """Minimum l-degree; ``min_degree(h, 0)`` is the edge count."""
    if not 0 <= ell < h.k:
        raise InvalidQueryError(f"l must satisfy 0 <= l < k = {h.k}, got {ell}")
    if ell == 0:
        return h.num_edges
    if ell == 1:
        return min(h.vertex_degrees())
    table = h.degree_table(ell)
    if len(table) < comb(h.n, ell):
        return 0
    return min(table.values())


def degree_transfer_check(h: Hypergraph, ell: int, ell_prime: int, x: Fraction | int | str) -> bool:
    """Evaluate the degree-transfer implication on one instance.

    Returns whether ``min_degree(h, l') >= x*C(n-l', k-l')`` implies
    ``min_degree(h, l) >= x*C(n-l, k-l)``.
    """
    x = Fraction(x)
    if not 0 <= ell <= ell_prime < h.k:
        raise InvalidQueryError(f"need 0 <= l <= l' < k, got l={ell}, l'={ell_prime}")
    if not 0 <= x <= 1:
        raise InvalidQueryError(f"x must lie in [0, 1], got {x}")
    n, k = h.n, h.k
    if min_degree(h, ell_prime) < x * comb(n - ell_prime, k - ell_prime):
        return True
    return min_degree(h, ell) >= x * comb(n - ell, k - ell)


def complement(h: Hypergraph) -> Hypergraph:
    present = h.edge_set
    return Hypergraph(h.n, h.k, tuple(e for e in combinations(range(h.n), h.k) if e not in present))


def induced(h: Hypergraph, a: Iterable[int]) -> tuple[Hypergraph, tuple[int, ...]]:
    """Subhypergraph induced by ``a``, relabelled to ``0..|a|-1``.

    Returns the hypergraph and the label map: new label ``i`` is old vertex
    ``labels[i]``.
    """
    labels = _canonical_vertices(a, h.n)
    if len(labels) < h.k:
        raise InvalidQueryError(f"cannot induce a {h.k}-uniform hypergraph on {len(labels)} vertices")
    index = {v: i for i, v in enumerate(labels)}
    keep = set(labels)
    edges = tuple(tuple(index[v] for v in e) for e in h.edges if keep.issuperset(e))
    return Hypergraph(len(labels), h.k, edges), labels


def edit_distance(h: Hypergraph, other: Hypergraph) -> int:
    """Size of the labelled symmetric difference of the two edge sets."""
    if h.n != other.n or h.k != other.k:
        raise InvalidQueryError(f"mismatched hypergraphs: (n,k)=({h.n},{h.k}) vs ({other.n},{other.k})")
    return len(h.edge_set ^ other.edge_set)


# -- text format --------------------------------------------------------------


def _data_lines(stream: TextIO):
    for lineno, raw in enumerate(stream, start=1):
        line = raw.strip()
        if line and not line.startswith("#"):
            yield lineno, line


def parse_hypergraph(stream: TextIO) -> Hypergraph:
    """Read the "n k m" header format; see :func:`format_hypergraph`."""
    lines = _data_lines(stream)
    try:
        lineno, header = next(lines)
    except StopIteration:
        raise FormatError("empty hypergraph file") from None
    try:
        n, k, m = (int(x) for x in header.split())
    except ValueError:
        raise FormatError(f"line {lineno}: header must be 'n k m', got {header!r}") from None
    edges = []
    for lineno, line in lines:
        try:
            e = tuple(int(x) for x in line.split())
        except ValueError:
            raise FormatError(f"line {lineno}: non-integer vertex in {line!r}") from None
        if len(e) != k:
            raise FormatError(f"line {lineno}: expected {k} vertices, got {len(e)}")
        if list(e) != sorted(set(e)):
            raise FormatError(f"line {lineno}: vertices must be strictly increasing")
        edges.append(e)
    if len(edges) != m:
        raise FormatError(f"header announces {m} edges, found {len(edges)}")
    try:
        return Hypergraph(n, k, tuple(edges))
    except InvalidQueryError as exc:
        raise FormatError(str(exc)) from None


def format_hypergraph(h: Hypergraph) -> str:
    lines = [f"{h.n} {h.k} {h.num_edges}"]
    lines.extend(" ".join(map(str, e)) for e in h.edges)
    return "\n".join(lines) + "\n"


def read_hypergraph(path) -> Hypergraph:
    with open(path, encoding="utf-8") as fh:
        return parse_hypergraph(fh)


def write_hypergraph(h: Hypergraph, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(format_hypergraph(h))


def parse_partition(stream: TextIO, n: int) -> Partition:
    """A partition file is one line listing the vertices of A."""
    for lineno, line in _data_lines(stream):
        try:
            a = [int(x) for x in line.split()]
        except ValueError:
            raise FormatError(f"line {lineno}: non-integer vertex in {line!r}") from None
        try:
            return Partition.from_a_side(n, a)
        except InvalidQueryError as exc:
            raise FormatError(str(exc)) from None
    raise FormatError("partition file lists no vertices")


def read_partition(path, n: int) -> Partition:
    with open(path, encoding="utf-8") as fh:
        return parse_partition(fh, n)
