"""Generators for the parity constructions and the extremal family."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from itertools import combinations
from math import comb
from typing import Iterable, Iterator

from .errors import InvalidConstructionError, InvalidQueryError
from .hypercore import Hypergraph, Partition, _canonical_vertices


class Variant(str, Enum):
    """Which parity class a construction keeps: odd (B) or even (B-bar)."""

    B = "B"
    BBAR = "Bbar"

    @classmethod
    def parse(cls, text: str) -> "Variant":
        key = text.strip().lower().replace("-", "").replace("_", "")
        if key == "b":
            return cls.B
        if key in ("bbar", "barb", "complement"):
            return cls.BBAR
        raise ValueError(f"unknown variant {text!r} (use B or Bbar)")

    @property
    def keeps_odd(self) -> bool:
        return self is Variant.B


@dataclass(frozen=True)
class ExtremalSpec:
    n: int
    k: int
    variant: Variant
    a_size: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "variant", Variant(self.variant))
        if not 0 < self.a_size < self.n:
            raise InvalidConstructionError(f"need 0 < |A| < n, got |A|={self.a_size}, n={self.n}")

    @property
    def in_family(self) -> bool:
        """Membership in the parity-obstructed extremal family."""
        return spec_in_family(self.n, self.k, self.variant, self.a_size)

    @property
    def t(self) -> int:
        return self.a_size - self.n // 2

    def build(self) -> Hypergraph:
        a = range(self.a_size)
        if self.variant is Variant.B:
            return build_b(self.n, self.k, a)
        return build_b_bar(self.n, self.k, a)

    def label(self) -> str:
        return f"{self.variant.value}(n={self.n},k={self.k},|A|={self.a_size})"


def spec_in_family(n: int, k: int, variant: Variant, a_size: int) -> bool:
    if k < 2 or n % k or not 0 < a_size < n:
        return False
    if Variant(variant) is Variant.BBAR:
        return a_size % 2 == 1
    if (n // k) % 2 == 1:
        return a_size % 2 == 0
    return a_size % 2 == 1


@dataclass(frozen=True)
class ParityClass:
    edge: tuple[int, ...]
    intersection_size: int

    @property
    def parity(self) -> str:
        return "odd" if self.intersection_size % 2 else "even"


def parity_class(edge: Iterable[int], a_side: Iterable[int]) -> ParityClass:
    e = tuple(sorted(edge))
    return ParityClass(e, len(set(e).intersection(a_side)))


def _parity_edges(n: int, k: int, a: Iterable[int], odd: bool) -> Hypergraph:
    if k > n:
        raise InvalidConstructionError(f"k={k} exceeds n={n}")
    a_side = _canonical_vertices(a, n)
    if not 0 < len(a_side) < n:
        raise InvalidConstructionError("both vertex classes must be non-empty")
    in_a = [False] * n
    for v in a_side:
        in_a[v] = True
    want = 1 if odd else 0
    edges = tuple(e for e in combinations(range(n), k) if sum(in_a[v] for v in e) % 2 == want)
    return Hypergraph(n, k, edges, meta={"a_side": a_side, "variant": "B" if odd else "Bbar"})


def build_b(n: int, k: int, a: Iterable[int]) -> Hypergraph:
    """All k-sets meeting ``a`` in an odd number of vertices."""
    return _parity_edges(n, k, a, odd=True)


def build_b_bar(n: int, k: int, a: Iterable[int]) -> Hypergraph:
    """All k-sets meeting ``a`` in an even number of vertices."""
    return _parity_edges(n, k, a, odd=False)


def build_variant(n: int, k: int, a: Iterable[int], variant: Variant) -> Hypergraph:
    return build_b(n, k, a) if Variant(variant) is Variant.B else build_b_bar(n, k, a)


def bt_partition(n: int, t: int) -> Partition:
    if not -(n // 2) < t < (n + 1) // 2:
        raise InvalidConstructionError(f"offset t={t} outside ({-(n // 2)}, {(n + 1) // 2})")
    return Partition.from_a_side(n, range(n // 2 + t))


def build_bt(n: int, k: int, t: int, variant: Variant = Variant.B) -> tuple[Hypergraph, Partition]:
    """The construction with |A| = floor(n/2) + t and A a prefix of the labels."""
    part = bt_partition(n, t)
    return build_variant(n, k, sorted(part.a_side), variant), part


def build_k_r(a: Iterable[int], b: Iterable[int], k: int, r: int, n: int | None = None) -> Hypergraph:
    """All k-sets with exactly ``r`` vertices in ``a`` and ``k - r`` in ``b``.

    The vertex set is ``0..n-1`` (default: one past the largest label used).
    An infeasible ``r`` yields the empty hypergraph with ``meta['feasible']``
    set to False.
    """
    a_side = _canonical_vertices(a)
    b_side = _canonical_vertices(b)
    if set(a_side) & set(b_side):
        raise InvalidConstructionError("A and B must be disjoint")
    if n is None:
        n = max(a_side + b_side, default=-1) + 1
    n = max(n, k)
    if (a_side and a_side[-1] >= n) or (b_side and b_side[-1] >= n) or min(a_side + b_side, default=0) < 0:
        raise InvalidConstructionError(f"labels must lie in 0..{n - 1}")
    feasible = 0 <= r <= k and r <= len(a_side) and k - r <= len(b_side)
    if not feasible:
        return Hypergraph(n, k, (), meta={"feasible": False, "r": r})
    edges = tuple(tuple(sorted(x + y)) for x in combinations(a_side, r) for y in combinations(b_side, k - r))
    return Hypergraph(n, k, edges, meta={"feasible": True, "r": r})


def k_r_edge_count(a_size: int, b_size: int, k: int, r: int) -> int:
    if not 0 <= r <= k:
        return 0
    return comb(a_size, r) * comb(b_size, k - r)


def extremal_specs(n: int, k: int) -> list[ExtremalSpec]:
    """Members of the extremal family, one canonical representative per |A|.

    B-bar members come first, then B members, each by increasing |A|.
    """
    if k < 2 or n < k or n % k:
        raise InvalidQueryError(f"extremal family needs k >= 2 and k | n, got n={n}, k={k}")
    specs = [ExtremalSpec(n, k, Variant.BBAR, a) for a in range(1, n) if a % 2 == 1]
    want = 0 if (n // k) % 2 == 1 else 1
    specs += [ExtremalSpec(n, k, Variant.B, a) for a in range(1, n) if a % 2 == want]
    return specs


def extremal_family(n: int, k: int) -> Iterator[tuple[ExtremalSpec, Hypergraph]]:
    for spec in extremal_specs(n, k):
        yield spec, spec.build()


def expanded_cycle_template(r: int, length: int) -> Hypergraph:
    """Expanded triangle (length 3) or 4-cycle (length 4) on r-blocks.

    Block ``i`` holds labels ``i*r .. i*r + r - 1``; consecutive blocks (cyclically)
    form the 2r-edges.
    """
    if length not in (3, 4):
        raise InvalidConstructionError(f"length must be 3 or 4, got {length}")
    if r < 1:
        raise InvalidConstructionError(f"r must be positive, got {r}")
    blocks = [tuple(range(i * r, (i + 1) * r)) for i in range(length)]
    edges = tuple(tuple(sorted(blocks[i] + blocks[(i + 1) % length])) for i in range(length))
    return Hypergraph(length * r, 2 * r, edges)
