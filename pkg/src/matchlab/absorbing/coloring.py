"""Red/blue colourings of 2r-sets: expanded-cycle censuses and the link-graph encoding."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import comb, factorial
from typing import Iterable, Iterator, TextIO

from ..errors import FormatError, InvalidQueryError, ResourceGuardError
from ..hypercore import Hypergraph
from .auxgraph import AuxGraph, build_aux_graph

DEFAULT_GUARD = 5_000_000


@dataclass(frozen=True)
class TwoColoring:
    """Colouring of all 2r-subsets of 0..n-1; sets not listed as red are blue."""

    n: int
    r: int
    red: frozenset[tuple[int, ...]]

    def __post_init__(self) -> None:
        if self.r < 1 or 2 * self.r > self.n:
            raise InvalidQueryError(f"need 1 <= r and 2r <= n, got n={self.n}, r={self.r}")
        red = frozenset(tuple(sorted(s)) for s in self.red)
        for s in red:
            if len(s) != 2 * self.r or len(set(s)) != 2 * self.r or s[0] < 0 or s[-1] >= self.n:
                raise InvalidQueryError(f"{s} is not a {2 * self.r}-subset of 0..{self.n - 1}")
        object.__setattr__(self, "red", red)

    def is_red(self, s: Iterable[int]) -> bool:
        return tuple(sorted(s)) in self.red

    @property
    def blue(self) -> frozenset[tuple[int, ...]]:
        return frozenset(s for s in combinations(range(self.n), 2 * self.r) if s not in self.red)


def format_coloring(c: TwoColoring) -> str:
    lines = [f"{c.n} {c.r}"]
    for s in combinations(range(c.n), 2 * c.r):
        lines.append(" ".join(map(str, s)) + (" R" if s in c.red else " B"))
    return "\n".join(lines) + "\n"


def parse_coloring(stream: TextIO) -> TwoColoring:
    """Header "n r", then one 2r-subset per line with a trailing R or B tag."""
    rows = [(i, ln.strip()) for i, ln in enumerate(stream, 1) if ln.strip() and not ln.lstrip().startswith("#")]
    if not rows:
        raise FormatError("empty colouring file")
    try:
        n, r = (int(x) for x in rows[0][1].split())
    except ValueError:
        raise FormatError(f"line {rows[0][0]}: header must be 'n r'") from None
    red, seen = set(), set()
    for lineno, line in rows[1:]:
        *verts, tag = line.split()
        if tag not in ("R", "B"):
            raise FormatError(f"line {lineno}: tag must be R or B, got {tag!r}")
        try:
            s = tuple(int(v) for v in verts)
        except ValueError:
            raise FormatError(f"line {lineno}: non-integer vertex") from None
        if len(s) != 2 * r or list(s) != sorted(set(s)) or s[0] < 0 or s[-1] >= n:
            raise FormatError(f"line {lineno}: expected a strictly increasing {2 * r}-subset of 0..{n - 1}")
        if s in seen:
            raise FormatError(f"line {lineno}: {s} listed twice")
        seen.add(s)
        if tag == "R":
            red.add(s)
    if len(seen) != comb(n, 2 * r):
        raise FormatError(f"colouring lists {len(seen)} sets, expected C({n},{2 * r}) = {comb(n, 2 * r)}")
    return TwoColoring(n, r, frozenset(red))


def read_coloring(path) -> TwoColoring:
    with open(path, encoding="utf-8") as fh:
        return parse_coloring(fh)


def write_coloring(c: TwoColoring, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(format_coloring(c))


def _block_partitions(items: tuple[int, ...], r: int) -> Iterator[list[tuple[int, ...]]]:
    """Unordered partitions of ``items`` into blocks of size r (first block holds items[0])."""
    if not items:
        yield []
        return
    head, tail = items[0], items[1:]
    for rest in combinations(tail, r - 1):
        block = (head,) + rest
        remaining = tuple(v for v in tail if v not in rest)
        for more in _block_partitions(remaining, r):
            yield [block] + more


def _guard(n: int, size: int, r: int, blocks: int, guard: int) -> None:
    per_set = factorial(blocks * r) // (factorial(r) ** blocks * factorial(blocks))
    cost = comb(n, size) * per_set
    if cost > guard:
        raise ResourceGuardError(f"census over {size}-sets of {n} vertices", cost, guard)


def c3_census(c: TwoColoring, guard: int = DEFAULT_GUARD) -> tuple[int, int]:
    """Monochromatic expanded triangles: (red count, blue count)."""
    r = c.r
    _guard(c.n, 3 * r, r, 3, guard)
    red = blue = 0
    for s in combinations(range(c.n), 3 * r):
        for a, b, d in _block_partitions(s, r):
            colours = {c.is_red(a + b), c.is_red(b + d), c.is_red(d + a)}
            if colours == {True}:
                red += 1
            elif colours == {False}:
                blue += 1
    return red, blue


def _cycle_witnesses(c: TwoColoring, s: tuple[int, ...]) -> Iterator[tuple[tuple[int, ...], ...]]:
    """Bad 4-cycles (P1, P2, P3, P4) on s: exactly one of the four unions differs in colour."""
    for blocks in _block_partitions(s, c.r):
        p1 = blocks[0]
        for order in ((1, 2, 3), (1, 3, 2), (2, 1, 3)):
            cyc = (p1, blocks[order[0]], blocks[order[1]], blocks[order[2]])
            reds = sum(c.is_red(cyc[i] + cyc[(i + 1) % 4]) for i in range(4))
            if reds in (1, 3):
                yield cyc


def bad_c4_census(c: TwoColoring, guard: int = DEFAULT_GUARD) -> int:
    """Number of 4r-sets carrying at least one bad expanded 4-cycle."""
    _guard(c.n, 4 * c.r, c.r, 4, guard)
    return sum(1 for s in combinations(range(c.n), 4 * c.r) if next(_cycle_witnesses(c, s), None) is not None)


def bad_c4_witness_count(c: TwoColoring, guard: int = DEFAULT_GUARD) -> int:
    """Number of bad expanded 4-cycles (partition plus cyclic order), summed over all 4r-sets."""
    _guard(c.n, 4 * c.r, c.r, 4, guard)
    return sum(sum(1 for _ in _cycle_witnesses(c, s)) for s in combinations(range(c.n), 4 * c.r))


def encode_h_as_coloring(h: Hypergraph, red_side: Iterable[int]) -> TwoColoring:
    """Colour the 2r-subsets of V(H) red on one side of a partition of V(G(H)), blue on the other.

    ``red_side`` lists vertex indices of G(H) (positions of 2r-subsets in
    lexicographic order).
    """
    if h.k % 4:
        raise InvalidQueryError(f"the encoding needs k divisible by 4, got {h.k}")
    labels = list(combinations(range(h.n), h.k // 2))
    idx = set(red_side)
    if any(not 0 <= i < len(labels) for i in idx):
        raise InvalidQueryError("red side lists indices outside the vertex set of G(H)")
    return TwoColoring(h.n, h.k // 4, frozenset(labels[i] for i in sorted(idx)))


@dataclass(frozen=True)
class InjectionCheck:
    bad_sets: int
    difference_pairs: int
    injective: bool
    all_witnessed: bool

    @property
    def holds(self) -> bool:
        return self.injective and self.all_witnessed and self.bad_sets <= self.difference_pairs


def difference_pair(h: Hypergraph, c: TwoColoring, cycle: tuple[tuple[int, ...], ...]) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """The pair of 2r-sets that a bad 4-cycle forces into E(G) sym-diff E(K_{R,B})."""
    unions = [tuple(sorted(cycle[i] + cycle[(i + 1) % 4])) for i in range(4)]
    colours = [c.is_red(u) for u in unions]
    odd = next(i for i in range(4) if colours.count(colours[i]) == 1)
    q = tuple(sorted(sum(cycle, ())))
    if q in h.edge_set:
        pair = (unions[(odd + 1) % 4], unions[(odd + 3) % 4])
    else:
        pair = (unions[odd], unions[(odd + 2) % 4])
    return tuple(sorted(pair))


def difference_injection_check(h: Hypergraph, c: TwoColoring, g: AuxGraph | None = None,
                               guard: int = DEFAULT_GUARD) -> InjectionCheck:
    """Map each bad 4r-set to a pair in E(G) sym-diff E(K_{R,B}) and check the map is injective."""
    g = g or build_aux_graph(h)
    if h.k != 4 * c.r or h.n != c.n:
        raise InvalidQueryError("colouring and hypergraph do not match")
    _guard(c.n, 4 * c.r, c.r, 4, guard)
    index = {x: i for i, x in enumerate(g.labels)}
    red_mask = 0
    for s in c.red:
        red_mask |= 1 << index[s]
    full = (1 << g.num_vertices) - 1
    diff = 0
    for i, mask in enumerate(g.adjacency):
        target = (full ^ red_mask) if red_mask >> i & 1 else red_mask
        diff += (mask ^ target).bit_count()
    diff //= 2
    images = set()
    bad = 0
    witnessed = True
    for s in combinations(range(c.n), 4 * c.r):
        cyc = next(_cycle_witnesses(c, s), None)
        if cyc is None:
            continue
        bad += 1
        x, y = difference_pair(h, c, cyc)
        i, j = index[x], index[y]
        in_g = bool(g.adjacency[i] >> j & 1)
        in_k = (red_mask >> i & 1) != (red_mask >> j & 1)
        if in_g == in_k:
            witnessed = False
        images.add((x, y))
    return InjectionCheck(bad, diff, len(images) == bad, witnessed)
