"""Independent brute-force oracles, written without reusing library internals."""

from __future__ import annotations

from itertools import combinations

import numpy as np


def count_edges_containing(edges, s) -> int:
    s = set(s)
    return sum(1 for e in edges if s <= set(e))


def is_perfect_matching(edges_of_h, matching, n: int) -> bool:
    host = {tuple(sorted(e)) for e in edges_of_h}
    seen: list[int] = []
    for e in matching:
        if tuple(sorted(e)) not in host:
            return False
        seen.extend(e)
    return sorted(seen) == list(range(n))


def random_edges(rng: np.random.Generator, n: int, k: int, density: float) -> list[tuple[int, ...]]:
    return [e for e in combinations(range(n), k) if rng.random() < density]


def _disjoint_blocks(n: int, r: int, count: int):
    """Ordered tuples of ``count`` pairwise disjoint r-subsets of 0..n-1."""
    blocks = list(combinations(range(n), r))

    def extend(prefix, used):
        if len(prefix) == count:
            yield tuple(prefix)
            return
        for b in blocks:
            if used.isdisjoint(b):
                yield from extend(prefix + [b], used | set(b))

    yield from extend([], set())


def c3_oracle(n: int, r: int, red: set) -> tuple[int, int]:
    """Monochromatic expanded triangles via ordered block triples divided by 3!."""
    red_count = blue_count = 0
    for p1, p2, p3 in _disjoint_blocks(n, r, 3):
        cols = [tuple(sorted(x + y)) in red for x, y in ((p1, p2), (p2, p3), (p3, p1))]
        if all(cols):
            red_count += 1
        elif not any(cols):
            blue_count += 1
    return red_count // 6, blue_count // 6


def c4_oracle(n: int, r: int, red: set) -> tuple[int, int]:
    """(number of 4r-sets with a bad 4-cycle, number of bad 4-cycles).

    Ordered block 4-tuples are enumerated; each cycle appears 8 times
    (4 rotations times 2 directions).
    """
    sets = set()
    ordered = 0
    for cyc in _disjoint_blocks(n, r, 4):
        reds = sum(tuple(sorted(cyc[i] + cyc[(i + 1) % 4])) in red for i in range(4))
        if reds in (1, 3):
            ordered += 1
            sets.add(tuple(sorted(sum(cyc, ()))))
    return len(sets), ordered // 8


def min_bisection_distance(adjacency: dict[int, set[int]], num: int, bipartite: bool) -> int:
    """Smallest edit distance to K_{V1,V2} (or to two cliques) over all balanced splits."""
    best = None
    for v1 in combinations(range(num), num // 2):
        side = set(v1)
        d = 0
        for i, j in combinations(range(num), 2):
            target = (i in side) != (j in side)
            if not bipartite:
                target = not target
            d += (j in adjacency[i]) != target
        best = d if best is None else min(best, d)
    return best

