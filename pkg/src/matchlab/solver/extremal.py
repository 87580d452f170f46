"""Constructive perfect matchings for hypergraphs close to a parity construction.

The matcher follows a six-step plan: classify vertices by goodness and move the
bad ones across the partition (1); pick a parity-breaking edge when the moved
partition is parity-obstructed (2); cover the bad vertices by a small matching
(3); fix the class sizes with a few patterned edges (4); cover bad vertices of
the parity breaker (5); and finish with the greedy matchers (6). Each existence
claim is checked at runtime; a claim that fails at small n produces a
:class:`FailureReport` instead of an exception.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable

from ..constructions import Variant, build_variant, spec_in_family
from ..errors import InvalidQueryError, InvariantViolation, PreconditionError
from ..hypercore import Hypergraph, Partition
from .exact import Matching, matching_problems
from .structured import (GreedyStall, GreedyTrace, claim_edge_avoiding, balanced_split_matching, goodness,
                         greedy_structured_matching)


@dataclass(frozen=True)
class MatcherConfig:
    """Closeness constants; eps1 and eps2 default to sqrt(k)*eps^(2/3) and sqrt(k)*eps^(1/3)."""

    epsilon: float = 1e-3
    eps1: float | None = None
    eps2: float | None = None

    def resolved(self, k: int) -> tuple[float, float, float]:
        e1 = self.eps1 if self.eps1 is not None else math.sqrt(k) * self.epsilon ** (2 / 3)
        e2 = self.eps2 if self.eps2 is not None else math.sqrt(k) * self.epsilon ** (1 / 3)
        return self.epsilon, e1, e2


@dataclass(frozen=True)
class StepRecord:
    step: str
    detail: dict


@dataclass(frozen=True)
class FailureReport:
    step: str
    pattern: str
    sizes: dict
    message: str

    def as_dict(self) -> dict:
        return {"step": self.step, "pattern": self.pattern, "sizes": dict(self.sizes), "message": self.message}


@dataclass
class MatcherRun:
    matching: Matching | None
    failure: FailureReport | None
    case: str
    steps: list[StepRecord] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.matching is not None

    def as_dict(self) -> dict:
        return {
            "ok": self.ok,
            "case": self.case,
            "matching": [list(e) for e in self.matching.edges] if self.matching else None,
            "failure": self.failure.as_dict() if self.failure else None,
            "steps": [{"step": s.step, **s.detail} for s in self.steps],
        }


class _StepFailed(Exception):
    def __init__(self, report: FailureReport):
        super().__init__(report.message)
        self.report = report


class _State:
    """Live vertex bookkeeping shared by the steps."""

    def __init__(self, h: Hypergraph, a_side: Iterable[int], eps2: float, log: list[StepRecord]):
        self.h = h
        self.k = h.k
        self.a = set(a_side)
        self.live = set(range(h.n))
        self.chosen: list[tuple[int, ...]] = []
        self.reserved: set[int] = set()
        self.eps2 = eps2
        self.log = log

    # sizes -------------------------------------------------------------
    @property
    def a_live(self) -> list[int]:
        return sorted(v for v in self.live if v in self.a)

    @property
    def b_live(self) -> list[int]:
        return sorted(v for v in self.live if v not in self.a)

    def sizes(self) -> dict:
        return {"A": len(self.a_live), "B": len(self.b_live), "reserved": len(self.reserved),
                "matched_edges": len(self.chosen)}

    def a_count(self, e: Iterable[int]) -> int:
        return sum(1 for v in e if v in self.a)

    def swap_sides(self) -> None:
        self.a = set(range(self.h.n)) - self.a

    # edge handling -----------------------------------------------------
    def take(self, e: tuple[int, ...]) -> None:
        if not self.live.issuperset(e):
            raise InvariantViolation(f"edge {e} uses vertices that are no longer available")
        self.live.difference_update(e)
        self.reserved.difference_update(e)
        self.chosen.append(e)

    def fail(self, step: str, pattern: str, message: str) -> None:
        raise _StepFailed(FailureReport(step, pattern, self.sizes(), message))

    def pattern_edges(self, step: str, r: int, count: int, avoid: Iterable[int] = ()) -> list[tuple[int, ...]]:
        """Greedily take ``count`` disjoint live A^r B^(k-r) edges missing ``avoid`` and the reserve."""
        pattern = f"A^{r}B^{self.k - r}"
        if count == 0:
            return []
        if not 0 <= r <= self.k:
            self.fail(step, pattern, f"pattern {pattern} is not defined for k={self.k}")
        blocked = set(avoid) | self.reserved
        free = self.live - blocked
        found = []
        for e in self.h.edges:
            if free.issuperset(e) and self.a_count(e) == r:
                found.append(e)
                free.difference_update(e)
                if len(found) == count:
                    break
        if len(found) < count:
            self.fail(step, pattern, f"found {len(found)} of {count} disjoint {pattern} edges")
        for e in found:
            self.take(e)
        return found


def _restricted_alpha(eps2: float, n: int, m: int, k: int) -> float:
    # goodness relative to a sub-instance on m of the n vertices
    return eps2 * (n / m) ** (k - 1) if m else eps2


def extremal_case_matcher(h: Hypergraph, variant: Variant | str, partition: Partition,
                          config: MatcherConfig | None = None) -> MatcherRun:
    """Run Steps 1-6 against the construction ``variant`` on ``partition``.

    Returns a :class:`MatcherRun` holding either a validated perfect matching
    or the report of the step whose existence claim failed.
    """
    config = config or MatcherConfig()
    variant = Variant(variant) if not isinstance(variant, str) else Variant.parse(variant)
    n, k = h.n, h.k
    if n % k:
        raise InvalidQueryError(f"k = {k} does not divide n = {n}")
    if partition.n != n:
        raise InvalidQueryError("partition and hypergraph disagree on n")
    a_side = set(partition.a_side)
    steps: list[StepRecord] = []
    if k % 2 == 1 and variant is Variant.B:
        # for odd k the odd construction on (A, B) is the even one on (B, A)
        a_side = set(partition.b_side)
        variant = Variant.BBAR
        steps.append(StepRecord("normalise", {"note": "odd k: B(A,B) treated as Bbar(B,A)"}))
    if k % 2 == 1:
        case = "k-odd"
    elif variant is Variant.BBAR:
        case = "k-even-Bbar"
    else:
        case = "k-even-B-k/2-even" if k % 4 == 0 else "k-even-B-k/2-odd"
    try:
        edges = _run(h, variant, a_side, config, steps, case)
    except _StepFailed as exc:
        return MatcherRun(None, exc.report, case, steps)
    matching = Matching.of(n, edges)
    problems = matching_problems(h, matching.edges)
    if problems:
        raise InvariantViolation(f"assembled matching is invalid: {problems[:3]}")
    return MatcherRun(matching, None, case, steps)


def _run(h: Hypergraph, variant: Variant, a_side: set[int], config: MatcherConfig,
         steps: list[StepRecord], case: str) -> list[tuple[int, ...]]:
    n, k = h.n, h.k
    eps, eps1, eps2 = config.resolved(k)

    # Step 1: goodness and relocation
    reference = build_variant(n, k, sorted(a_side), variant) if 0 < len(a_side) < n else None
    if reference is None:
        raise InvalidQueryError("both partition classes must be non-empty")
    report = goodness(h, reference, eps2)
    v0 = set(report.bad_vertices)
    missing = len(reference.edge_set - h.edge_set)
    a1 = (a_side - v0) | (v0 - a_side)
    st = _State(h, a1, eps2, steps)
    family = spec_in_family(n, k, variant, len(a1))
    steps.append(StepRecord("1", {
        "eps": eps, "eps1": eps1, "eps2": eps2, "missing_reference_edges": missing,
        "contains_within_eps": missing <= eps * n ** k, "bad_vertices": sorted(v0),
        "bad_within_eps1": len(v0) <= eps1 * n, "A1": len(a1), "B1": n - len(a1),
        "parity_obstructed": family}))

    # Step 2: parity breaker
    keep_odd = variant is Variant.B  # edges the reference keeps, w.r.t. (A1, B1) for good vertices
    need_e0 = family if k % 2 == 0 else (len(a1) % (k - 1)) % 2 == 1
    e0: tuple[int, ...] = ()
    if need_e0:
        want = 0 if keep_odd else 1
        pool = sorted((e for e in h.edges if st.a_count(e) % 2 == want),
                      key=lambda e: (len(v0.intersection(e)), e))
        label = "(A1,B1)-even edge" if want == 0 else "(A1,B1)-odd edge"
        if not pool:
            st.fail("2", label, "no parity-breaking edge exists")
        e0 = pool[0]
        st.reserved = set(e0)
        steps.append(StepRecord("2", {"e0": list(e0), "r0": st.a_count(e0), "pool": len(pool)}))

    # Step 3: cover V0 \ e0 by reference-type edges
    ref_parity = 1 if keep_odd else 0
    m1: list[tuple[int, ...]] = []
    for v in sorted(v0 - set(e0)):
        used = set(range(n)) - st.live
        avoid = (v0 - {v}) | used | set(e0)
        e = claim_edge_avoiding(h, v, avoid, lambda e: st.a_count(e) % 2 == ref_parity)
        if e is None:
            st.fail("3", "(A1,B1)-odd edge" if keep_odd else "(A1,B1)-even edge",
                    f"no suitable edge through bad vertex {v} avoids the other bad vertices")
        st.take(e)
        m1.append(e)
    padding = 0
    if case.startswith("k-even-B-") and not family:
        while len(m1) % 4:
            picked = None
            for e in h.edges:
                if st.live.issuperset(e) and st.a_count(e) % 2 == 1 and not st.reserved.intersection(e):
                    picked = e
                    break
            if picked is None:
                st.fail("3", "(A1,B1)-odd edge", "cannot pad the cover matching to a multiple of 4 edges")
            st.take(picked)
            m1.append(picked)
            padding += 1
    steps.append(StepRecord("3", {"M1": len(m1), "padding": padding, **st.sizes()}))

    if case == "k-even-Bbar":
        _finish_bbar_even(st, e0, n)
    elif case.startswith("k-even-B-"):
        _finish_b_even(st, e0, v0, family, n)
    else:
        _finish_odd(st, e0, n)
    if st.live:
        raise InvariantViolation(f"{len(st.live)} vertices left uncovered")
    return st.chosen


def _step6_greedy(st: _State, a: list[int], b: list[int], r: int, n: int, label: str) -> None:
    m = len(a) + len(b)
    alpha = _restricted_alpha(st.eps2, n, m, st.k)
    trace = GreedyTrace()
    try:
        mt = greedy_structured_matching(st.h, a, b, r, alpha, enforce_constants=False, trace=trace)
    except (PreconditionError, GreedyStall) as exc:
        st.fail("6", f"A^{r}B^{st.k - r}", f"{label}: {exc}")
    for e in mt.edges:
        st.take(e)
    st.log.append(StepRecord("6", {"part": label, "r": r, "alpha": alpha, "edges": len(mt.edges),
                                   "exchanges": trace.exchanges, "exact_fallback": trace.exact_fallback}))


def _step6_balanced(st: _State, n: int) -> None:
    a, b = st.a_live, st.b_live
    alpha = _restricted_alpha(st.eps2, n, len(a) + len(b), st.k)
    trace = GreedyTrace()
    try:
        mt, branch = balanced_split_matching(st.h, a, b, alpha, trace=trace)
    except (PreconditionError, GreedyStall) as exc:
        st.fail("6", "odd edges on (A3,B3)", str(exc))
    for e in mt.edges:
        st.take(e)
    st.log.append(StepRecord("6", {"part": "balanced", "branch": branch, "alpha": alpha,
                                   "edges": len(mt.edges), "exchanges": trace.exchanges,
                                   "exact_fallback": trace.exact_fallback}))


def _finish_bbar_even(st: _State, e0: tuple[int, ...], n: int) -> None:
    k = st.k
    if e0:
        st.take(e0)
    s = len(st.a_live) % k
    if s % 2:
        raise InvariantViolation(f"|A2| mod k = {s} is odd")
    e2 = st.pattern_edges("4", s, 1 if s else 0)
    if len(st.a_live) % k or len(st.b_live) % k:
        raise InvariantViolation("Step 4 left class sizes not divisible by k")
    st.log.append(StepRecord("4", {"s": s, "e2": [list(e) for e in e2], **st.sizes()}))
    _step6_greedy(st, st.a_live, [], k, n, "A3")
    _step6_greedy(st, st.b_live, [], k, n, "B3")


def _step5_pairs(st: _State, e0: tuple[int, ...], v0: set[int]) -> int:
    """Cover the bad vertices of an unused e0, each with an opposite-class edge pair."""
    k = st.k
    removed = 0
    for v in sorted(v0.intersection(e0)):
        if v not in st.live:
            continue
        avoid = (set(range(st.h.n)) - st.live) | (set(e0) - {v})
        e = claim_edge_avoiding(st.h, v, avoid, lambda e: st.a_count(e) % 2 == 1)
        if e is None:
            st.fail("5", "odd edge through a bad vertex of e0", f"no live odd edge contains {v}")
        r = st.a_count(e)
        st.take(e)
        st.pattern_edges("5", k - r, 1, avoid=e0)
        removed += 2
    st.reserved.clear()
    return removed


def _finish_b_even(st: _State, e0: tuple[int, ...], v0: set[int], family: bool, n: int) -> None:
    k = st.k
    half = k // 2
    r0 = st.a_count(e0) if e0 else 0
    swapped = False
    if len(st.a_live) < len(st.b_live):
        st.swap_sides()
        swapped = True
        r0 = k - r0 if e0 else 0
    d = len(st.a_live) - len(st.b_live)
    if d % 2:
        raise InvariantViolation(f"d = {d} is odd")
    e0_used = False
    if k % 4 == 0:
        st.pattern_edges("4", half + 1, d // 2)
        if len(st.a_live) != len(st.b_live):
            raise InvariantViolation("Step 4 did not balance the classes")
        s = len(st.a_live) % k
        if s not in (0, half):
            raise InvariantViolation(f"|A3| mod k = {s} is neither 0 nor k/2")
        if s == half and not e0:
            raise InvariantViolation("|A3| = k/2 mod k although the partition is not parity-obstructed")
        sub = "1a" if s == 0 else "1b"
        if s == half:
            st.take(e0)
            e0_used = True
            if r0 <= half:
                st.pattern_edges("4", half + 1, half - r0)
            else:
                st.pattern_edges("4", half - 1, r0 - half)
    else:
        if not family and d % 4:
            raise InvariantViolation("d = 2 mod 4 although the partition is not parity-obstructed")
        sub = "2a"
        if d % 4 == 2:
            if not e0:
                raise InvariantViolation("d = 2 mod 4 without a parity breaker")
            sub = "2b"
            st.take(e0)
            e0_used = True
            if len(st.a_live) < len(st.b_live):
                st.swap_sides()
                swapped = not swapped
            d = len(st.a_live) - len(st.b_live)
            if d % 4:
                raise InvariantViolation(f"after removing e0, d = {d} is not divisible by 4")
        if d and half < 2:
            st.fail("4", f"A^{half + 2}B^{half - 2}", "balancing pattern is undefined for k = 2")
        st.pattern_edges("4", half + 2, d // 4)
        if len(st.a_live) != len(st.b_live):
            raise InvariantViolation("Step 4 did not balance the classes")
    st.log.append(StepRecord("4", {"subcase": sub, "d": d, "r0": r0, "swapped": swapped, **st.sizes()}))
    if not e0_used and e0 and v0.intersection(e0):
        pairs = _step5_pairs(st, e0, v0)
        st.log.append(StepRecord("5", {"edges": pairs, **st.sizes()}))
    st.reserved.clear()
    if len(st.a_live) != len(st.b_live):
        raise InvariantViolation("classes unbalanced before Step 6")
    if k % 4 == 0 and len(st.a_live) % k:
        raise InvariantViolation("|A| not divisible by k before Step 6")
    _step6_balanced(st, n)


def _finish_odd(st: _State, e0: tuple[int, ...], n: int) -> None:
    k = st.k
    s = len(st.a_live) % (k - 1)
    if s % 2 == 1:
        if not e0:
            raise InvariantViolation("|A2| mod (k-1) is odd without a parity breaker")
        st.take(e0)
        s = len(st.a_live) % (k - 1)
        if s % 2:
            raise InvariantViolation("removing e0 did not make |A2| mod (k-1) even")
    elif e0:
        raise InvariantViolation("parity breaker chosen although |A2| mod (k-1) is even")
    e2 = st.pattern_edges("4", s, 1)
    if len(st.a_live) % (k - 1):
        raise InvariantViolation("|A3| is not divisible by k-1")
    a3, b3 = st.a_live, st.b_live
    need = len(a3) // (k - 1)
    st.log.append(StepRecord("4", {"s": s, "e2": [list(e) for e in e2], **st.sizes()}))
    if need > len(b3):
        st.fail("6", f"A^{k - 1}B^1", f"B3 has {len(b3)} vertices but {need} are needed")
    b31, b32 = b3[:need], b3[need:]
    if len(b32) % k:
        raise InvariantViolation("|B3^2| is not divisible by k")
    _step6_greedy(st, a3, b31, k - 1, n, "A3+B3^1")
    _step6_greedy(st, b32, [], k, n, "B3^2")
