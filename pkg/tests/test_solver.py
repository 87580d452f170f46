from __future__ import annotations

from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from matchlab.constructions import Variant, build_bt, build_k_r, build_variant, spec_in_family
from matchlab.errors import InvalidQueryError, PreconditionError, SearchBudgetExceeded
from matchlab.hypercore import Hypergraph, Partition
from matchlab.solver import (GreedyStall, GreedyTrace, MatcherConfig, claim_edge_avoiding, balanced_good_matcher,
                             balanced_split_matching, extremal_case_matcher, find_perfect_matching, goodness,
                             greedy_structured_matching, is_valid_matching, greedy_alpha_bound, matching_problems,
                             parity_certificate, search_nodes, search_parity_certificate)
from matchlab.solver.exact import default_budget

from oracles import is_perfect_matching


def brute_force_has_pm(h: Hypergraph) -> bool:
    if h.n % h.k:
        return False
    for choice in combinations(h.edges, h.n // h.k):
        if len({v for e in choice for v in e}) == h.n:
            return True
    return False


@st.composite
def small_hypergraphs(draw):
    k = draw(st.integers(2, 3))
    n = k * draw(st.integers(1, 3))
    all_sets = list(combinations(range(n), k))
    return Hypergraph.from_edges(n, k, draw(st.lists(st.sampled_from(all_sets), unique=True)))


# -- exact search ---------------------------------------------------------------


@given(small_hypergraphs())
@settings(max_examples=150, deadline=None)
def test_exact_search_agrees_with_brute_force(h):
    pm = find_perfect_matching(h)
    assert (pm is not None) == brute_force_has_pm(h)
    if pm is not None:
        assert is_perfect_matching(h.edges, pm.edges, h.n)


def test_budget_exceeded_and_env_override(monkeypatch):
    h = Hypergraph.complete(8, 4)
    with pytest.raises(SearchBudgetExceeded):
        find_perfect_matching(h, budget=1)
    monkeypatch.setenv("MATCHLAB_BUDGET", "7")
    assert default_budget() == 7
    monkeypatch.delenv("MATCHLAB_BUDGET")
    assert default_budget() == 2_000_000


def test_matching_checker_reports_defects():
    h = Hypergraph.from_edges(6, 3, [(0, 1, 2), (3, 4, 5), (2, 3, 4)])
    assert is_valid_matching(h, [(0, 1, 2), (3, 4, 5)])
    assert matching_problems(h, [(0, 1, 2), (2, 3, 4)])
    assert matching_problems(h, [(0, 1, 2)])
    assert matching_problems(h, [(0, 1, 3), (2, 4, 5)])


@pytest.mark.parametrize("n,k,variant,a", [(8, 4, Variant.BBAR, 3), (8, 4, Variant.B, 5), (12, 4, Variant.B, 6),
                                           (9, 3, Variant.B, 4)])
def test_parity_certificates_for_family(n, k, variant, a):
    h = build_variant(n, k, range(a), variant)
    cert = parity_certificate(h, Partition.from_a_side(n, range(a)))
    assert cert is not None and cert.validates(h)
    assert find_perfect_matching(h) is None


def test_certificate_search_finds_hidden_partition():
    h = build_variant(8, 4, [1, 4, 6], Variant.BBAR)
    cert = search_parity_certificate(h)
    assert cert is not None and cert.validates(h)
    assert search_parity_certificate(Hypergraph.complete(8, 4)) is None
    assert search_parity_certificate(Hypergraph.complete(20, 4)) is None  # beyond the search limit


def test_search_nodes_counts():
    pm, nodes = search_nodes(Hypergraph.complete(8, 4))
    assert pm is not None and nodes >= 2


# -- structured greedy -------------------------------------------------------------


def test_alpha_bound_value():
    assert greedy_alpha_bound(4) == Fraction(1, 55296)


@pytest.mark.parametrize("r", [1, 2, 3])
def test_greedy_on_complete_pattern(r):
    t = 6
    a, b = list(range(t * r)), list(range(t * r, 4 * t))
    h = build_k_r(a, b, 4, r, n=4 * t)
    m = greedy_structured_matching(h, a, b, r, Fraction(1, 60000))
    assert is_perfect_matching(h.edges, m.edges, h.n)


def test_greedy_preconditions():
    a, b = list(range(6)), list(range(6, 24))
    h = build_k_r(a, b, 4, 1, n=24)
    with pytest.raises(PreconditionError):
        greedy_structured_matching(h, a[:5], b, 1, 0)  # sizes
    with pytest.raises(PreconditionError):
        greedy_structured_matching(h, a, b, 1, Fraction(1, 1000))  # alpha above the guaranteed range
    with pytest.raises(PreconditionError):
        greedy_structured_matching(h, a[:2], b[:6], 1, 0)  # t = 2 < 2(k-1)
    missing = Hypergraph.from_edges(24, 4, [e for e in h.edges if 0 not in e])
    with pytest.raises(PreconditionError):
        greedy_structured_matching(missing, a, b, 1, Fraction(1, 60000))


def test_greedy_exchanges_when_last_vertex_is_blocked():
    # vertex 5 keeps only edges through 6, which lexicographic growth hands to vertex 0
    a, b = list(range(6)), list(range(6, 24))
    full = build_k_r(a, b, 4, 1, n=24)
    h = Hypergraph.from_edges(24, 4, [e for e in full.edges if 5 not in e or 6 in e])
    trace = GreedyTrace()
    m = greedy_structured_matching(h, a, b, 1, 1, enforce_constants=False, trace=trace)
    assert is_perfect_matching(h.edges, m.edges, 24)
    assert trace.sizes[0] == 5
    assert trace.exchanges + trace.exact_fallback >= 1
    assert trace.diagnostics


def test_greedy_stall_without_matching():
    a, b = list(range(6)), list(range(6, 24))
    full = build_k_r(a, b, 4, 1, n=24)
    h = Hypergraph.from_edges(24, 4, [e for e in full.edges if not (set(e) & {0, 1}) or e == (0, 6, 7, 8)])
    with pytest.raises((GreedyStall, PreconditionError)):
        greedy_structured_matching(h, a, b, 1, 1, enforce_constants=False)


def test_claim_edge_avoiding():
    h = Hypergraph.complete(6, 3)
    assert claim_edge_avoiding(h, 0, {1, 2}) == (0, 3, 4)
    assert claim_edge_avoiding(h, 0, {1, 2, 3, 4}) is None
    with pytest.raises(InvalidQueryError):
        claim_edge_avoiding(h, 0, {0})


@pytest.mark.parametrize("k,n,branch", [(6, 24, "b"), (4, 16, "a"), (4, 32, "a")])
def test_balanced_split_branches(k, n, branch):
    part = Partition.from_a_side(n, range(n // 2))
    h = build_variant(n, k, range(n // 2), Variant.B)
    m, used = balanced_split_matching(h, part.a_side, part.b_side, 0)
    assert used == branch
    assert is_perfect_matching(h.edges, m.edges, n)
    assert balanced_good_matcher(h, part, 0).edges == m.edges


def test_balanced_split_rejects_unbalanced():
    h = build_variant(12, 4, range(5), Variant.B)
    with pytest.raises(PreconditionError):
        balanced_split_matching(h, range(5), range(5, 12), 0)


def test_goodness_counts_missing_reference_edges():
    ref = Hypergraph.complete(6, 3)
    h = Hypergraph.from_edges(6, 3, [e for e in ref.edges if e != (0, 1, 2)])
    rep = goodness(h, ref, Fraction(0))
    assert rep.per_vertex_deficiency[:4] == (1, 1, 1, 0)
    assert rep.bad_vertices == frozenset({0, 1, 2})


# -- near-extremal matcher ---------------------------------------------------------------


@pytest.mark.parametrize("n,k", [(12, 3), (15, 3), (12, 4), (16, 4), (12, 6)])
def test_matcher_outcomes_on_exact_constructions(n, k):
    for variant in (Variant.B, Variant.BBAR):
        for a in range(1, n):
            h = build_variant(n, k, range(a), variant)
            run = extremal_case_matcher(h, variant, Partition.from_a_side(n, range(a)))
            if spec_in_family(n, k, variant, a):
                assert not run.ok and run.failure.step == "2"
            elif run.ok:
                assert is_perfect_matching(h.edges, run.matching.edges, n)
            else:
                assert run.failure.step in ("4", "6")
                assert set(run.failure.as_dict()) == {"step", "pattern", "sizes", "message"}


@pytest.mark.parametrize("n,k,variant", [(16, 4, Variant.B), (16, 4, Variant.BBAR), (12, 6, Variant.B),
                                         (18, 3, Variant.B), (18, 3, Variant.BBAR)])
def test_matcher_succeeds_near_balance(n, k, variant):
    for a in range(n // 2 - 2, n // 2 + 3):
        if spec_in_family(n, k, variant, a):
            continue
        h = build_variant(n, k, range(a), variant)
        run = extremal_case_matcher(h, variant, Partition.from_a_side(n, range(a)))
        assert run.ok, run.as_dict()["failure"]


def test_matcher_relocates_misplaced_vertex():
    h, part = build_bt(16, 4, 0, Variant.BBAR)
    wrong = Partition.from_a_side(16, set(part.a_side) | {15})
    run = extremal_case_matcher(h, Variant.BBAR, wrong, MatcherConfig(eps2=0.05))
    assert run.ok
    step1 = next(s for s in run.steps if s.step == "1")
    assert step1.detail["bad_vertices"] == [15]


def test_matcher_odd_k_normalises_variant():
    h = build_variant(12, 3, range(6), Variant.B)
    run = extremal_case_matcher(h, "B", Partition.from_a_side(12, range(6)))
    assert run.case == "k-odd" and run.steps[0].step == "normalise"
    assert run.ok


def test_matcher_input_checks():
    h = Hypergraph.complete(10, 4)
    with pytest.raises(InvalidQueryError):
        extremal_case_matcher(h, Variant.B, Partition.from_a_side(10, range(5)))
