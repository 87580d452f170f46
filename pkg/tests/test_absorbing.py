from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from math import comb

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from matchlab.absorbing import (AbsorptionFailure, FamilyBoundViolation, absorb, build_absorbing_family,
                                enumerate_absorbing_2k, enumerate_absorbing_4k, family_size_expectation,
                                is_absorbing, make_rng, perfect_matching_on, unrank_combination)
from matchlab.constructions import Variant, build_bt
from matchlab.errors import InvalidQueryError
from matchlab.hypercore import Hypergraph

from oracles import is_perfect_matching


@given(st.integers(1, 12), st.data())
@settings(max_examples=80, deadline=None)
def test_unrank_is_lexicographic(n, data):
    k = data.draw(st.integers(0, n))
    rank = data.draw(st.integers(0, comb(n, k) - 1))
    assert unrank_combination(n, k, rank) == list(combinations(range(n), k))[rank]


def test_rng_streams_are_reproducible_and_distinct():
    a = make_rng(5, 0).integers(0, 1 << 30, 8)
    assert np.array_equal(a, make_rng(5, 0).integers(0, 1 << 30, 8))
    assert not np.array_equal(a, make_rng(5, 1).integers(0, 1 << 30, 8))
    with pytest.raises(InvalidQueryError):
        make_rng(-1)


def test_pattern_counts_on_complete_hosts():
    # on K^4_10 every 4-set outside Q qualifies; on K^4_14 the 8-sets are the complements of Q plus 2 vertices
    assert len(enumerate_absorbing_2k(Hypergraph.complete(10, 4), (0, 1, 2, 3))) == comb(6, 4)
    res = enumerate_absorbing_4k(Hypergraph.complete(14, 4), (0, 1, 2, 3))
    assert len(res.sets) == comb(10, 8) and not res.truncated
    assert enumerate_absorbing_4k(Hypergraph.complete(14, 4), (0, 1, 2, 3), budget=5).truncated


def test_pattern_sets_on_parity_host_are_absorbing():
    h, _ = build_bt(12, 4, 0, Variant.BBAR)
    for q in [(0, 1, 2, 3), (0, 1, 6, 7), (0, 6, 7, 8)]:
        for s in enumerate_absorbing_2k(h, q):
            assert is_absorbing(h, s, q) is not None


def test_is_absorbing_checks():
    h = Hypergraph.complete(8, 4)
    cert = is_absorbing(h, (4, 5, 6, 7), (0, 1, 2, 3))
    assert cert.standard and is_perfect_matching(h.edges, cert.m_outer.edges, 8)
    with pytest.raises(InvalidQueryError):
        is_absorbing(h, (0, 1, 2, 3), (3, 4, 5, 6))
    with pytest.raises(InvalidQueryError):
        is_absorbing(h, (0, 1, 2), (4, 5, 6, 7))
    with pytest.raises(InvalidQueryError):
        enumerate_absorbing_2k(Hypergraph.complete(9, 3), (0, 1, 2))


def test_perfect_matching_on_subset():
    h = Hypergraph.complete(8, 4)
    m = perfect_matching_on(h, [7, 6, 5, 4])
    assert m.edges == ((4, 5, 6, 7),)
    assert perfect_matching_on(h, [0, 1, 2]) is None


def test_expectation_table():
    e = family_size_expectation(16, 4, Fraction(1, 10))
    assert e["p"] == Fraction(1, 10) / 16 ** 7
    assert e["bound"] == Fraction(16, 10) / 40320
    assert e["below_bound"]


def sampled_family(h: Hypergraph, xi: float, seed: int, p: float):
    """The sampled family, whether or not it meets the two bounds.

    At n = 16 no family can meet the hit bound for every Q: members are
    disjoint 8-sets, so every Q meets one of them or there is only one.
    """
    try:
        return build_absorbing_family(h, xi, seed, p=p)
    except FamilyBoundViolation as exc:
        return exc.family


def test_family_and_absorption_at_high_rate():
    h = Hypergraph.complete(16, 4)
    fam = sampled_family(h, 1.0, 3, 3e-4)
    assert len(fam.members) >= 1
    assert fam.stats.exhaustive and fam.stats.q_checked == comb(16, 4)
    m = fam.matching()
    free = [v for v in range(16) if v not in m.covered][:4]
    out = absorb(h, fam, m, free)
    assert out.covered == m.covered | set(free)
    assert len(out.edges) == len(m.edges) + 1


def test_family_is_deterministic():
    h = Hypergraph.complete(16, 4)
    a = sampled_family(h, 1.0, 3, 3e-4)
    b = sampled_family(h, 1.0, 3, 3e-4)
    assert a.as_dict() == b.as_dict()


def test_family_bound_violation_carries_family():
    with pytest.raises(FamilyBoundViolation) as info:
        build_absorbing_family(Hypergraph.complete(16, 4), 0.1, seed=0)
    assert info.value.bound == "hit bound"
    assert info.value.family.members == ()


def test_hit_bound_unreachable_with_two_members():
    h = Hypergraph.complete(16, 4)
    with pytest.raises(FamilyBoundViolation) as info:
        build_absorbing_family(h, 0.6, seed=3, p=3e-3)
    fam = info.value.family
    assert len(fam.members) <= 2 and fam.stats.min_hits == 0


def test_zero_xi_is_trivially_fine():
    fam = build_absorbing_family(Hypergraph.complete(16, 4), 0, seed=0)
    assert fam.members == ()
    assert absorb(Hypergraph.complete(16, 4), fam, fam.matching(), []).edges == ()


def test_absorb_input_checks():
    h = Hypergraph.complete(16, 4)
    fam = sampled_family(h, 1.0, 3, 3e-4)
    m = fam.matching()
    covered = sorted(m.covered)
    with pytest.raises(InvalidQueryError):
        absorb(h, fam, m, covered[:4])
    with pytest.raises(InvalidQueryError):
        absorb(h, fam, m, [v for v in range(16) if v not in m.covered][:3])


def test_absorption_failure_when_no_member_fits():
    h = Hypergraph.complete(16, 4)
    fam = sampled_family(h, 1.0, 3, 3e-4)
    m = fam.matching()
    free = [v for v in range(16) if v not in m.covered]
    with pytest.raises(AbsorptionFailure):
        absorb(h, fam, m, free[: 4 * (len(fam.members) + 1)])
