from __future__ import annotations

from itertools import combinations
import pytest
from hypothesis import given, settings, strategies as st

from matchlab.constructions import (ExtremalSpec, Variant, build_b, build_b_bar, build_bt, build_k_r,
                                    expanded_cycle_template, extremal_specs, k_r_edge_count, spec_in_family)
from matchlab.errors import InvalidConstructionError, InvalidQueryError
from matchlab.hypercore import complement


@given(st.integers(4, 10), st.integers(2, 4), st.data())
@settings(max_examples=40, deadline=None)
def test_parity_constructions_partition_all_ksets(n, k, data):
    a = data.draw(st.sets(st.integers(0, n - 1), min_size=1, max_size=n - 1))
    b, bbar = build_b(n, k, a), build_b_bar(n, k, a)
    assert complement(b) == bbar
    for e in b.edges:
        assert len(a.intersection(e)) % 2 == 1
    for e in bbar.edges:
        assert len(a.intersection(e)) % 2 == 0


def test_family_membership_rules():
    # complement: |A| odd; odd construction: |A| even iff n/k odd
    assert spec_in_family(12, 4, Variant.BBAR, 5)
    assert not spec_in_family(12, 4, Variant.BBAR, 6)
    assert spec_in_family(12, 4, Variant.B, 6)
    assert not spec_in_family(12, 4, Variant.B, 5)
    assert spec_in_family(16, 4, Variant.B, 5)
    assert not spec_in_family(16, 4, Variant.B, 6)
    assert not spec_in_family(10, 4, Variant.B, 5)


@pytest.mark.parametrize("n,k,expected", [(8, 4, 8), (12, 4, 11), (12, 3, 12), (12, 6, 12), (16, 4, 16)])
def test_extremal_spec_counts(n, k, expected):
    specs = extremal_specs(n, k)
    assert len(specs) == expected
    assert all(s.in_family for s in specs)
    assert [s.variant for s in specs] == sorted((s.variant for s in specs), key=lambda v: v is Variant.B)


def test_spec_validation():
    with pytest.raises(InvalidConstructionError):
        ExtremalSpec(8, 4, Variant.B, 0)
    with pytest.raises(InvalidQueryError):
        extremal_specs(10, 4)
    assert Variant.parse("B-bar") is Variant.BBAR
    with pytest.raises(ValueError):
        Variant.parse("C")


def test_bt_offsets():
    h, part = build_bt(12, 4, 2, Variant.BBAR)
    assert part.a_side == frozenset(range(8))
    assert h == build_b_bar(12, 4, range(8))


@given(st.integers(0, 6), st.integers(0, 6), st.integers(2, 4), st.integers(-1, 5))
@settings(max_examples=80, deadline=None)
def test_k_r_counts(a_size, b_size, k, r):
    a, b = range(a_size), range(a_size, a_size + b_size)
    h = build_k_r(a, b, k, r, n=max(a_size + b_size, k))
    assert h.num_edges == k_r_edge_count(a_size, b_size, k, r)
    if h.meta["feasible"]:
        assert all(sum(v < a_size for v in e) == r for e in h.edges)
    else:
        assert h.num_edges == 0


def test_k_r_rejects_overlap():
    with pytest.raises(InvalidConstructionError):
        build_k_r([0, 1], [1, 2], 2, 1)


def test_expanded_cycle_templates():
    tri = expanded_cycle_template(2, 3)
    assert tri.n == 6 and tri.k == 4 and tri.num_edges == 3
    c4 = expanded_cycle_template(1, 4)
    assert c4.edges == ((0, 1), (0, 3), (1, 2), (2, 3))
    assert all(len(set(x) & set(y)) == 2 for x, y in combinations(tri.edges, 2))
