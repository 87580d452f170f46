"""Absorbing sets and families, the link graph G(H), and colouring censuses."""

from .auxgraph import (AuxGraph, CaseReport, Extraction, bipartite_distance, bipartite_extract, build_aux_graph,
                       case_ab_detector, case_report, clique_pair_distance, exhaustive_min_distance,
                       expected_aux_edges)
from .coloring import (InjectionCheck, TwoColoring, bad_c4_census, bad_c4_witness_count, c3_census,
                       difference_injection_check, difference_pair, encode_h_as_coloring, format_coloring,
                       parse_coloring, read_coloring, write_coloring)
from .family import (AbsorbingFamily, AbsorbingMember, AbsorptionFailure, FamilyBoundViolation, FamilyStats, absorb,
                     build_absorbing_family, family_size_expectation, make_rng, unrank_combination)
from .sets import (AbsorbingCertificate, EnumerationResult, enumerate_absorbing_2k, enumerate_absorbing_4k,
                   is_absorbing, link_neighbourhoods, perfect_matching_on)

__all__ = [
    "AbsorbingCertificate", "AbsorbingFamily", "AbsorbingMember", "AbsorptionFailure", "AuxGraph", "CaseReport",
    "EnumerationResult", "Extraction", "FamilyBoundViolation", "FamilyStats", "InjectionCheck", "TwoColoring",
    "absorb", "bad_c4_census", "bad_c4_witness_count", "bipartite_distance", "bipartite_extract",
    "build_absorbing_family", "build_aux_graph", "c3_census", "case_ab_detector", "case_report",
    "clique_pair_distance", "difference_injection_check", "difference_pair", "encode_h_as_coloring",
    "enumerate_absorbing_2k", "enumerate_absorbing_4k", "exhaustive_min_distance", "expected_aux_edges",
    "family_size_expectation", "format_coloring", "is_absorbing", "link_neighbourhoods", "make_rng",
    "parse_coloring", "perfect_matching_on", "read_coloring", "unrank_combination", "write_coloring",
]
