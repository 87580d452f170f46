"""Perfect-matching search, certificates and constructive matchers."""

from .exact import (Matching, ParityCertificate, find_perfect_matching, is_valid_matching, matching_problems,
                    parity_certificate, search_nodes, search_parity_certificate)
from .extremal import FailureReport, MatcherConfig, MatcherRun, extremal_case_matcher
from .structured import (GoodnessReport, GreedyStall, GreedyTrace, claim_edge_avoiding, balanced_good_matcher,
                         balanced_split_matching, goodness, greedy_structured_matching, greedy_alpha_bound,
                         pattern_deficiency)

__all__ = [
    "FailureReport", "GoodnessReport", "GreedyStall", "GreedyTrace", "Matching", "MatcherConfig", "MatcherRun",
    "ParityCertificate", "claim_edge_avoiding", "balanced_good_matcher", "balanced_split_matching",
    "extremal_case_matcher", "find_perfect_matching", "goodness", "greedy_structured_matching",
    "is_valid_matching", "greedy_alpha_bound", "matching_problems", "parity_certificate", "pattern_deficiency", "search_nodes",
    "search_parity_certificate",
]
