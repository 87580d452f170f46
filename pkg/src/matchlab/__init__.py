"""Extremal constructions, degree thresholds and matching algorithms for k-uniform hypergraphs."""

from .constructions import ExtremalSpec, Variant, build_b, build_b_bar, build_bt, build_k_r, extremal_specs
from .degrees import codegree_threshold, delta_n42_closed_form, delta_threshold_bruteforce
from .hypercore import Hypergraph, Partition, degree, min_degree

__version__ = "0.1.0"

__all__ = [
    "ExtremalSpec", "Hypergraph", "Partition", "Variant", "build_b", "build_b_bar", "build_bt", "build_k_r",
    "codegree_threshold", "degree", "delta_n42_closed_form", "delta_threshold_bruteforce", "extremal_specs",
    "min_degree",
]
