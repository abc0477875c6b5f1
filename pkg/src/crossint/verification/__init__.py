"""Exhaustive and scan-based verification of the weighted cross-intersecting bound."""
from .checks import (
    BipartiteResult,
    BipartiteTestInstance,
    CorollaryResult,
    FMResult,
    InequalityReport,
    KKResult,
    MainVerdict,
    allowed_cases,
    canonical_values,
    corollary_constructions,
    endpoint_claim_holds,
    max_intersecting_family,
    scan_inequalities,
    specialization_holds,
    verify_bipartite_lemma,
    verify_corollary,
    verify_kk_preservation,
    verify_main_theorem,
    verify_nonempty_bound,
    verify_proposition_fm,
)
from .classify import ExtremalClassification, classify_bits, classify_extremal
from .engines import ScanResult, brute_force_max, l_initial_scan, minimal_s_initial

__all__ = [
    "BipartiteResult", "BipartiteTestInstance", "CorollaryResult", "ExtremalClassification",
    "FMResult", "InequalityReport", "KKResult", "MainVerdict", "ScanResult",
    "allowed_cases", "brute_force_max", "canonical_values", "classify_bits",
    "classify_extremal", "corollary_constructions", "endpoint_claim_holds",
    "l_initial_scan", "max_intersecting_family", "minimal_s_initial", "scan_inequalities",
    "specialization_holds", "verify_bipartite_lemma", "verify_corollary",
    "verify_kk_preservation", "verify_main_theorem", "verify_nonempty_bound",
    "verify_proposition_fm",
]
