"""Annotated-topology toolkit.

Extracts the correlation profile of a relationship-annotated network
(degree distributions, per-color annotation distributions, and edge-level
joint degree distributions), rescales it to arbitrary sizes with fitted
CCDFs and empirical copulas, constructs synthetic annotated random graphs
reproducing the profile, and evaluates the results.
"""

from .construct import (QuantilePool, construct_1k, construct_2k,
                        rewire_loops, target_edge_counts)
from .copula import (copula_ks2d, merge_with_marginals, rank_transform,
                     resample_rows, rescale_add)
from .fit import (FitError, FitOptions, FittedCCDF, empirical_ccdf, fit_ccdf,
                  ks_to_fit, sample_degrees)
from .fixture import make_fixture_graph
from .graph_core import (AnnotatedGraph, DegreeVector, EdgeKind,
                         EmptyGraphError, GraphError, StubColor,
                         is_connected, largest_connected_component, pair_key,
                         simplify_to_lcc, stub_totals)
from .ingest import (CleaningReport, EdgeRecord, ParseError, clean_and_build,
                     format_edge_list, load_graph, parse_edge_list,
                     write_edge_list)
from .metrics import (DistanceResult, GraphMetricsReport, PathState,
                      assortativity, distance_distribution, ensemble_stats,
                      is_valid_path, laplacian_extremes, scalar_report,
                      select_representative, write_degree_scatter)
from .profile import (ConsistencyResult, SummaryProfile,
                      check_2k_to_1k_consistency, extract_profile,
                      marginal_ad)

__all__ = [
    "AnnotatedGraph", "CleaningReport", "ConsistencyResult", "DegreeVector",
    "DistanceResult", "EdgeKind", "EdgeRecord", "EmptyGraphError", "FitError",
    "FitOptions", "FittedCCDF", "GraphError", "GraphMetricsReport",
    "ParseError", "PathState", "QuantilePool", "StubColor", "SummaryProfile",
    "assortativity", "check_2k_to_1k_consistency", "clean_and_build",
    "construct_1k", "construct_2k", "copula_ks2d", "distance_distribution",
    "empirical_ccdf", "ensemble_stats", "extract_profile", "fit_ccdf",
    "format_edge_list", "is_connected", "is_valid_path",
    "laplacian_extremes", "largest_connected_component", "load_graph",
    "make_fixture_graph", "marginal_ad", "merge_with_marginals", "pair_key",
    "parse_edge_list", "rank_transform", "resample_rows", "rescale_add",
    "rewire_loops", "sample_degrees", "scalar_report",
    "select_representative", "simplify_to_lcc", "stub_totals",
    "target_edge_counts", "write_degree_scatter", "write_edge_list",
]

__version__ = "0.3.0"
