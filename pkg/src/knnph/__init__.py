"""kNN-ordering and Vietoris-Rips persistent homology, with PageRank
rank-convergence analysis built on top."""

from .geometry import (
    PointCloud,
    TieRule,
    argsort_row,
    linf_cloud_distance,
    load_points_csv,
    pairwise_distances,
)
from .knn import (
    Neighborhood,
    SymOrderMatrix,
    is_knn_preserving,
    knn_equivalent,
    neighborhood,
    ordering_function,
    symmetrize,
)
from .filtration import (
    FilteredComplex,
    flag_expand,
    knn_filtered_complex,
    skeleton,
    vr_filtered_complex,
)
from .persistence import (
    PersistenceDiagram,
    PersistencePoint,
    betti_numbers,
    compute_persistence,
    diagram_from_json,
    diagram_to_json,
)
from .bottleneck import MatchingProblem, bottleneck, feasible_at
from .pagerank import (
    Graph,
    IterationTrace,
    PageRankConfig,
    load_edge_list,
    paper_initial_condition,
    power_iterate,
    rank_convergence_times,
    rank_order,
    transition_row,
)
from .convergence import (
    ConvergenceReport,
    LocalScope,
    build_report,
    embed_1d,
    homological_curve,
    knn_convergence_time,
    norm_error_curve,
    rank_diff_curve,
    restrict,
)

__all__ = [
    "PointCloud", "TieRule", "argsort_row", "linf_cloud_distance",
    "load_points_csv", "pairwise_distances",
    "Neighborhood", "SymOrderMatrix", "is_knn_preserving", "knn_equivalent",
    "neighborhood", "ordering_function", "symmetrize",
    "FilteredComplex", "flag_expand", "knn_filtered_complex", "skeleton",
    "vr_filtered_complex",
    "PersistenceDiagram", "PersistencePoint", "betti_numbers",
    "compute_persistence", "diagram_from_json", "diagram_to_json",
    "MatchingProblem", "bottleneck", "feasible_at",
    "Graph", "IterationTrace", "PageRankConfig", "load_edge_list",
    "paper_initial_condition", "power_iterate", "rank_convergence_times",
    "rank_order", "transition_row",
    "ConvergenceReport", "LocalScope", "build_report", "embed_1d",
    "homological_curve", "knn_convergence_time", "norm_error_curve",
    "rank_diff_curve", "restrict",
]

__version__ = "0.1.0"
