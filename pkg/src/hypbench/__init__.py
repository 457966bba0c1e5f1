"""Synthetic graph benchmark datasets from circle geometry.

Generates node graphs, binary node features, and node labels whose degree
heterogeneity, clustering, feature structure, and label homophily are each
set by an explicit parameter. Bundles are written to plain TSV plus a JSON
manifest and are reproducible from (master seed, identifier, realization)
alone.
"""

from .bipartite import BipartiteEdgeSet, feature_matrix_view, generate_bipartite
from .bundle import (
    DatasetBundle,
    SplitSpec,
    make_lp_split,
    make_nc_split,
    read_bundle,
    write_bundle,
)
from .calibration import (
    MatchDiagnostics,
    adjust_hidden_degrees,
    adjust_hidden_degrees_bipartite,
    mean_pair_probability,
)
from .labels import (
    LabelAssignment,
    assign_labels,
    assign_labels_from_centroids,
    label_probabilities,
    max_intracluster_distance,
)
from .metrics import (
    MetricsReport,
    bipartite_clustering_mean,
    bipartite_local_clustering,
    clustering_mean,
    components,
    compute_report,
    degree_ccdf,
    exponential_binning,
    homophily,
    knn_values,
    knn_values_bipartite,
    local_clustering,
    randomize_bipartite_cm,
)
from .model import (
    BipartiteParams,
    LabelParams,
    Placements,
    UnipartiteParams,
    angular_distance,
    connection_probability_bipartite,
    connection_probability_bipartite_h2,
    connection_probability_h2,
    connection_probability_s1,
    to_hyperbolic,
    to_hyperbolic_bipartite,
)
from .pipeline import finish_dataset, generate_dataset, generate_topology
from .sampling import (
    SeedSpec,
    kappas_from_sequence,
    read_degree_sequence,
    sample_angles,
    sample_power_law_kappas,
)
from .sweep import GridPoint, SweepGrid, expand_grid, run_sweep
from .unipartite import EdgeSet, expected_degree, generate_unipartite

__version__ = "0.1.0"

__all__ = [
    "BipartiteEdgeSet",
    "BipartiteParams",
    "DatasetBundle",
    "EdgeSet",
    "GridPoint",
    "LabelAssignment",
    "LabelParams",
    "MatchDiagnostics",
    "MetricsReport",
    "Placements",
    "SeedSpec",
    "SplitSpec",
    "SweepGrid",
    "UnipartiteParams",
    "adjust_hidden_degrees",
    "adjust_hidden_degrees_bipartite",
    "angular_distance",
    "assign_labels",
    "assign_labels_from_centroids",
    "bipartite_clustering_mean",
    "bipartite_local_clustering",
    "clustering_mean",
    "components",
    "compute_report",
    "connection_probability_bipartite",
    "connection_probability_bipartite_h2",
    "connection_probability_h2",
    "connection_probability_s1",
    "degree_ccdf",
    "expand_grid",
    "expected_degree",
    "exponential_binning",
    "feature_matrix_view",
    "finish_dataset",
    "generate_bipartite",
    "generate_dataset",
    "generate_topology",
    "generate_unipartite",
    "homophily",
    "kappas_from_sequence",
    "knn_values",
    "knn_values_bipartite",
    "label_probabilities",
    "local_clustering",
    "make_lp_split",
    "make_nc_split",
    "max_intracluster_distance",
    "mean_pair_probability",
    "randomize_bipartite_cm",
    "read_bundle",
    "read_degree_sequence",
    "run_sweep",
    "sample_angles",
    "sample_power_law_kappas",
    "to_hyperbolic",
    "to_hyperbolic_bipartite",
    "write_bundle",
]
