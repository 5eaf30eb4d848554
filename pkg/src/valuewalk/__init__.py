"""Outlier detection in categorical data via value-value graphs.

The library learns a per-value outlierness from the co-occurrence
structure of a categorical dataset, either by a damped biased random
walk on a directed value graph or by a closed-form subgraph-density
factor on the undirected one, and turns it into object outlier scores,
outlying feature selection and data-complexity indicators.
"""

from .dataset import (
    CategoricalDataset,
    DataFormatError,
    FrequencyStats,
    compute_stats,
    from_columns,
    load_csv,
    preprocess,
    take_features,
    write_csv,
)
from .evaluation import (
    ComplexityReport,
    FeatureEfficiency,
    auc,
    complexity_report,
    feature_efficiency,
    generate_synthetic,
    kappa_het,
    kappa_vcc,
)
from .factors import (
    InfluenceMatrix,
    IntraFactor,
    conditional_influence,
    intra_outlierness,
    lift_influence,
)
from .graph import ValueGraph, build_cbrw_graph, build_sdrw_graph, dump_edges, graph_stats
from .kernels import HAVE_NATIVE, backend_name
from .peeling import (
    GammaFactor,
    PeelingResult,
    degree_stationary,
    gamma_factor,
    peel_subgraphs,
    subgraph_density,
    subgraph_outlierness,
)
from .pipeline import (
    METHODS,
    DetectionResult,
    DetectorConfig,
    SelectionResult,
    detect,
    select,
)
from .scoring import (
    FeatureRelevance,
    ObjectScores,
    compute_value_outlierness,
    density_graph,
    feature_relevance,
    marp_scores,
    object_scores,
    select_features,
    variant_scores,
    walk_transition,
)
from .walks import (
    OutliernessVector,
    TransitionMatrix,
    convergence_trace,
    stationary_distribution,
    transition_matrix,
)

__version__ = "0.1.0"

__all__ = [
    "CategoricalDataset",
    "ComplexityReport",
    "DataFormatError",
    "DetectionResult",
    "DetectorConfig",
    "FeatureEfficiency",
    "FeatureRelevance",
    "FrequencyStats",
    "GammaFactor",
    "HAVE_NATIVE",
    "InfluenceMatrix",
    "IntraFactor",
    "METHODS",
    "ObjectScores",
    "OutliernessVector",
    "PeelingResult",
    "SelectionResult",
    "TransitionMatrix",
    "ValueGraph",
    "auc",
    "backend_name",
    "build_cbrw_graph",
    "build_sdrw_graph",
    "complexity_report",
    "compute_stats",
    "compute_value_outlierness",
    "conditional_influence",
    "convergence_trace",
    "degree_stationary",
    "detect",
    "density_graph",
    "dump_edges",
    "feature_efficiency",
    "feature_relevance",
    "from_columns",
    "gamma_factor",
    "generate_synthetic",
    "graph_stats",
    "intra_outlierness",
    "kappa_het",
    "kappa_vcc",
    "lift_influence",
    "load_csv",
    "marp_scores",
    "object_scores",
    "peel_subgraphs",
    "preprocess",
    "select",
    "select_features",
    "stationary_distribution",
    "subgraph_density",
    "subgraph_outlierness",
    "take_features",
    "transition_matrix",
    "variant_scores",
    "walk_transition",
    "write_csv",
]
