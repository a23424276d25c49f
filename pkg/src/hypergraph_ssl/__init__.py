"""Hypergraph Laplacian semi-supervised learning for protein function prediction."""
from .coexpression import coexpression_similarity, graph_laplacian, threshold_adjacency
from .evaluation import (
    METHODS,
    AnnotationMatrix,
    ExperimentReport,
    FoldPlan,
    accuracy,
    kfold_split,
    run_experiment,
)
from .hyperedges import (
    ClusterAssignment,
    ClusteringError,
    ExpressionMatrix,
    cluster_count,
    incidence_from_clusters,
    kmeans,
    zscore_rows,
)
from .hypergraph import (
    DegreeVectors,
    Hypergraph,
    HypergraphError,
    OperatorMatrix,
    compute_degrees,
    incidence_from_coo_text,
    incidence_to_coo_text,
    propagation_matrix,
    quadratic_form_oracle,
    random_walk_laplacian,
    symmetric_laplacian,
    unnormalized_laplacian,
)
from .io import DataFormatError, load_annotations, load_expression
from .propagation import (
    ConvergenceWarning,
    IterationResult,
    PropagationConfig,
    alpha_from_gamma,
    build_initial_labels,
    predict,
    propagate_closed_form,
    propagate_iterative,
    solve_sym_regularized,
    solve_unnormalized,
)
from .synthetic import generate_synthetic

__version__ = "0.1.0"
