"""Exact inference for the 1K and 2K exponential random graph models."""

from ._backend import BACKEND
from .asymptotics import (
    ExperimentConfig,
    ExperimentReport,
    h_sequence,
    lambda_k,
    mc_degree_presence,
    mc_nonzero_count,
    singularity_experiment,
)
from .constructions import near_regular_graph, regular_graph, spectrum_bidegree_nonzeros, spectrum_graph
from .enumeration import PartitionTable, count_no_isolated, dominance_ratio, enumerate_graphs, nu, partition_table
from .errors import (
    DomainError,
    EnumerationCapError,
    GraphFormatError,
    InconsistentBiDegreeError,
    InvalidDegreeVectorError,
    NonexistenceError,
    OutOfSupportError,
    ReferenceCoordinateError,
)
from .graph import (
    Graph,
    bi_degree_vector,
    degree_vector,
    degrees_from_bidegrees,
    edges_from_degrees,
    parse_edge_list,
    read_graph,
    scaled_bi_degree,
)
from .model1k import (
    FitResult1K,
    NaturalParams1K,
    alpha_from_p,
    change_statistic,
    er_embedding,
    expected_stats_1k,
    fit_1k,
    log_prob_1k,
    prob_degree_present,
    psi_1k,
)
from .model2k import (
    FitResult2K,
    NaturalParams2K,
    bidegree_nonzero_upper_bound,
    expected_stats_2k,
    fit_2k,
    log_prob_2k,
    psi_2k,
)
from .polytope import PolytopeSpec, interior_membership, mle_exists_1k, polytope_A, polytope_B

__version__ = "0.1.0"
