"""Graph sampling set selection by Gershgorin disc alignment."""

from .discs import DiscState, eig_sandwich_check, left_end, sampling_vector, scale_factor
from .generators import gen_ba_graph, gen_community_graph, gen_sensor_graph
from .graph import Graph, GraphError, build_graph, laplacian_quadratic, path_graph
from .io import load_edge_list, save_edge_list
from .recon import (
    SampleObservation, SolverConfig, apply_sampling, glr_reconstruct, mse, mse_bound_check,
)
from .sampler import (
    CoverageSubset, SamplingOutcome, assemble_scaling, bs_gda, estimate_coverage,
    greedy_cover, random_sampler, verify_alignment,
)

__version__ = "0.1.0"
