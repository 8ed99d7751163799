"""Two-sample randomization tests for networks based on operator norms."""

from .errors import *  # noqa: F401,F403
from .network import (
    Network,
    NetworkPair,
    RectangularNetwork,
    align,
    embed_rectangular,
    indicator_diff,
    threshold_grid,
    validate,
)
from .io import IngestOptions, load_edge_list, load_matrix, load_network
from .opnorm import (
    GROTHENDIECK_K,
    SdpSolution,
    SolverOptions,
    row_norm_stats,
    s_inf1,
    sdp_inf1,
    spectral_norm,
    t22,
    t_inf1_exact,
)
from .statistics import (
    DescriptiveSummary,
    StatisticId,
    StatisticOptions,
    clustering_coefficient,
    degree_sequence,
    describe,
    diameter_largest_component,
    eigenvector_centrality,
    evaluate_statistic,
)
from .randomization import SwapMask, TestReport, apply_swap, draw_swap_mask, run_battery, run_test
from .simulation import (
    RandomGraphModel,
    er_model,
    population_diagnostics,
    power_study,
    sample_network,
    star_block_model,
)

__version__ = "0.1.0"
