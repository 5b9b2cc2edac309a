"""Experiment harness: concentration, Monte-Carlo checks, hubness, clustering."""

from .clustering import ClusterResult, ami, best_eps_ami, dp_cluster, dp_from_matrix
from .datadep import DataDependenceReport, data_dependence_test
from .hubness import HubnessRow, hubness, k_occurrences, occurrence_skewness
from .instability import (
    InstabilityRow,
    TSweepRow,
    instability_rows,
    n_epsilon,
    synth_queries,
    variance_ratio,
    vary_t_sweep,
)
from .montecarlo import (
    DISTRIBUTIONS,
    cell_band,
    cell_probability_test,
    collision_allowance,
    collision_test,
)

__all__ = [
    "ClusterResult",
    "DISTRIBUTIONS",
    "DataDependenceReport",
    "HubnessRow",
    "InstabilityRow",
    "TSweepRow",
    "ami",
    "best_eps_ami",
    "cell_band",
    "cell_probability_test",
    "collision_allowance",
    "collision_test",
    "data_dependence_test",
    "dp_cluster",
    "dp_from_matrix",
    "hubness",
    "instability_rows",
    "k_occurrences",
    "n_epsilon",
    "occurrence_skewness",
    "synth_queries",
    "variance_ratio",
    "vary_t_sweep",
]
