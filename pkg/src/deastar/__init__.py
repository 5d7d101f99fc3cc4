"""A*, AlphA* and the delta-epsilon-alpha* real-time search on grid worlds."""

from .alpha import AlphaParams, Perimeter, alpha_predicate, alpha_star, epsilon_bound, weight
from .dea import Branch, PacParams, dea_star, exceedance_indicator, promissory_terminated, select_branch
from .grid import (
    GridMap,
    Heuristic,
    generate_maze,
    generate_obstacle_field,
    heuristic_value,
    neighbors,
    parse_map,
    render_map,
)
from .harness import ExperimentConfig, ResultSet, compare_policies, exceedance_rate, run_experiment
from .oracle import dijkstra_cost, enumerate_paths
from .realtime import (
    AlphaStarPolicy,
    AstarReplan,
    SensingMode,
    Trace,
    dominance_check,
    execute_realtime,
    literal_cost,
    traveled_cost,
)
from .rng import SplitMix64, derive_seed

__all__ = [
    "AlphaParams", "Perimeter", "alpha_predicate", "alpha_star", "epsilon_bound", "weight",
    "Branch", "PacParams", "dea_star", "exceedance_indicator", "promissory_terminated", "select_branch",
    "GridMap", "Heuristic", "generate_maze", "generate_obstacle_field", "heuristic_value",
    "neighbors", "parse_map", "render_map",
    "ExperimentConfig", "ResultSet", "compare_policies", "exceedance_rate", "run_experiment",
    "dijkstra_cost", "enumerate_paths",
    "AlphaStarPolicy", "AstarReplan", "SensingMode", "Trace", "dominance_check",
    "execute_realtime", "literal_cost", "traveled_cost",
    "SplitMix64", "derive_seed",
]
