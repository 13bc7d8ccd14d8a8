"""Exact combinatorics of the loop vertex expansion for zero-dimensional phi^4."""

from .graphs import (
    DisconnectedGraphError,
    GraphSpecError,
    LabeledMultigraph,
    SpanningForest,
    build_graph,
    count_spanning_trees_matrix_tree,
    enumerate_spanning_forests,
    enumerate_spanning_trees,
    load_graph,
    tree_path,
)
from .series import QI2, SqrtLambdaSeries, series_exp, series_log
from .weights import forest_weight, tree_weight, weight_table
from .zerodim import log_z, z_from_feynman, z_from_loop_vertices

__version__ = "0.1.0"

__all__ = [
    "DisconnectedGraphError",
    "GraphSpecError",
    "LabeledMultigraph",
    "QI2",
    "SpanningForest",
    "SqrtLambdaSeries",
    "build_graph",
    "count_spanning_trees_matrix_tree",
    "enumerate_spanning_forests",
    "enumerate_spanning_trees",
    "forest_weight",
    "load_graph",
    "log_z",
    "series_exp",
    "series_log",
    "tree_path",
    "tree_weight",
    "weight_table",
    "z_from_feynman",
    "z_from_loop_vertices",
]
