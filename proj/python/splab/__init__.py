"""Spatial branch-and-bound with RLT relaxations and learned branching-rule selection."""

import json as _json

from ._core import (
    DataError,
    ModelError,
    ParseError,
    Problem,
    QuantileForest,
    Selector,
    extract_features,
    feature_names,
    lb_pace,
    normalize,
    parse_problem,
    pinball_loss,
    read_problem,
    rule_names,
)
from ._core import _solve_json


def solve(problem, rule="max", time_limit=60.0, node_limit=1_000_000, gap=1e-4, time_mode="wall"):
    """Solve with one branching rule and return the trace as a dict."""
    return _json.loads(_solve_json(problem, rule, time_limit, node_limit, gap, time_mode))


def features(problem):
    """Feature values keyed by name."""
    return dict(zip(feature_names(), extract_features(problem)))

__all__ = [
    "DataError",
    "ModelError",
    "ParseError",
    "Problem",
    "QuantileForest",
    "Selector",
    "extract_features",
    "feature_names",
    "features",
    "lb_pace",
    "normalize",
    "parse_problem",
    "pinball_loss",
    "read_problem",
    "rule_names",
    "solve",
]
