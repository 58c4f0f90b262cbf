import math
import os
import pathlib

import pytest

import splab

SUITE = pathlib.Path(__file__).resolve().parents[1] / "data" / "suite"

BILINEAR = """
var x1 in [0, 1]
var x2 in [0, 1]
min: -x1*x2
st c1: x1 + x2 <= 1.5
"""


def test_parse_and_render_round_trip():
    p = splab.parse_problem(BILINEAR)
    assert (p.num_vars, p.num_constraints, p.degree) == (2, 1, 2)
    q = splab.parse_problem(p.render())
    assert q.render() == p.render()
    assert p.evaluate_objective([0.5, 1.0]) == -0.5


def test_parse_error_is_value_error():
    with pytest.raises(ValueError):
        splab.parse_problem("var x1 in [0, 1]\nmin: x1 +* x2\n")


def test_solve_every_rule_on_bilinear():
    p = splab.parse_problem(BILINEAR)
    for rule in splab.rule_names():
        t = splab.solve(p, rule, time_limit=100, time_mode="nodes")
        assert t["status"] == "solved"
        assert abs(t["ub_fin"] - (-0.5625)) <= 1e-3
        assert t["lb_fin"] <= t["ub_fin"] + 1e-9
    with pytest.raises(ValueError):
        splab.solve(p, "strong")


def test_suite_instance_matches_oracle():
    oracle = {}
    for line in (SUITE / "oracle.csv").read_text().splitlines()[1:]:
        name, value = line.split(",")[:2]
        oracle[name] = float(value)
    p = splab.read_problem(str(SUITE / "hand-03.poly"))
    t = splab.solve(p, "dual")
    assert abs(t["ub_fin"] - oracle["hand-03.poly"]) <= 1e-2


def test_features_and_pace():
    p = splab.parse_problem(BILINEAR)
    f = splab.features(p)
    assert len(f) == len(splab.feature_names())
    assert all(math.isfinite(v) for v in f.values())
    assert splab.lb_pace(3600, 2, 2) == 3.6e6
    assert splab.normalize({"max": 2.0, "sum": 4.0}) == {"max": 1.0, "sum": 0.5}


def test_quantile_forest_step():
    import random

    rng = random.Random(4)
    x = [[rng.random(), rng.random()] for _ in range(300)]
    y = [rng.random() + (1.0 if r[0] > 0.5 else 0.0) for r in x]
    f = splab.QuantileForest.fit(x, y, trees=100, seed=1)
    assert f.num_trees == 100
    assert abs(f.predict_quantile([0.9, 0.5], 0.3) - 1.3) < 0.15
    assert abs(f.predict_quantile([0.1, 0.5], 0.3) - 0.3) < 0.15
    assert splab.pinball_loss(1.0, 0.0, 0.3) == pytest.approx(0.3)
