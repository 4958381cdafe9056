#!/usr/bin/env python3
"""Smoke test for the _metriclab extension module.

Build the module and place it on the path first:

    cargo build --release -p metriclab-python
    cp target/release/lib_metriclab.so python/_metriclab.so
    python3 python/smoke_test.py
"""
import json
import math
import os
import sys

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

import _metriclab as ml  # noqa: E402


def approx(a, b, tol=1e-12):
    assert abs(a - b) <= tol, f"{a} != {b} (tol {tol})"


def main():
    # --- spaces and distances -------------------------------------------
    cg = ml.Space.cg_interval()
    assert ml.distance(cg, 0.0, 0.5) == 1.0
    assert ml.distance(cg, 0.3, 0.7) == 2.0
    assert ml.distance(cg, 0.7, 0.7) == 0.0

    hh = ml.Space.hedgehog(8)
    approx(ml.distance(hh, (3, 0.2), (3, 0.9)), 0.7)
    approx(ml.distance(hh, (1, 0.2), (4, 0.5)), 0.7)

    tv = ml.Space.two_valued(10, 1.5)
    assert ml.distance(tv, 2, 7) == 1.5

    c00 = ml.Space.c00(100)
    approx(ml.distance(c00, {1: 0.5, 7: -2.0}, {1: 0.25, 9: 1.0}), 2.0)

    try:
        ml.distance(cg, 0.5, 7)
        raise AssertionError("kind mismatch must raise")
    except (ValueError, TypeError):
        pass

    # --- axiom checks ----------------------------------------------------
    ok, violation = ml.check_metric_axioms([[0, 1, 1], [1, 0, 2], [1, 2, 0]])
    assert ok and violation is None
    ok, violation = ml.check_metric_axioms([[0, 1, 5], [1, 0, 1], [5, 1, 0]])
    assert not ok and "Triangle" in violation
    assert ml.is_strong_triangle([[0, 1, 1], [1, 0, 1], [1, 1, 0]])
    assert not ml.is_strong_triangle([[0, 1, 2], [1, 0, 1], [2, 1, 0]])

    # --- k-NN rule --------------------------------------------------------
    line = ml.Space.euclidean(1)
    pts = [[0.1], [0.2], [0.3]]
    approx(ml.knn_radius(line, pts, [0.0], 2), 0.2)

    # split vote goes to 1
    pred = ml.predict(line, [[0.0], [0.1], [0.9], [1.0]], [0, 0, 1, 1], [0.5], 4, seed=1)
    assert pred == 1

    # --- problems ---------------------------------------------------------
    p = ml.Problem.cerou_guyader()
    assert p.bayes_error() == 0.0
    assert p.eval_eta(0.0) == 0.0 and p.eval_eta(0.7) == 1.0
    assert p.bayes_label(0.0) == 0

    approx(ml.Problem.euclidean_linear().bayes_error(), 0.25)
    assert ml.Problem.two_valued().bayes_error() == 0.0

    sample = p.draw_sample(seed=7, n=1000)
    assert len(sample) == 1000
    zeros = sum(1 for x, _ in sample if x == 0.0)
    assert 400 < zeros < 600, f"origin draws: {zeros}"
    assert sample == p.draw_sample(seed=7, n=1000), "sampling must be reproducible"

    mean, sem, k = ml.Problem.constant(1.0).estimate_error(
        50, "ceil_sqrt", master_seed=3, repetitions=8, test_draws=10
    )
    assert mean == 0.0 and sem == 0.0 and k == 8

    # --- nagata ------------------------------------------------------------
    two_valued_matrix = [[0.0 if i == j else 1.0 for j in range(6)] for i in range(6)]
    assert ml.multiplicity(two_valued_matrix, [(c, 0.5) for c in range(6)]) == 1
    chosen, mult = ml.find_subfamily(two_valued_matrix, [(c, 0.5) for c in range(6)], 0)
    assert mult == 1 and len(chosen) == 6

    verdict = ml.check_dim_at_scale(two_valued_matrix, list(range(6)), 0, scale=1.0)
    assert verdict["holds"]

    line_matrix = [[abs(i - j) * 1.0 for j in range(4)] for i in range(4)]
    verdict = ml.check_dim_at_scale(line_matrix, list(range(4)), 0)
    assert not verdict["holds"] and len(verdict["counterexample"]) >= 2

    # --- harness ------------------------------------------------------------
    config = {
        "problem": {"name": "constant", "value": 1.0},
        "n_grid": [20, 40],
        "schedule": {"type": "ceil_sqrt"},
        "policy": "uniform_random_order",
        "repetitions": 4,
        "test_draws": 5,
        "master_seed": 11,
        "output_path": "unused.csv",
    }
    rows = ml.run_experiment_json(json.dumps(config))
    assert [r["n"] for r in rows] == [20, 40]
    assert all(r["err_mean"] == 0.0 for r in rows)
    assert rows == ml.run_experiment_json(json.dumps(config))

    print("smoke test OK")


if __name__ == "__main__":
    main()
