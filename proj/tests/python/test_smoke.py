import math

import pytest

import gapkit


def test_free_problem():
    res = gapkit.gap(gapkit.Potential.constant(0.0))
    assert res.lambda1 == pytest.approx(1.0, abs=1e-10)
    assert res.lambda2 == pytest.approx(4.0, abs=1e-10)
    assert res.x_minus == pytest.approx(math.pi / 3, abs=1e-8)
    assert res.crossing_sign_changes == 2


def test_eigenpairs_and_oracle():
    V = gapkit.step_potential(100.0, math.pi / 20)
    pairs = gapkit.solve(V, k=2)
    assert [p["sign_changes"] for p in pairs] == [0, 1]
    assert len(pairs[0]["x"]) == len(pairs[0]["u"])
    closed = gapkit.step_eigenvalues(100.0, math.pi / 20, 2)
    assert closed[0] == pytest.approx(100.26298330400287648, rel=1e-12)
    oracle = gapkit.dense_oracle(V, 2, 1024)
    assert oracle[1] == pytest.approx(closed[1], rel=1e-6)
    assert pairs[1]["lambda"] == pytest.approx(closed[1], rel=1e-9)


def test_potential_round_trip_and_shape():
    V = gapkit.Potential.piecewise_constant([0.0, 1.0, 2.0, math.pi], [3.0, 0.0, 5.0])
    assert V.classify().startswith("single_well")
    W = gapkit.Potential.from_json(V.to_json())
    assert W(1.5) == V(1.5) == 0.0
    assert W.reflect()(math.pi - 1.5) == pytest.approx(0.0)


def test_limit_constant_and_step_optimum():
    theta, limit = gapkit.solve_theta()
    assert math.tan(theta) == pytest.approx(theta, rel=1e-12)
    assert limit == pytest.approx(2.04575, abs=5e-6)
    rep = gapkit.minimize_step_family(100.0)
    assert rep["gamma_star"] == pytest.approx(2.103702548327883, abs=1e-9)
    assert abs(rep["stationarity"]) < 1e-8
    red = gapkit.solve_reduced(0.2)
    assert red["s"] is None


def test_errors_map_to_python():
    with pytest.raises(ValueError):
        gapkit.step_eigenvalues(10.0, 0.0, 2)
    with pytest.raises(ValueError):
        gapkit.Potential.piecewise_constant([0.0, 1.0], [1.0, 2.0])
